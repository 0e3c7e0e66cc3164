#include "amenlab/catalog.hpp"
#include "amenlab/metrics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace amenlab;

namespace {

Rational pow2_inv(std::size_t k) { return Rational(Integer(1), Integer(1) << static_cast<unsigned>(k)); }

std::string one_period(const Configuration& x, std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += static_cast<char>('0' + x(GroupPoint{static_cast<std::int64_t>(i)}));
    return s;
}

}  // namespace

TEST(VisiblePoints, WorkedExamples) {
    const auto v = visible_points_config();
    EXPECT_EQ(v(GroupPoint{1, 0}), 1);
    EXPECT_EQ(v(GroupPoint{2, 2}), 0);
    EXPECT_EQ(v(GroupPoint{0, 0}), 0);
    EXPECT_EQ(v(GroupPoint{-3, 4}), 1);
    EXPECT_EQ(v(GroupPoint{0, 5}), 0);
}

TEST(PrimeApprox, WorkedExamples) {
    const auto x1 = prime_approx_config(1);
    EXPECT_EQ(x1(GroupPoint{2, 4}), 0);
    EXPECT_EQ(x1(GroupPoint{2, 3}), 1);
    EXPECT_EQ(density_exact([&](const GroupPoint& g) { return x1(g) == 1; }, FiniteSubset::cube(2, 0, 1)),
              make_rational(3, 4));
    const auto x2 = prime_approx_config(2);
    for (const auto& g : FiniteSubset::cube(2, -7, 7)) EXPECT_EQ(x2(g), x2(g + GroupPoint{6, 0}));
    ASSERT_TRUE(x2.period().has_value());
    EXPECT_EQ(x2.period()->exponent(), 6);
    EXPECT_THROW((void)prime_approx_config(0), Error);
    EXPECT_THROW((void)prime_approx_config(26), Error);
}

TEST(PrimeApprox, AgreesWithVisibleOffSmallPrimeMultiples) {
    const auto v = visible_points_config();
    for (int n = 1; n <= 5; ++n) {
        const auto x = prime_approx_config(n);
        for (const auto& g : FiniteSubset::cube(2, -20, 20)) {
            if (g == GroupPoint{0, 0}) continue;
            // Off the origin, v <= x^(n), and they differ only where a prime beyond p_n divides both coordinates.
            EXPECT_LE(v(g), x(g));
            if (v(g) != x(g)) {
                const auto common = std::gcd(g[0], g[1]);
                bool small = false;
                for (int i = 0; i < n; ++i) small = small || common % kPrimes[static_cast<std::size_t>(i)] == 0;
                EXPECT_FALSE(small) << g.str();
            }
        }
    }
}

TEST(PrimeApprox, DensityMatchesEulerProduct) {
    for (int n = 1; n <= 3; ++n) {
        const auto x = prime_approx_config(n);
        const std::int64_t m = x.period()->exponent();
        Rational expected = 1;
        for (int i = 0; i < n; ++i) {
            const std::int64_t p = kPrimes[static_cast<std::size_t>(i)];
            expected *= 1 - make_rational(1, p * p);
        }
        EXPECT_EQ(density_exact([&](const GroupPoint& g) { return x(g) == 1; }, FiniteSubset::cube(2, 0, m - 1)), expected);
    }
}

TEST(RfSubstitution, WorkedExamples) {
    const auto st = SubstitutionStage::standard(1, 6);
    EXPECT_EQ(st.ratio(1), 3);
    EXPECT_EQ(st.ratio(2), 5);
    const auto x1 = rf_substitution(st, 1);
    for (std::int64_t i = -5; i <= 5; ++i) EXPECT_EQ(x1(GroupPoint{i}), 0);
    const auto x2 = rf_substitution(st, 2);
    EXPECT_EQ(one_period(x2, 3), "001");
    EXPECT_EQ(x2(GroupPoint{0}), 0);
    EXPECT_EQ(x2(GroupPoint{2}), 1);
    EXPECT_EQ(x2(GroupPoint{5}), 1);
    EXPECT_EQ(x2(GroupPoint{-1}), 1);
    EXPECT_EQ(periodic_dbar(x1, x2), make_rational(1, 3));
    try {
        (void)rf_substitution(st, 7);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::stage_exhausted);
    }
}

TEST(RfSubstitution, MatchesStringConstruction) {
    const auto st = SubstitutionStage::standard(1, 5);
    for (std::size_t k = 1; k <= 5; ++k) {
        const std::string w = oracle::substitution_word(k);
        const auto x = rf_substitution(st, k);
        EXPECT_EQ(one_period(x, w.size()), w) << "k = " << k;
        EXPECT_EQ(x.period()->exponent(), static_cast<std::int64_t>(w.size()));
    }
}

TEST(RfSubstitution, ConsecutiveStagesDifferByOneTile) {
    const auto st = SubstitutionStage::standard(1, 6);
    for (std::size_t k = 1; k <= 5; ++k) {
        const Rational d = periodic_dbar(rf_substitution(st, k), rf_substitution(st, k + 1));
        EXPECT_EQ(d, make_rational(1, st.ratio(k)));
        EXPECT_LT(d, pow2_inv(k));
    }
}

TEST(RfSubstitution, CauchyBound) {
    const auto st = SubstitutionStage::standard(1, 6);
    std::vector<Configuration> xs;
    for (std::size_t k = 1; k <= 6; ++k) xs.push_back(rf_substitution(st, k));
    for (std::size_t k = 1; k <= 6; ++k) {
        for (std::size_t j = k + 1; j <= 6; ++j) {
            Rational tail = 0;
            for (std::size_t i = k; i < j; ++i) tail += pow2_inv(i);
            EXPECT_LE(periodic_dbar(xs[k - 1], xs[j - 1]), tail) << k << " " << j;
        }
    }
}

TEST(RfSubstitution, TwoDimensionalComplementTile) {
    const auto st = SubstitutionStage::standard(2, 3);
    const auto x2 = rf_substitution(st, 2);
    // x^(2) on {0,1,2}^2 is 1 only on the last tile, the point (2,2).
    for (const auto& g : FiniteSubset::cube(2, 0, 2)) EXPECT_EQ(x2(g), g == (GroupPoint{2, 2}) ? 1 : 0);
    EXPECT_EQ(periodic_dbar(rf_substitution(st, 1), x2), make_rational(1, 9));
    EXPECT_EQ(periodic_dbar(x2, rf_substitution(st, 3)), make_rational(1, 25));
}

TEST(RfSubstitution, CustomRatiosAndVolumeCap) {
    const auto st = SubstitutionStage::standard(1, 3, std::vector<std::int64_t>{4, 9});
    EXPECT_EQ(st.moduli, (std::vector<std::int64_t>{1, 4, 36}));
    EXPECT_EQ(periodic_dbar(rf_substitution(st, 2), rf_substitution(st, 3)), make_rational(1, 9));
    try {
        (void)SubstitutionStage::standard(3, 5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::stage_exhausted);
    }
}

TEST(CortezPetiteCheck, WorkedExamples) {
    const auto st = SubstitutionStage::standard(1, 4);
    const auto k1 = cortez_petite_check(st, 1);
    EXPECT_TRUE(k1.pass);
    EXPECT_EQ(k1.tiles, 3u);
    const auto k2 = cortez_petite_check(st, 2);
    EXPECT_TRUE(k2.pass);
    EXPECT_EQ(k2.tiles, 5u);
    EXPECT_EQ(st.domains[1], FiniteSubset::cube(1, 0, 2));
    EXPECT_EQ(st.domains[2], FiniteSubset::cube(1, 0, 14));
    EXPECT_TRUE(cortez_petite_check(SubstitutionStage::standard(2, 3), 2).pass);
    EXPECT_THROW((void)cortez_petite_check(st, 4), Error);
}

TEST(CortezPetiteCheck, CorruptedStagesFailWithWitness) {
    auto overlap = SubstitutionStage::standard(1, 3);
    overlap.domains[0] = FiniteSubset{GroupPoint{0}, GroupPoint{1}};
    const auto a = cortez_petite_check(overlap, 1);
    EXPECT_FALSE(a.pass);
    EXPECT_FALSE(a.tiling);
    EXPECT_FALSE(a.witness.empty());

    auto gap = SubstitutionStage::standard(1, 3);
    gap.domains[1] = FiniteSubset{GroupPoint{0}, GroupPoint{1}, GroupPoint{3}};
    const auto b = cortez_petite_check(gap, 2);
    EXPECT_FALSE(b.pass);
    EXPECT_FALSE(b.transversal);
    EXPECT_NE(b.witness.find("coset"), std::string::npos);

    const auto slow = SubstitutionStage::standard(1, 3, std::vector<std::int64_t>{2, 3});
    const auto c = cortez_petite_check(slow, 1);
    EXPECT_TRUE(c.tiling);
    EXPECT_FALSE(c.index_condition);
    EXPECT_FALSE(c.pass);
}

TEST(BlockEntropy, WorkedExamples) {
    const FiniteSubset f = FiniteSubset::cube(1, 0, 9999);
    for (const auto& [k, h] : block_entropy(Configuration::constant(1, 0), f, {1, 2, 4, 8})) EXPECT_EQ(h, 0.0) << k;

    const auto x2 = rf_substitution(SubstitutionStage::standard(1, 2), 2);
    double prev = 2;
    for (const auto& [k, h] : block_entropy(x2, FiniteSubset::cube(1, 0, 2999), {1, 2, 3, 4, 6, 8, 16})) {
        EXPECT_LE(h, std::log2(3.0) / static_cast<double>(k) + 1e-12);
        // Period 3: for k >= 2 the three k-blocks are distinct and equally frequent; for k = 1 the symbol split is 2:1.
        const double exact = k == 1 ? std::log2(3.0) - 2.0 / 3.0 : std::log2(3.0) / static_cast<double>(k);
        EXPECT_NEAR(h, exact, 1e-12);
        if (k > 1) {
            EXPECT_LT(h, prev);
        }
        prev = h;
    }

    const auto random = block_entropy(bernoulli_config(1, 99), f, {1});
    EXPECT_NEAR(random[0].second, 1.0, 0.02);
    EXPECT_THROW((void)block_entropy(x2, f, {0}), Error);
}

TEST(BlockEntropy, PeriodicEntropyDecaysLikeLogPeriod) {
    const auto x = Configuration::periodic_word({0, 1, 1, 0, 1, 0, 0});
    for (const auto& [k, h] : block_entropy(x, FiniteSubset::cube(1, 0, 6999), {4, 8, 16, 32})) {
        // At most 7 distinct blocks, each of frequency a multiple of 1/7.
        EXPECT_LE(h, std::log2(7.0) / static_cast<double>(k) + 1e-12);
    }
}

TEST(Catalog, ResolvesNames) {
    EXPECT_EQ(resolve_example("visible")(GroupPoint{1, 0}), 1);
    EXPECT_EQ(resolve_example("prime-approx:2")(GroupPoint{3, 6}), 0);
    EXPECT_EQ(resolve_example("rf-sub:2")(GroupPoint{2}), 1);
    EXPECT_EQ(resolve_example("constant:1", 2)(GroupPoint{4, 4}), 1);
    EXPECT_EQ(resolve_example("empty", 3)(GroupPoint{1, 2, 3}), 0);
    EXPECT_EQ(resolve_example("periodic:011")(GroupPoint{4}), 1);
    EXPECT_EQ(resolve_example("lattice:3", 2)(GroupPoint{3, -6}), 1);
    EXPECT_EQ(resolve_example("lattice:3", 2)(GroupPoint{3, 1}), 0);
    EXPECT_EQ(resolve_example("random:5", 2)(GroupPoint{7, 7}), bernoulli_config(2, 5)(GroupPoint{7, 7}));
    EXPECT_EQ(resolve_example("oscillating")(GroupPoint{4}), 1);
}

TEST(Catalog, RejectsBadNames) {
    for (const char* bad : {"nope", "prime-approx", "prime-approx:x", "periodic:01a", "lattice:0", "constant:-1",
                            "visible:3"}) {
        EXPECT_THROW((void)resolve_example(bad), Error) << bad;
    }
    try {
        (void)resolve_example("rf-sub:8");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::stage_exhausted);
    }
}
