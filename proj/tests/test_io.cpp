#include "amenlab/catalog.hpp"
#include "amenlab/io.hpp"

#include <gtest/gtest.h>

using namespace amenlab;
using amenlab::io::json;

namespace {

const FiniteSubset kW2 = FiniteSubset::cube(1, 0, 1);

}  // namespace

TEST(Io, IntegersUseStringsBeyondSixtyFourBits) {
    EXPECT_TRUE(io::integer_to_json(Integer(42)).is_number_integer());
    const Integer big = Integer(1) << 100;
    const json j = io::integer_to_json(big);
    ASSERT_TRUE(j.is_string());
    EXPECT_EQ(j.get<std::string>(), "1267650600228229401496703205376");
    EXPECT_EQ(io::integer_from_json(j), big);
    EXPECT_THROW((void)io::integer_from_json(json(1.5)), Error);
}

TEST(Io, DistributionRoundTrip) {
    const auto candidates = all_patterns(2);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        LabRng rng(seed);
        const auto mu = random_distribution(rng, kW2, candidates, static_cast<std::size_t>(rng.between(1, 4)), rng.between(1, 9));
        const json j = io::distribution_to_json(mu);
        EXPECT_EQ(j.at("type"), "pattern-distribution");
        EXPECT_EQ(io::distribution_from_json(json::parse(j.dump())), mu);
    }
}

TEST(Io, DistributionWithHugeDenominators) {
    const Integer big = Integer(1) << 90;
    const PatternDistribution mu(kW2, {{Pattern{{0, 0}}, Rational(Integer(1), big)},
                                       {Pattern{{1, 1}}, Rational(big - 1, big)}});
    const json j = io::distribution_to_json(mu);
    EXPECT_TRUE(j.at("entries")[0][1].is_number_integer());
    EXPECT_TRUE(j.at("entries")[0][2].is_string());
    EXPECT_EQ(io::distribution_from_json(json::parse(j.dump())), mu);
}

TEST(Io, DistributionRejectsMalformedInput) {
    const json base = io::distribution_to_json(PatternDistribution::dirac(kW2, Pattern{{0, 1}}));
    json bad_mass = base;
    bad_mass["entries"][0][1] = 2;
    EXPECT_THROW((void)io::distribution_from_json(bad_mass), Error);
    json zero_den = base;
    zero_den["entries"][0][2] = 0;
    EXPECT_THROW((void)io::distribution_from_json(zero_den), Error);
    json repeated = base;
    repeated["entries"].push_back(repeated["entries"][0]);
    EXPECT_THROW((void)io::distribution_from_json(repeated), Error);
    json dup_window = base;
    dup_window["window"] = json::array({json::array({0}), json::array({0})});
    EXPECT_THROW((void)io::distribution_from_json(dup_window), Error);
    EXPECT_THROW((void)io::distribution_from_json(json::object()), Error);
    json wrong_len = base;
    wrong_len["entries"][0][0] = json::array({0});
    EXPECT_THROW((void)io::distribution_from_json(wrong_len), Error);
}

TEST(Io, CouplingRoundTrip) {
    const auto candidates = all_patterns(2);
    const auto cost = hamming_per_site(2);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        LabRng rng(seed + 77);
        const auto mu = random_distribution(rng, kW2, candidates, static_cast<std::size_t>(rng.between(1, 4)), rng.between(1, 9));
        const auto nu = random_distribution(rng, kW2, candidates, static_cast<std::size_t>(rng.between(1, 4)), rng.between(1, 9));
        const auto sol = min_cost_transport(mu, nu, cost);
        const Coupling back = io::coupling_from_json(json::parse(io::coupling_to_json(sol.coupling).dump()));
        EXPECT_EQ(back, sol.coupling);
        EXPECT_EQ(back.left(), mu);
        EXPECT_EQ(back.right(), nu);
        EXPECT_EQ(back.cost(cost), sol.value);
    }
}

TEST(Io, PeriodicConfigurationRoundTrip) {
    for (const char* name : {"periodic:0110", "lattice:3", "prime-approx:2", "rf-sub:3", "constant:1"}) {
        const int dim = std::string(name).rfind("lattice", 0) == 0 ? 2 : 1;
        const auto x = resolve_example(name, dim);
        const json j = io::configuration_to_json(x);
        EXPECT_EQ(j.at("kind"), "periodic") << name;
        const auto y = io::configuration_from_json(json::parse(j.dump()));
        EXPECT_EQ(y.dim(), x.dim());
        for (const auto& g : FiniteSubset::cube(x.dim(), -13, 13)) EXPECT_EQ(y(g), x(g)) << name << " " << g.str();
    }
}

TEST(Io, NonPeriodicConfigurationsAreDescribedOnly) {
    // The period of prime-approx:6 has 30030^2 cosets, past the table cap.
    EXPECT_FALSE(io::configuration_to_json(prime_approx_config(6)).contains("table"));
    const json j = io::configuration_to_json(visible_points_config());
    EXPECT_EQ(j.at("dim"), 2);
    EXPECT_FALSE(j.contains("table"));
    EXPECT_THROW((void)io::configuration_from_json(j), Error);
    const auto c = io::configuration_from_json(json{{"kind", "constant"}, {"dim", 2}, {"symbol", 1}});
    EXPECT_EQ(c(GroupPoint{5, -5}), 1);
}

TEST(Io, RationalCarriesExactAndDecimalForms) {
    const json j = io::rational_to_json(make_rational(-3, 8));
    EXPECT_EQ(j.at("num"), -3);
    EXPECT_EQ(j.at("den"), 8);
    EXPECT_EQ(j.at("value"), -0.375);
}
