#pragma once

// Concrete configurations: visible lattice points of Z^2 and their
// prime-lattice periodic approximants, the residually-finite substitution
// sequence built on nested fundamental domains, and block entropy.

#include "amenlab/config.hpp"
#include "amenlab/error.hpp"
#include "amenlab/group.hpp"
#include "amenlab/lattice.hpp"
#include "amenlab/measures.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace amenlab {

inline constexpr std::array<std::int64_t, 25> kPrimes{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                      43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

/// v(m,n) = 1 iff gcd(m,n) = 1. gcd(0,0) = 0, so the origin is not visible.
inline Configuration visible_points_config() {
    return Configuration::predicate(2, "visible", [](const GroupPoint& g) {
        return std::gcd(g[0], g[1]) == 1;
    });
}

/// Indicator of Z^2 minus the union of p_i Z^2 over the first n primes.
/// Carries its period lattice (p_1 ... p_n) Z^2 while that product fits in 64 bits.
inline Configuration prime_approx_config(int n) {
    if (n < 1 || n > static_cast<int>(kPrimes.size())) {
        throw Error(Errc::invalid_input, "prime-approx index must lie in [1,25], got " + std::to_string(n));
    }
    std::optional<Lattice> period;
    std::int64_t prod = 1;
    bool fits = true;
    for (int i = 0; i < n; ++i) {
        if (prod > INT64_MAX / kPrimes[static_cast<std::size_t>(i)]) {
            fits = false;
            break;
        }
        prod *= kPrimes[static_cast<std::size_t>(i)];
    }
    if (fits) period = Lattice::scalar(2, prod);
    return Configuration::predicate(
        2, "prime-approx:" + std::to_string(n),
        [n](const GroupPoint& g) {
            const std::int64_t d = std::gcd(g[0], g[1]);
            if (d == 0) return false;
            for (int i = 0; i < n; ++i) {
                if (d % kPrimes[static_cast<std::size_t>(i)] == 0) return false;
            }
            return true;
        },
        period);
}

/// sum_{i > n} p_i^{-2} over all primes: prime zeta P(2) minus the first n terms.
inline double prime_zeta2_tail(int n) {
    // P(2) = 0.452247420041065498506543364832...
    double tail = 0.45224742004106549850654336483224793417323134323989;
    for (int i = 0; i < n; ++i) {
        const double p = static_cast<double>(kPrimes[static_cast<std::size_t>(i)]);
        tail -= 1.0 / (p * p);
    }
    return tail;
}

/// 1 on [4^k, 2 * 4^k) for k >= 0, else 0: densities along boxes oscillate
/// between about 1/3 and 2/3.
inline Configuration oscillating_config() {
    return Configuration::predicate(1, "oscillating", [](const GroupPoint& g) {
        const std::int64_t v = g[0];
        if (v < 1) return false;
        int bits = 0;
        for (std::int64_t t = v; t > 1; t >>= 1) ++bits;  // floor(log2 v)
        return bits % 2 == 0;
    });
}

namespace detail {

inline std::string format_volume(double v) {
    return std::to_string(static_cast<long long>(v));
}

}  // namespace detail

/// Data of the residually-finite construction on Z^d with H_k = m_k Z^d:
/// nested fundamental domains F_k, the indices r_k = m_{k+1} / m_k, and the
/// tile receiving the complement at each step.
struct SubstitutionStage {
    int dim = 1;
    std::vector<std::int64_t> moduli;            // m_1, ..., m_N
    std::vector<FiniteSubset> domains;           // F_1, ..., F_N
    std::vector<std::size_t> complement_tile;    // per step k = 1..N-1, index into canonical tile order

    [[nodiscard]] std::size_t stages() const noexcept { return domains.size(); }

    /// r_k = [H_k : H_{k+1}]^{1/d}.
    [[nodiscard]] std::int64_t ratio(std::size_t k) const { return moduli.at(k) / moduli.at(k - 1); }

    [[nodiscard]] Lattice lattice(std::size_t k) const { return Lattice::scalar(dim, moduli.at(k - 1)); }

    /// Default instantiation: r_k = 2^k + 1, m_1 = 1, F_k = {0..m_k-1}^d,
    /// complement on the last tile. `stages` counts domains F_1..F_N.
    static SubstitutionStage standard(int dim, std::size_t stages,
                                      std::optional<std::vector<std::int64_t>> ratios = std::nullopt) {
        GroupPoint::check_dim(dim);
        if (stages < 1) throw Error(Errc::invalid_input, "need at least one stage");
        SubstitutionStage s;
        s.dim = dim;
        std::int64_t m = 1;
        for (std::size_t k = 1; k <= stages; ++k) {
            double volume = 1;
            for (int i = 0; i < dim; ++i) volume *= static_cast<double>(m);
            if (volume > 2e7) {
                throw Error(Errc::stage_exhausted, "domain F_" + std::to_string(k) + " would have " +
                                                       detail::format_volume(volume) + " points");
            }
            s.moduli.push_back(m);
            s.domains.push_back(FiniteSubset::cube(dim, 0, m - 1));
            if (k == stages) break;
            const std::int64_t r = ratios ? ratios->at(k - 1) : (std::int64_t{1} << k) + 1;
            std::int64_t tiles = 1;
            for (int i = 0; i < dim; ++i) tiles *= r;
            s.complement_tile.push_back(static_cast<std::size_t>(tiles - 1));
            m *= r;
        }
        return s;
    }
};

namespace detail {

// Translates v in F_{k+1} n H_k, canonical order.
inline std::vector<GroupPoint> tile_translates(const SubstitutionStage& st, std::size_t k) {
    const Lattice hk = st.lattice(k);
    std::vector<GroupPoint> out;
    for (const auto& v : st.domains.at(k)) {
        if (hk.contains(v)) out.push_back(v);
    }
    return out;
}

}  // namespace detail

/// x^{(k)}: x^{(1)} is constant 0; x^{(k+1)} tiles F_{k+1} with translates of
/// F_k, copies x^{(k)} on every tile but the complement tile, puts the
/// bitwise complement there, and extends H_{k+1}-periodically.
inline Configuration rf_substitution(const SubstitutionStage& st, std::size_t k) {
    if (k < 1 || k > st.stages()) {
        throw Error(Errc::stage_exhausted,
                    "stage " + std::to_string(k) + " of " + std::to_string(st.stages()) + " configured");
    }
    const std::string name = "rf-sub:" + std::to_string(k);
    Configuration x = Configuration::periodic(st.lattice(1), std::vector<Symbol>(static_cast<std::size_t>(
                                                                 st.lattice(1).index()), 0),
                                              Alphabet(2), name);
    for (std::size_t j = 1; j < k; ++j) {
        const Lattice next = st.lattice(j + 1);
        const auto tiles = detail::tile_translates(st, j);
        const std::size_t flip = st.complement_tile.at(j - 1);
        if (flip >= tiles.size()) throw Error(Errc::invalid_input, "complement tile index out of range");
        const FiniteSubset dom = next.fundamental_domain();
        std::vector<Symbol> table(dom.size(), 0);
        std::vector<char> filled(dom.size(), 0);
        for (std::size_t t = 0; t < tiles.size(); ++t) {
            for (const auto& f : st.domains.at(j - 1)) {
                const std::size_t idx = dom.index_of(next.reduce(f + tiles[t]));
                const Symbol s = x(f);
                table[idx] = t == flip ? static_cast<Symbol>(1 - s) : s;
                filled[idx] = 1;
            }
        }
        if (std::find(filled.begin(), filled.end(), 0) != filled.end()) {
            throw Error(Errc::invalid_input, "tiles do not cover a fundamental domain at stage " + std::to_string(j + 1));
        }
        x = Configuration::periodic(next, std::move(table), Alphabet(2), name);
    }
    return x;
}

struct TilingReport {
    bool pass = true;
    bool transversal = true;
    bool tiling = true;
    bool index_condition = true;
    std::size_t tiles = 0;
    std::string witness;
};

/// Checks that F_k is a transversal of Z^d / H_k and that F_{k+1} is the
/// disjoint union of F_k + v over v in F_{k+1} n H_k; also [H_k : H_{k+1}] > 2^k.
inline TilingReport cortez_petite_check(const SubstitutionStage& st, std::size_t k) {
    if (k < 1 || k + 1 > st.stages()) {
        throw Error(Errc::stage_exhausted, "tiling check needs stages k and k+1, k = " + std::to_string(k));
    }
    TilingReport rep;
    const Lattice hk = st.lattice(k);
    const FiniteSubset& fk = st.domains.at(k - 1);
    const FiniteSubset& fnext = st.domains.at(k);

    std::set<GroupPoint> cosets;
    for (const auto& f : fk) {
        if (!cosets.insert(hk.reduce(f)).second) {
            rep.transversal = false;
            rep.witness = "F_" + std::to_string(k) + " meets coset " + hk.reduce(f).str() + " twice at " + f.str();
            break;
        }
    }
    if (rep.transversal && static_cast<std::int64_t>(cosets.size()) != hk.index()) {
        rep.transversal = false;
        rep.witness = "F_" + std::to_string(k) + " misses " + std::to_string(hk.index() - static_cast<std::int64_t>(cosets.size())) +
                      " cosets";
    }

    const auto tiles = detail::tile_translates(st, k);
    rep.tiles = tiles.size();
    std::map<GroupPoint, GroupPoint> owner;
    for (const auto& v : tiles) {
        for (const auto& f : fk) {
            const GroupPoint p = f + v;
            auto [it, fresh] = owner.emplace(p, v);
            if (!fresh && rep.tiling) {
                rep.tiling = false;
                if (rep.witness.empty()) {
                    rep.witness = "tiles " + it->second.str() + " and " + v.str() + " overlap at " + p.str();
                }
            }
        }
    }
    if (rep.tiling) {
        for (const auto& p : fnext) {
            if (owner.find(p) == owner.end()) {
                rep.tiling = false;
                if (rep.witness.empty()) rep.witness = "point " + p.str() + " of F_" + std::to_string(k + 1) + " is not covered";
                break;
            }
        }
    }
    if (rep.tiling && owner.size() != fnext.size()) {
        rep.tiling = false;
        if (rep.witness.empty()) rep.witness = "tiles leave F_" + std::to_string(k + 1);
    }

    const Lattice hnext = st.lattice(k + 1);
    const Rational index_ratio(Integer(hnext.index()), Integer(hk.index()));
    rep.index_condition = index_ratio > Rational(Integer(1) << static_cast<unsigned>(k));
    if (!rep.index_condition && rep.witness.empty()) {
        rep.witness = "[H_k : H_{k+1}] = " + to_string(index_ratio) + " is not > 2^" + std::to_string(k);
    }
    rep.pass = rep.transversal && rep.tiling && rep.index_condition;
    return rep;
}

/// Shannon entropy (bits) of the empirical box-pattern distribution over F,
/// divided by the number of sites, for each box side length k.
inline std::vector<std::pair<std::size_t, double>> block_entropy(const Configuration& x, const FiniteSubset& f,
                                                                 const std::vector<std::size_t>& window_sizes) {
    std::vector<std::pair<std::size_t, double>> out;
    for (auto k : window_sizes) {
        if (k < 1) throw Error(Errc::invalid_input, "window sizes must be positive");
        const FiniteSubset w = FiniteSubset::cube(x.dim(), 0, static_cast<std::int64_t>(k) - 1);
        const auto counts = pattern_counts(x, f, w);
        const double total = static_cast<double>(f.size());
        double h = 0.0;
        for (const auto& [p, c] : counts) {
            const double q = static_cast<double>(c) / total;
            h -= q * std::log2(q);
        }
        out.emplace_back(k, h / static_cast<double>(w.size()));
    }
    return out;
}

}  // namespace amenlab
