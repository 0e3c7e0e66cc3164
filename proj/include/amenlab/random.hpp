#pragma once

// Seeded randomness with a fully specified output sequence: std::mt19937_64
// (whose output is fixed by the standard) with integer draws by rejection
// sampling instead of the implementation-defined std distributions. Any
// implementation following the same recipe reproduces the same instances.

#include "amenlab/config.hpp"
#include "amenlab/group.hpp"
#include "amenlab/measures.hpp"
#include "amenlab/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace amenlab {

class LabRng {
public:
    explicit LabRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to hash coordinates into pseudo-random symbols.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Fair coin-flip configuration: x(g) = low bit of a SplitMix64 chain over
/// (seed, g_0, ..., g_{d-1}).
inline Configuration bernoulli_config(int dim, std::uint64_t seed) {
    return Configuration(
        dim, Alphabet(2),
        [seed](const GroupPoint& g) {
            std::uint64_t h = splitmix64(seed);
            for (auto c : g.coords()) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
            return static_cast<Symbol>(h & 1u);
        },
        "predicate", "random:" + std::to_string(seed));
}

/// Binary word of uniform length in [1, max_period] with uniform letters.
inline std::vector<Symbol> random_word(LabRng& rng, std::int64_t max_period, int alphabet = 2) {
    const auto len = static_cast<std::size_t>(rng.between(1, max_period));
    std::vector<Symbol> w(len);
    for (auto& s : w) s = static_cast<Symbol>(rng.below(static_cast<std::uint64_t>(alphabet)));
    return w;
}

/// Distribution on `support` distinct patterns drawn from `candidates`, with
/// weights k_i / den for positive integers k_i summing to den.
inline PatternDistribution random_distribution(LabRng& rng, const FiniteSubset& window,
                                               const std::vector<Pattern>& candidates, std::size_t support,
                                               std::int64_t den) {
    support = std::min<std::size_t>({support, candidates.size(), static_cast<std::size_t>(den)});
    std::vector<Pattern> pool = candidates;
    std::vector<Pattern> chosen;
    for (std::size_t i = 0; i < support; ++i) {
        const auto k = static_cast<std::size_t>(rng.below(pool.size()));
        chosen.push_back(pool[k]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
    }
    // Each pattern gets one unit, the rest are spread uniformly.
    std::vector<std::int64_t> units(support, 1);
    for (std::int64_t r = den - static_cast<std::int64_t>(support); r > 0; --r) ++units[rng.below(support)];
    std::map<Pattern, Rational> w;
    for (std::size_t i = 0; i < support; ++i) w[chosen[i]] += make_rational(units[i], den);
    return PatternDistribution(window, std::move(w));
}

/// All |alphabet|^|W| patterns on a window, in lexicographic order.
inline std::vector<Pattern> all_patterns(std::size_t window_size, int alphabet = 2) {
    std::vector<Pattern> out;
    Pattern p;
    p.symbols.assign(window_size, 0);
    for (;;) {
        out.push_back(p);
        std::size_t i = window_size;
        while (i > 0 && p.symbols[i - 1] == alphabet - 1) {
            p.symbols[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
        ++p.symbols[i - 1];
    }
    return out;
}

}  // namespace amenlab
