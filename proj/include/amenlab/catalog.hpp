#pragma once

// Named example configurations, as addressed from the command line:
//
//   visible            visible points of Z^2
//   prime-approx:N     prime-lattice approximant x^(N) over Z^2, 1 <= N <= 25
//   rf-sub:K           residually-finite substitution stage x^(K)
//   constant:S         constant symbol S
//   periodic:WORD      Z-configuration repeating the digit string WORD
//   lattice:Q          indicator of Q Z^d
//   random:SEED        hashed fair coin flips
//   oscillating        1 on [4^k, 2*4^k), a non-generic Z-configuration
//   empty              alias of constant:0
//
// Names with a fixed dimension (visible, prime-approx, periodic, oscillating)
// ignore the requested dimension.

#include "amenlab/config.hpp"
#include "amenlab/constructions.hpp"
#include "amenlab/error.hpp"
#include "amenlab/lattice.hpp"
#include "amenlab/random.hpp"

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace amenlab {

namespace detail {

inline std::int64_t parse_int(std::string_view s, std::string_view what) {
    std::int64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) {
        throw Error(Errc::parse_error, std::string(what) + ": '" + std::string(s) + "' is not an integer");
    }
    return v;
}

}  // namespace detail

/// Maximum stage count used for rf-sub names; the table of x^(K) has
/// prod_{k<K} (2^k + 1)^d entries.
inline constexpr std::size_t kMaxSubstitutionStages = 7;

inline Configuration resolve_example(const std::string& name, int dim = 1) {
    const auto colon = name.find(':');
    const std::string head = name.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string{} : name.substr(colon + 1);
    auto need_arg = [&] {
        if (arg.empty()) throw Error(Errc::parse_error, "example '" + head + "' needs an argument");
    };
    if (head == "visible" && arg.empty()) return visible_points_config();
    if (head == "oscillating" && arg.empty()) return oscillating_config();
    if (head == "empty" && arg.empty()) return Configuration::constant(dim, 0);
    if (head == "prime-approx") {
        need_arg();
        return prime_approx_config(static_cast<int>(detail::parse_int(arg, "prime-approx")));
    }
    if (head == "rf-sub") {
        need_arg();
        const auto k = detail::parse_int(arg, "rf-sub");
        if (k < 1 || static_cast<std::size_t>(k) > kMaxSubstitutionStages) {
            throw Error(Errc::stage_exhausted, "rf-sub stage must lie in [1," + std::to_string(kMaxSubstitutionStages) + "]");
        }
        return rf_substitution(SubstitutionStage::standard(dim, static_cast<std::size_t>(k)), static_cast<std::size_t>(k));
    }
    if (head == "constant") {
        need_arg();
        const auto s = detail::parse_int(arg, "constant");
        if (s < 0 || s > 255) throw Error(Errc::parse_error, "constant symbol out of range");
        return Configuration::constant(dim, static_cast<Symbol>(s), Alphabet(std::max<int>(2, static_cast<int>(s) + 1)));
    }
    if (head == "periodic") {
        need_arg();
        std::vector<Symbol> word;
        int top = 1;
        for (char c : arg) {
            if (c < '0' || c > '9') throw Error(Errc::parse_error, "periodic word must be decimal digits");
            word.push_back(static_cast<Symbol>(c - '0'));
            top = std::max(top, c - '0');
        }
        return Configuration::periodic_word(word, Alphabet(top + 1));
    }
    if (head == "lattice") {
        need_arg();
        const auto q = detail::parse_int(arg, "lattice");
        if (q < 1) throw Error(Errc::parse_error, "lattice modulus must be positive");
        const Lattice l = Lattice::scalar(dim, q);
        return Configuration::periodic_from(
            l, [l](const GroupPoint& g) -> Symbol { return l.contains(g) ? 1 : 0; }, Alphabet(2), name);
    }
    if (head == "random") {
        need_arg();
        return bernoulli_config(dim, static_cast<std::uint64_t>(detail::parse_int(arg, "random")));
    }
    throw Error(Errc::parse_error, "unknown example name '" + name + "'");
}

}  // namespace amenlab
