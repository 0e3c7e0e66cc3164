#pragma once

// JSON forms of windows, patterns, configurations, pattern distributions and
// couplings. Rationals are written as (numerator, denominator) pairs; each
// part is a JSON integer when it fits in 64 bits and a decimal string
// otherwise. Readers accept both.

#include "amenlab/config.hpp"
#include "amenlab/error.hpp"
#include "amenlab/group.hpp"
#include "amenlab/lattice.hpp"
#include "amenlab/measures.hpp"
#include "amenlab/rational.hpp"
#include "amenlab/transport.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace amenlab::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json integer_to_json(const Integer& v) {
    if (auto small = fits_int64(v)) return *small;
    return v.str();
}

inline Integer integer_from_json(const json& j) {
    if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
    if (j.is_string()) return Integer(j.get<std::string>());
    throw Error(Errc::parse_error, "expected an integer or a decimal string");
}

inline json point_to_json(const GroupPoint& g) {
    return json(std::vector<std::int64_t>(g.coords().begin(), g.coords().end()));
}

inline GroupPoint point_from_json(const json& j) {
    if (!j.is_array()) throw Error(Errc::parse_error, "point must be an array of integers");
    const auto v = j.get<std::vector<std::int64_t>>();
    return GroupPoint::from(v);
}

inline json window_to_json(const FiniteSubset& w) {
    json arr = json::array();
    for (const auto& g : w) arr.push_back(point_to_json(g));
    return arr;
}

inline FiniteSubset window_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error(Errc::parse_error, "window must be a non-empty array");
    std::vector<GroupPoint> pts;
    for (const auto& p : j) pts.push_back(point_from_json(p));
    FiniteSubset w(std::move(pts));
    if (w.size() != j.size()) throw Error(Errc::parse_error, "window has duplicate points");
    return w;
}

inline json symbols_to_json(const Pattern& p) {
    json arr = json::array();
    for (auto s : p.symbols) arr.push_back(static_cast<int>(s));
    return arr;
}

inline Pattern symbols_from_json(const json& j) {
    Pattern p;
    for (const auto& s : j) {
        const int v = s.get<int>();
        if (v < 0 || v > 255) throw Error(Errc::parse_error, "symbol out of range");
        p.symbols.push_back(static_cast<Symbol>(v));
    }
    return p;
}

/// {"window": [...], "symbols": [...]} with symbols in canonical window order.
inline json pattern_to_json(const FiniteSubset& window, const Pattern& p) {
    return {{"window", window_to_json(window)}, {"symbols", symbols_to_json(p)}};
}

inline std::pair<FiniteSubset, Pattern> pattern_from_json(const json& j) {
    auto w = window_from_json(j.at("window"));
    auto p = symbols_from_json(j.at("symbols"));
    if (p.size() != w.size()) throw Error(Errc::parse_error, "pattern length does not match window");
    return {std::move(w), std::move(p)};
}

inline json distribution_to_json(const PatternDistribution& mu) {
    json entries = json::array();
    for (const auto& [p, w] : mu.weights()) {
        entries.push_back({symbols_to_json(p), integer_to_json(numerator_of(w)), integer_to_json(denominator_of(w))});
    }
    return {{"schema_version", kSchemaVersion},
            {"type", "pattern-distribution"},
            {"window", window_to_json(mu.window())},
            {"entries", entries}};
}

inline Rational rational_from_json(const json& num, const json& den) {
    const Integer d = integer_from_json(den);
    if (d == 0) throw Error(Errc::parse_error, "zero denominator");
    return Rational(integer_from_json(num), d);
}

inline PatternDistribution distribution_from_json(const json& j) {
    try {
        FiniteSubset w = window_from_json(j.at("window"));
        std::map<Pattern, Rational> weights;
        for (const auto& e : j.at("entries")) {
            if (!e.is_array() || e.size() != 3) throw Error(Errc::parse_error, "entry must be [pattern, num, den]");
            Pattern p = symbols_from_json(e[0]);
            if (weights.count(p)) throw Error(Errc::parse_error, "repeated pattern in distribution");
            weights.emplace(std::move(p), rational_from_json(e[1], e[2]));
        }
        return PatternDistribution(std::move(w), std::move(weights));
    } catch (const json::exception& ex) {
        throw Error(Errc::parse_error, ex.what());
    }
}

inline json coupling_to_json(const Coupling& c) {
    json entries = json::array();
    for (const auto& [pq, w] : c.weights()) {
        entries.push_back({symbols_to_json(pq.first), symbols_to_json(pq.second), integer_to_json(numerator_of(w)),
                           integer_to_json(denominator_of(w))});
    }
    return {{"schema_version", kSchemaVersion},
            {"type", "coupling"},
            {"window", window_to_json(c.left().window())},
            {"entries", entries}};
}

inline Coupling coupling_from_json(const json& j) {
    try {
        FiniteSubset w = window_from_json(j.at("window"));
        std::map<PatternPair, Rational> weights;
        std::map<Pattern, Rational> left, right;
        for (const auto& e : j.at("entries")) {
            if (!e.is_array() || e.size() != 4) {
                throw Error(Errc::parse_error, "entry must be [pattern, pattern, num, den]");
            }
            Pattern p = symbols_from_json(e[0]);
            Pattern q = symbols_from_json(e[1]);
            const Rational r = rational_from_json(e[2], e[3]);
            left[p] += r;
            right[q] += r;
            weights[{std::move(p), std::move(q)}] += r;
        }
        return Coupling(PatternDistribution(w, std::move(left)), PatternDistribution(w, std::move(right)),
                        std::move(weights));
    } catch (const json::exception& ex) {
        throw Error(Errc::parse_error, ex.what());
    }
}

inline json lattice_to_json(const Lattice& l) {
    return json(l.basis());
}

/// Largest fundamental domain written out as a table.
inline constexpr std::int64_t kMaxTableCells = std::int64_t{1} << 22;

/// Configurations with a period lattice of index at most kMaxTableCells
/// serialise completely as a periodic table; other rules are written by kind
/// and name only.
inline json configuration_to_json(const Configuration& x) {
    json j{{"kind", x.kind()}, {"dim", x.dim()}, {"alphabet", x.alphabet().size()}, {"name", x.description()}};
    if (x.period() && x.period()->index() <= kMaxTableCells) {
        const Lattice& l = *x.period();
        json table = json::array();
        for (const auto& g : l.fundamental_domain()) table.push_back(static_cast<int>(x(g)));
        j["kind"] = "periodic";
        j["lattice"] = lattice_to_json(l);
        j["table"] = table;
    }
    return j;
}

inline Configuration configuration_from_json(const json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        const int alphabet = j.value("alphabet", 2);
        if (kind == "constant") {
            return Configuration::constant(j.at("dim").get<int>(), static_cast<Symbol>(j.at("symbol").get<int>()),
                                           Alphabet(alphabet));
        }
        if (kind == "periodic") {
            Lattice l(j.at("lattice").get<std::vector<std::vector<std::int64_t>>>());
            std::vector<Symbol> table;
            for (const auto& s : j.at("table")) table.push_back(static_cast<Symbol>(s.get<int>()));
            return Configuration::periodic(l, std::move(table), Alphabet(alphabet), j.value("name", std::string{}));
        }
        throw Error(Errc::parse_error, "configuration kind '" + kind + "' is not loadable from JSON");
    } catch (const json::exception& ex) {
        throw Error(Errc::parse_error, ex.what());
    }
}

inline json rational_to_json(const Rational& q) {
    return {{"num", integer_to_json(numerator_of(q))}, {"den", integer_to_json(denominator_of(q))},
            {"value", to_double(q)}};
}

}  // namespace amenlab::io
