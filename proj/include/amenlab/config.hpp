#pragma once

// Configurations x in A^G given by finite rules, the shift action, window
// restriction, and admissible metrics on the shift space.

#include "amenlab/error.hpp"
#include "amenlab/group.hpp"
#include "amenlab/lattice.hpp"
#include "amenlab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace amenlab {

using Symbol = std::uint8_t;

class Alphabet {
public:
    explicit Alphabet(int size = 2) : size_(size) {
        if (size < 2 || size > 256) {
            throw Error(Errc::invalid_input, "alphabet size must lie in [2,256]");
        }
    }
    [[nodiscard]] int size() const noexcept { return size_; }
    [[nodiscard]] bool contains(int s) const noexcept { return s >= 0 && s < size_; }
    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    int size_;
};

/// Symbols on a window, listed in the window's canonical point order.
struct Pattern {
    std::vector<Symbol> symbols;

    [[nodiscard]] std::size_t size() const noexcept { return symbols.size(); }
    Symbol operator[](std::size_t i) const noexcept { return symbols[i]; }

    friend auto operator<=>(const Pattern&, const Pattern&) = default;
    friend bool operator==(const Pattern&, const Pattern&) = default;
};

/// Total, deterministic map G -> alphabet, described by a finite rule.
/// Immutable; copies share the rule.
class Configuration {
public:
    using Rule = std::function<Symbol(const GroupPoint&)>;

    Configuration(int dim, Alphabet alphabet, Rule rule, std::string kind, std::string description,
                  std::optional<Lattice> period = std::nullopt)
        : dim_(GroupPoint::check_dim(dim)),
          alphabet_(alphabet),
          rule_(std::make_shared<const Rule>(std::move(rule))),
          kind_(std::move(kind)),
          description_(std::move(description)),
          period_(std::move(period)) {
        if (period_ && period_->dim() != dim_) {
            throw Error(Errc::invalid_dimension, "period lattice dimension mismatch");
        }
    }

    Symbol operator()(const GroupPoint& g) const { return (*rule_)(g); }
    Symbol at(const GroupPoint& g) const { return (*rule_)(g); }

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] const Alphabet& alphabet() const noexcept { return alphabet_; }
    /// One of constant, periodic, predicate, substitution, finite-modification, shifted.
    [[nodiscard]] const std::string& kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }
    /// A lattice under which the configuration is known to be invariant.
    [[nodiscard]] const std::optional<Lattice>& period() const noexcept { return period_; }

    static Configuration constant(int dim, Symbol s, Alphabet alphabet = Alphabet(2)) {
        if (!alphabet.contains(s)) throw Error(Errc::invalid_input, "symbol outside alphabet");
        return Configuration(dim, alphabet, [s](const GroupPoint&) { return s; }, "constant",
                             "constant:" + std::to_string(s), Lattice::scalar(dim, 1));
    }

    /// `table` lists the symbols on lattice.fundamental_domain() in canonical order.
    static Configuration periodic(const Lattice& lattice, std::vector<Symbol> table,
                                  Alphabet alphabet = Alphabet(2), std::string description = {}) {
        if (table.size() != static_cast<std::size_t>(lattice.index())) {
            throw Error(Errc::invalid_input, "periodic table size must equal the lattice index");
        }
        for (auto s : table) {
            if (!alphabet.contains(s)) throw Error(Errc::invalid_input, "symbol outside alphabet");
        }
        const int dim = lattice.dim();
        std::vector<std::int64_t> ext(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) ext[static_cast<std::size_t>(i)] = lattice.diag(i);
        auto shared = std::make_shared<const std::vector<Symbol>>(std::move(table));
        if (description.empty()) description = "periodic" + lattice.str();
        return Configuration(
            dim, alphabet,
            [lattice, ext, shared](const GroupPoint& g) {
                const GroupPoint r = lattice.reduce(g);
                std::size_t off = 0;
                for (std::size_t i = 0; i < ext.size(); ++i) {
                    off = off * static_cast<std::size_t>(ext[i]) +
                          static_cast<std::size_t>(r[static_cast<int>(i)]);
                }
                return (*shared)[off];
            },
            "periodic", std::move(description), lattice);
    }

    /// Z-configuration repeating `word` with period word.size(); x(i) = word[i mod p].
    static Configuration periodic_word(const std::vector<Symbol>& word, Alphabet alphabet = Alphabet(2)) {
        if (word.empty()) throw Error(Errc::invalid_input, "periodic word must be non-empty");
        std::string desc = "periodic:";
        for (auto s : word) desc += std::to_string(s);
        return periodic(Lattice::scalar(1, static_cast<std::int64_t>(word.size())), word, alphabet,
                        std::move(desc));
    }

    /// Periodic configuration sampled from `rule` on the fundamental domain of `lattice`.
    static Configuration periodic_from(const Lattice& lattice, const Rule& rule,
                                       Alphabet alphabet = Alphabet(2), std::string description = {}) {
        std::vector<Symbol> table;
        const FiniteSubset dom = lattice.fundamental_domain();
        table.reserve(dom.size());
        for (const auto& g : dom) table.push_back(rule(g));
        return periodic(lattice, std::move(table), alphabet, std::move(description));
    }

    /// Binary configuration: 1 where `member` holds.
    static Configuration predicate(int dim, std::string name, std::function<bool(const GroupPoint&)> member,
                                   std::optional<Lattice> period = std::nullopt) {
        return Configuration(
            dim, Alphabet(2), [member = std::move(member)](const GroupPoint& g) -> Symbol { return member(g) ? 1 : 0; },
            "predicate", std::move(name), std::move(period));
    }

    static Configuration finite_modification(const Configuration& base, std::map<GroupPoint, Symbol> patch) {
        for (const auto& [g, s] : patch) {
            if (g.dim() != base.dim()) throw Error(Errc::invalid_dimension, "patch point dimension");
            if (!base.alphabet().contains(s)) throw Error(Errc::invalid_input, "symbol outside alphabet");
        }
        std::string desc = base.description() + "+patch{";
        bool first = true;
        for (const auto& [g, s] : patch) {
            desc += (first ? "" : ";") + g.str() + "->" + std::to_string(s);
            first = false;
        }
        desc += "}";
        auto shared = std::make_shared<const std::map<GroupPoint, Symbol>>(std::move(patch));
        return Configuration(
            base.dim(), base.alphabet(),
            [base, shared](const GroupPoint& g) {
                auto it = shared->find(g);
                return it != shared->end() ? it->second : base(g);
            },
            "finite-modification", std::move(desc));
    }

private:
    int dim_;
    Alphabet alphabet_;
    std::shared_ptr<const Rule> rule_;
    std::string kind_;
    std::string description_;
    std::optional<Lattice> period_;
};

/// (g.x)(h) = x(h g); on Z^d this is translation by g.
inline Configuration shift(const GroupPoint& g, const Configuration& x) {
    if (g.dim() != x.dim()) throw Error(Errc::invalid_dimension, "shift: dimension mismatch");
    return Configuration(
        x.dim(), x.alphabet(), [g, x](const GroupPoint& h) { return x(IntegerLattice::compose(h, g)); },
        "shifted", "shift" + g.str() + "(" + x.description() + ")", x.period());
}

inline Pattern restrict(const Configuration& x, const FiniteSubset& window) {
    if (window.empty()) throw Error(Errc::invalid_input, "restrict: empty window");
    Pattern p;
    p.symbols.reserve(window.size());
    for (const auto& w : window) p.symbols.push_back(x(w));
    return p;
}

/// restrict(shift(f, x), W) without materialising the shifted configuration.
inline Pattern restrict_shifted(const Configuration& x, const GroupPoint& f, const FiniteSubset& window) {
    Pattern p;
    p.symbols.reserve(window.size());
    for (const auto& w : window) p.symbols.push_back(x(IntegerLattice::compose(w, f)));
    return p;
}

/// Summable positive weights on G defining d(x,z) = sum_g w(g) [x(g) != z(g)].
class AdmissibleMetric {
public:
    using ExactWeight = std::function<Rational(const GroupPoint&)>;
    using TailBound = std::function<double(std::int64_t)>;

    AdmissibleMetric(int dim, ExactWeight weight, TailBound tail, std::string name)
        : dim_(dim), weight_(std::move(weight)), tail_(std::move(tail)), name_(std::move(name)) {}

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] Rational weight_exact(const GroupPoint& g) const { return weight_(g); }
    [[nodiscard]] double weight(const GroupPoint& g) const { return to_double(weight_(g)); }
    /// Upper bound on the total weight outside the sup-norm ball of radius R.
    [[nodiscard]] double tail_bound(std::int64_t radius) const { return tail_(radius); }

    /// Points of the closed sup-norm ball of radius R with their weights,
    /// ordered by shell and then canonically.
    [[nodiscard]] std::vector<std::pair<GroupPoint, double>> ball(std::int64_t radius) const {
        std::vector<std::pair<GroupPoint, double>> out;
        const FiniteSubset b = FiniteSubset::cube(dim_, -radius, radius);
        out.reserve(b.size());
        for (const auto& g : b) out.emplace_back(g, weight(g));
        std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& c) {
            return a.first.norm_inf() < c.first.norm_inf();
        });
        return out;
    }

private:
    int dim_;
    ExactWeight weight_;
    TailBound tail_;
    std::string name_;
};

/// Number of points of Z^d with sup-norm exactly r.
inline Integer shell_size(int dim, std::int64_t r) {
    if (r == 0) return 1;
    Integer outer = 1, inner = 1;
    for (int i = 0; i < dim; ++i) {
        outer *= (2 * r + 1);
        inner *= (2 * r - 1);
    }
    return outer - inner;
}

/// Shell r = ||g||_inf carries total weight 2^{-r}/2, spread evenly over its points.
inline AdmissibleMetric default_metric(int dim) {
    GroupPoint::check_dim(dim);
    return AdmissibleMetric(
        dim,
        [dim](const GroupPoint& g) {
            const std::int64_t r = g.norm_inf();
            Integer den = Integer(1) << static_cast<unsigned>(r + 1);
            den *= shell_size(dim, r);
            return Rational(Integer(1), den);
        },
        [](std::int64_t radius) { return std::ldexp(1.0, static_cast<int>(-radius)); },
        "default:d=" + std::to_string(dim));
}

namespace detail {

// Neumaier compensated summation; the result does not depend on the
// grouping of the callers' partial sums beyond rounding of the final value.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace detail

struct DistanceInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Truncated evaluation of d(x,z) over the ball of radius R. The true value
/// lies in [lo, hi]; hi is clipped at the diameter 1.
inline DistanceInterval config_distance(const Configuration& x, const Configuration& z,
                                        const AdmissibleMetric& m, std::int64_t radius) {
    if (radius < 0) throw Error(Errc::invalid_input, "config_distance: R must be >= 0");
    detail::CompensatedSum sum;
    for (const auto& [g, w] : m.ball(radius)) {
        if (x(g) != z(g)) sum.add(w);
    }
    const double lo = sum.value();
    return {lo, std::min(1.0, lo + m.tail_bound(radius))};
}

}  // namespace amenlab
