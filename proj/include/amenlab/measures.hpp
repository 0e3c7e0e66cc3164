#pragma once

// Empirical measures along Folner sets, seen through a fixed finite window W:
// a measure is represented by its distribution on W-patterns (cylinder sets).
// Weak* closeness is measured with the Prokhorov metric on those patterns.

#include "amenlab/config.hpp"
#include "amenlab/error.hpp"
#include "amenlab/group.hpp"
#include "amenlab/maxflow.hpp"
#include "amenlab/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace amenlab {

/// Finitely supported probability distribution on W-patterns. Zero weights
/// are dropped; the weights sum to exactly one.
class PatternDistribution {
public:
    PatternDistribution(FiniteSubset window, std::map<Pattern, Rational> weights)
        : window_(std::move(window)) {
        if (window_.empty()) throw Error(Errc::invalid_input, "pattern distribution needs a window");
        Rational total = 0;
        for (auto& [p, w] : weights) {
            if (p.size() != window_.size()) {
                throw Error(Errc::invalid_input, "pattern length does not match window");
            }
            if (w < 0) throw Error(Errc::invalid_input, "negative pattern weight");
            if (w == 0) continue;
            total += w;
            weights_.emplace(p, std::move(w));
        }
        if (total != 1) {
            throw Error(Errc::invalid_input, "pattern weights sum to " + to_string(total) + ", not 1");
        }
    }

    static PatternDistribution dirac(FiniteSubset window, Pattern p) {
        return PatternDistribution(std::move(window), {{std::move(p), Rational(1)}});
    }

    [[nodiscard]] const FiniteSubset& window() const noexcept { return window_; }
    [[nodiscard]] const std::map<Pattern, Rational>& weights() const noexcept { return weights_; }
    [[nodiscard]] std::size_t support_size() const noexcept { return weights_.size(); }

    [[nodiscard]] Rational weight(const Pattern& p) const {
        auto it = weights_.find(p);
        return it == weights_.end() ? Rational(0) : it->second;
    }

    friend bool operator==(const PatternDistribution& a, const PatternDistribution& b) {
        return a.window_ == b.window_ && a.weights_ == b.weights_;
    }

private:
    FiniteSubset window_;
    std::map<Pattern, Rational> weights_;
};

/// Image of `mu` under restriction of patterns to `sub`, which must be a
/// subset of mu's window.
inline PatternDistribution marginalize(const PatternDistribution& mu, const FiniteSubset& sub) {
    if (!sub.is_subset_of(mu.window()) || sub.empty()) {
        throw Error(Errc::incompatible_windows, "marginalize: sub-window not contained in window");
    }
    std::vector<std::size_t> pos;
    pos.reserve(sub.size());
    for (const auto& g : sub) pos.push_back(mu.window().index_of(g));
    std::map<Pattern, Rational> out;
    for (const auto& [p, w] : mu.weights()) {
        Pattern q;
        q.symbols.reserve(pos.size());
        for (auto i : pos) q.symbols.push_back(p[i]);
        out[q] += w;
    }
    return PatternDistribution(sub, std::move(out));
}

/// Pattern counts of x over F, seen through W: key p counts f with
/// restrict(shift(f, x), W) = p.
inline std::map<Pattern, std::size_t> pattern_counts(const Configuration& x, const FiniteSubset& f,
                                                     const FiniteSubset& window) {
    if (f.empty() || window.empty()) throw Error(Errc::invalid_input, "empirical measure: empty set");
    std::map<Pattern, std::size_t> counts;
    for (const auto& g : f) ++counts[restrict_shifted(x, g, window)];
    return counts;
}

/// (1/|F|) sum_{f in F} delta_{fx}, restricted to W-cylinders; exact.
inline PatternDistribution empirical_measure(const Configuration& x, const FiniteSubset& f,
                                             const FiniteSubset& window) {
    const auto counts = pattern_counts(x, f, window);
    const Integer total(f.size());
    std::map<Pattern, Rational> weights;
    for (const auto& [p, c] : counts) weights.emplace(p, Rational(Integer(c), total));
    return PatternDistribution(window, std::move(weights));
}

/// Distance between two patterns on a common window.
using PatternMetric = std::function<Rational(const Pattern&, const Pattern&)>;

/// sum over mismatched positions w of weight(w - center): the admissible
/// metric truncated to the window, viewed from `center`.
inline PatternMetric truncated_pattern_metric(const AdmissibleMetric& m, const FiniteSubset& window,
                                              const GroupPoint& center) {
    std::vector<Rational> w;
    w.reserve(window.size());
    for (const auto& g : window) w.push_back(m.weight_exact(g - center));
    return [w = std::move(w)](const Pattern& p, const Pattern& q) {
        Rational d = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (p[i] != q[i]) d += w[i];
        }
        return d;
    };
}

inline PatternMetric truncated_pattern_metric(const AdmissibleMetric& m, const FiniteSubset& window) {
    return truncated_pattern_metric(m, window, IntegerLattice::identity(window.dim()));
}

/// Fraction of mismatched positions.
inline PatternMetric hamming_per_site(std::size_t window_size) {
    return [window_size](const Pattern& p, const Pattern& q) {
        std::size_t mis = 0;
        for (std::size_t i = 0; i < window_size; ++i) mis += p[i] != q[i] ? 1u : 0u;
        return Rational(Integer(mis), Integer(window_size));
    };
}

inline Rational total_variation(const PatternDistribution& mu, const PatternDistribution& nu) {
    Rational s = 0;
    for (const auto& [p, w] : mu.weights()) s += abs(w - nu.weight(p));
    for (const auto& [p, w] : nu.weights()) {
        if (mu.weights().find(p) == mu.weights().end()) s += w;
    }
    return s / 2;
}

struct ProkhorovResult {
    /// Smallest feasible probe; the true distance lies in (value - resolution, value].
    double value = 0.0;
    double resolution = 0.0;
};

namespace detail {

inline constexpr std::int64_t kProkhorovSteps = std::int64_t{1} << 20;

// Max flow from `from` to `to` along edges {(a,b) : d(a,b) <= eps}.
inline Rational closeness_flow(const std::vector<std::pair<Pattern, Rational>>& from,
                               const std::vector<std::pair<Pattern, Rational>>& to,
                               const std::vector<std::vector<Rational>>& dist, const Rational& eps,
                               bool transpose) {
    const std::size_t a = from.size(), b = to.size();
    MaxFlow<Rational> flow(a + b + 2);
    const std::size_t source = a + b, sink = a + b + 1;
    for (std::size_t i = 0; i < a; ++i) flow.add_edge(source, i, from[i].second);
    for (std::size_t j = 0; j < b; ++j) flow.add_edge(a + j, sink, to[j].second);
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            const Rational& d = transpose ? dist[j][i] : dist[i][j];
            if (d <= eps) flow.add_edge(i, a + j, from[i].second);
        }
    }
    return flow.run(source, sink);
}

}  // namespace detail

/// Prokhorov distance between pattern distributions on a common window.
///
/// For a probe eps the condition mu(A) <= nu(A^eps) + eps for all A is
/// equivalent (max-flow/min-cut) to the bipartite flow along eps-close pairs
/// reaching 1 - eps; both directions are checked. The smallest feasible eps
/// is found by bisection over the dyadic grid k / 2^20.
inline ProkhorovResult prokhorov_distance(const PatternDistribution& mu, const PatternDistribution& nu,
                                          const PatternMetric& metric) {
    if (!(mu.window() == nu.window())) throw Error(Errc::incompatible_windows, "prokhorov_distance");
    const std::vector<std::pair<Pattern, Rational>> a(mu.weights().begin(), mu.weights().end());
    const std::vector<std::pair<Pattern, Rational>> b(nu.weights().begin(), nu.weights().end());
    std::vector<std::vector<Rational>> dist(a.size(), std::vector<Rational>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) dist[i][j] = metric(a[i].first, b[j].first);
    }
    auto feasible = [&](const Rational& eps) {
        const Rational need = 1 - eps;
        return detail::closeness_flow(a, b, dist, eps, false) >= need &&
               detail::closeness_flow(b, a, dist, eps, true) >= need;
    };
    const double res = 1.0 / static_cast<double>(detail::kProkhorovSteps);
    if (feasible(Rational(0))) return {0.0, res};
    std::int64_t lo = 0, hi = detail::kProkhorovSteps;  // infeasible at lo, feasible at hi
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (feasible(make_rational(mid, detail::kProkhorovSteps))) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {static_cast<double>(hi) / static_cast<double>(detail::kProkhorovSteps), res};
}

/// Finite list of pattern distributions over a common window.
class MeasureSet {
public:
    explicit MeasureSet(std::vector<PatternDistribution> members) : members_(std::move(members)) {
        if (members_.empty()) throw Error(Errc::invalid_input, "MeasureSet must be non-empty");
        for (const auto& m : members_) {
            if (!(m.window() == members_.front().window())) {
                throw Error(Errc::incompatible_windows, "MeasureSet members need a common window");
            }
        }
    }

    [[nodiscard]] const std::vector<PatternDistribution>& members() const noexcept { return members_; }
    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] const FiniteSubset& window() const noexcept { return members_.front().window(); }

private:
    std::vector<PatternDistribution> members_;
};

inline double hausdorff_prokhorov(const MeasureSet& s, const MeasureSet& t, const PatternMetric& metric) {
    if (!(s.window() == t.window())) throw Error(Errc::incompatible_windows, "hausdorff_prokhorov");
    std::vector<std::vector<double>> d(s.size(), std::vector<double>(t.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < t.size(); ++j) {
            d[i][j] = prokhorov_distance(s.members()[i], t.members()[j], metric).value;
        }
    }
    double out = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) out = std::max(out, *std::min_element(d[i].begin(), d[i].end()));
    for (std::size_t j = 0; j < t.size(); ++j) {
        double best = d[0][j];
        for (std::size_t i = 1; i < s.size(); ++i) best = std::min(best, d[i][j]);
        out = std::max(out, best);
    }
    return out;
}

/// Empirical measures at every n, clustered greedily: a measure joins the
/// first representative within merge_tol, otherwise it becomes one.
inline MeasureSet omega_hat_approx(const Configuration& x, const FolnerSequence& seq,
                                   const std::vector<std::size_t>& n_list, const FiniteSubset& window,
                                   double merge_tol, const PatternMetric& metric) {
    if (!(merge_tol > 0)) throw Error(Errc::invalid_input, "merge_tol must be positive");
    if (n_list.empty()) throw Error(Errc::invalid_input, "n_list must be non-empty");
    std::vector<PatternDistribution> reps;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (i > 0 && n_list[i] <= n_list[i - 1]) throw Error(Errc::invalid_input, "n_list must increase");
        PatternDistribution mu = empirical_measure(x, seq.at(n_list[i]), window);
        const bool merged = std::any_of(reps.begin(), reps.end(), [&](const PatternDistribution& r) {
            return prokhorov_distance(r, mu, metric).value <= merge_tol;
        });
        if (!merged) reps.push_back(std::move(mu));
    }
    return MeasureSet(std::move(reps));
}

struct GenericityReport {
    bool pass = false;
    double final_distance = 0.0;
    std::vector<std::pair<std::size_t, double>> distances;
};

/// Passes when the last distance is within tol and the last three distances
/// do not increase by more than tol/2 from one index to the next.
inline GenericityReport genericity_check(const Configuration& x, const FolnerSequence& seq,
                                         const PatternDistribution& target, const std::vector<std::size_t>& n_list,
                                         double tol, const PatternMetric& metric) {
    if (!(tol > 0)) throw Error(Errc::invalid_input, "tol must be positive");
    if (n_list.empty()) throw Error(Errc::invalid_input, "n_list must be non-empty");
    GenericityReport rep;
    for (auto n : n_list) {
        const auto mu = empirical_measure(x, seq.at(n), target.window());
        rep.distances.emplace_back(n, prokhorov_distance(mu, target, metric).value);
    }
    rep.final_distance = rep.distances.back().second;
    rep.pass = rep.final_distance <= tol;
    const std::size_t first = rep.distances.size() >= 3 ? rep.distances.size() - 3 : 0;
    for (std::size_t i = first + 1; i < rep.distances.size(); ++i) {
        if (rep.distances[i].second > rep.distances[i - 1].second + tol / 2) rep.pass = false;
    }
    return rep;
}

}  // namespace amenlab
