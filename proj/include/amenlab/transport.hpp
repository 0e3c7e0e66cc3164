#pragma once

// Couplings of pattern distributions and exact optimal transport between
// them, plus the finite-window machinery around the joining metric rho-bar:
// gluing through a shared marginal, pair empirical joinings, lower-bound
// chains from nested windows, and an exact oracle for periodic orbit
// measures.

#include "amenlab/config.hpp"
#include "amenlab/error.hpp"
#include "amenlab/group.hpp"
#include "amenlab/lattice.hpp"
#include "amenlab/measures.hpp"
#include "amenlab/metrics.hpp"
#include "amenlab/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace amenlab {

using PatternPair = std::pair<Pattern, Pattern>;

/// Joint distribution of pattern pairs with exactly prescribed marginals.
class Coupling {
public:
    Coupling(PatternDistribution left, PatternDistribution right, std::map<PatternPair, Rational> weights)
        : left_(std::move(left)), right_(std::move(right)) {
        std::map<Pattern, Rational> rows, cols;
        for (auto& [pq, w] : weights) {
            if (w < 0) throw Error(Errc::invalid_input, "negative coupling weight");
            if (w == 0) continue;
            rows[pq.first] += w;
            cols[pq.second] += w;
            weights_.emplace(pq, std::move(w));
        }
        if (rows != left_.weights() || cols != right_.weights()) {
            throw Error(Errc::invalid_input, "coupling marginals do not match");
        }
    }

    /// The identity coupling of mu with itself.
    static Coupling diagonal(const PatternDistribution& mu) {
        std::map<PatternPair, Rational> w;
        for (const auto& [p, q] : mu.weights()) w.emplace(PatternPair{p, p}, q);
        return Coupling(mu, mu, std::move(w));
    }

    [[nodiscard]] const PatternDistribution& left() const noexcept { return left_; }
    [[nodiscard]] const PatternDistribution& right() const noexcept { return right_; }
    [[nodiscard]] const std::map<PatternPair, Rational>& weights() const noexcept { return weights_; }

    [[nodiscard]] Rational weight(const Pattern& p, const Pattern& q) const {
        auto it = weights_.find({p, q});
        return it == weights_.end() ? Rational(0) : it->second;
    }

    [[nodiscard]] Rational cost(const PatternMetric& c) const {
        Rational s = 0;
        for (const auto& [pq, w] : weights_) s += w * c(pq.first, pq.second);
        return s;
    }

    friend bool operator==(const Coupling& a, const Coupling& b) {
        return a.left_ == b.left_ && a.right_ == b.right_ && a.weights_ == b.weights_;
    }

private:
    PatternDistribution left_;
    PatternDistribution right_;
    std::map<PatternPair, Rational> weights_;
};

struct TransportSolution {
    Coupling coupling;
    Rational value;
    /// Dual potentials, indexed like the supports of left and right in map order.
    std::vector<Rational> row_potential;
    std::vector<Rational> col_potential;
    std::size_t pivots = 0;
};

namespace detail {

// Transportation simplex over exact rationals. Northwest-corner start,
// Bland's rule for entering and leaving cells (no cycling under degeneracy).
class TransportSimplex {
public:
    TransportSimplex(std::vector<Rational> supply, std::vector<Rational> demand,
                     std::vector<std::vector<Rational>> cost)
        : m_(supply.size()),
          n_(demand.size()),
          supply_(std::move(supply)),
          demand_(std::move(demand)),
          cost_(std::move(cost)),
          flow_(m_, std::vector<Rational>(n_)),
          basic_(m_, std::vector<char>(n_, 0)) {}

    std::size_t solve() {
        northwest_corner();
        std::size_t pivots = 0;
        for (;;) {
            compute_potentials();
            auto enter = entering_cell();
            if (!enter) return pivots;
            pivot(*enter);
            if (++pivots > 1'000'000) throw Error(Errc::invalid_input, "transport simplex did not terminate");
        }
    }

    [[nodiscard]] const std::vector<std::vector<Rational>>& flow() const noexcept { return flow_; }
    [[nodiscard]] const std::vector<Rational>& u() const noexcept { return u_; }
    [[nodiscard]] const std::vector<Rational>& v() const noexcept { return v_; }

private:
    using Cell = std::pair<std::size_t, std::size_t>;

    void northwest_corner() {
        std::vector<Rational> ra = supply_, rb = demand_;
        std::size_t i = 0, j = 0;
        for (;;) {
            basic_[i][j] = 1;
            const Rational q = std::min(ra[i], rb[j]);
            flow_[i][j] = q;
            ra[i] -= q;
            rb[j] -= q;
            if (i == m_ - 1 && j == n_ - 1) break;
            if ((ra[i] == 0 && i < m_ - 1) || j == n_ - 1) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    // Tree nodes: rows 0..m-1, columns m..m+n-1; basic cells are the edges.
    std::vector<std::vector<std::size_t>> tree_adjacency() const {
        std::vector<std::vector<std::size_t>> adj(m_ + n_);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (basic_[i][j]) {
                    adj[i].push_back(m_ + j);
                    adj[m_ + j].push_back(i);
                }
            }
        }
        return adj;
    }

    void compute_potentials() {
        u_.assign(m_, Rational(0));
        v_.assign(n_, Rational(0));
        const auto adj = tree_adjacency();
        std::vector<char> seen(m_ + n_, 0);
        std::queue<std::size_t> q;
        q.push(0);
        seen[0] = 1;
        while (!q.empty()) {
            const std::size_t a = q.front();
            q.pop();
            for (std::size_t b : adj[a]) {
                if (seen[b]) continue;
                seen[b] = 1;
                if (a < m_) {
                    v_[b - m_] = cost_[a][b - m_] - u_[a];
                } else {
                    u_[b] = cost_[b][a - m_] - v_[a - m_];
                }
                q.push(b);
            }
        }
    }

    std::optional<Cell> entering_cell() const {
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (!basic_[i][j] && cost_[i][j] - u_[i] - v_[j] < 0) return Cell{i, j};
            }
        }
        return std::nullopt;
    }

    // Tree path from row i to column j as a list of cells.
    std::vector<Cell> tree_path(std::size_t i, std::size_t j) const {
        const auto adj = tree_adjacency();
        const std::size_t none = m_ + n_;
        std::vector<std::size_t> parent(m_ + n_, none);
        std::queue<std::size_t> q;
        q.push(i);
        parent[i] = i;
        while (!q.empty()) {
            const std::size_t a = q.front();
            q.pop();
            for (std::size_t b : adj[a]) {
                if (parent[b] == none) {
                    parent[b] = a;
                    q.push(b);
                }
            }
        }
        std::vector<Cell> path;
        for (std::size_t node = m_ + j; node != i; node = parent[node]) {
            const std::size_t p = parent[node];
            path.push_back(node < m_ ? Cell{node, p - m_} : Cell{p, node - m_});
        }
        std::reverse(path.begin(), path.end());
        return path;
    }

    void pivot(const Cell& enter) {
        const auto path = tree_path(enter.first, enter.second);
        // Cells at even positions of the path lose theta, odd positions gain it.
        std::optional<Rational> theta;
        std::optional<Cell> leave;
        for (std::size_t k = 0; k < path.size(); k += 2) {
            const auto& c = path[k];
            const Rational& f = flow_[c.first][c.second];
            if (!theta || f < *theta || (f == *theta && c < *leave)) {
                theta = f;
                leave = c;
            }
        }
        for (std::size_t k = 0; k < path.size(); ++k) {
            auto& f = flow_[path[k].first][path[k].second];
            if (k % 2 == 0) {
                f -= *theta;
            } else {
                f += *theta;
            }
        }
        flow_[enter.first][enter.second] = *theta;
        basic_[enter.first][enter.second] = 1;
        basic_[leave->first][leave->second] = 0;
    }

    std::size_t m_, n_;
    std::vector<Rational> supply_, demand_;
    std::vector<std::vector<Rational>> cost_;
    std::vector<std::vector<Rational>> flow_;
    std::vector<std::vector<char>> basic_;
    std::vector<Rational> u_, v_;
};

}  // namespace detail

/// Exact optimal coupling of mu and nu for the given cost, with dual
/// potentials certifying optimality.
inline TransportSolution min_cost_transport(const PatternDistribution& mu, const PatternDistribution& nu,
                                            const PatternMetric& cost) {
    if (!(mu.window() == nu.window())) throw Error(Errc::incompatible_windows, "min_cost_transport");
    const std::vector<std::pair<Pattern, Rational>> a(mu.weights().begin(), mu.weights().end());
    const std::vector<std::pair<Pattern, Rational>> b(nu.weights().begin(), nu.weights().end());
    std::vector<Rational> supply, demand;
    for (const auto& e : a) supply.push_back(e.second);
    for (const auto& e : b) demand.push_back(e.second);
    std::vector<std::vector<Rational>> c(a.size(), std::vector<Rational>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            c[i][j] = cost(a[i].first, b[j].first);
            if (c[i][j] < 0) throw Error(Errc::invalid_input, "transport costs must be nonnegative");
        }
    }
    detail::TransportSimplex simplex(std::move(supply), std::move(demand), c);
    const std::size_t pivots = simplex.solve();
    std::map<PatternPair, Rational> w;
    Rational value = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Rational& f = simplex.flow()[i][j];
            if (f != 0) {
                w.emplace(PatternPair{a[i].first, b[j].first}, f);
                value += f * c[i][j];
            }
        }
    }
    return {Coupling(mu, nu, std::move(w)), value, simplex.u(), simplex.v(), pivots};
}

/// Complementary slackness check: u_i + v_j <= c_ij everywhere, with
/// equality on the support of the coupling, and primal value = dual value.
inline bool certify_optimal(const TransportSolution& sol, const PatternMetric& cost) {
    const auto& mu = sol.coupling.left().weights();
    const auto& nu = sol.coupling.right().weights();
    if (sol.row_potential.size() != mu.size() || sol.col_potential.size() != nu.size()) return false;
    Rational dual = 0;
    std::size_t i = 0;
    for (const auto& [p, wp] : mu) {
        dual += wp * sol.row_potential[i];
        std::size_t j = 0;
        for (const auto& [q, wq] : nu) {
            const Rational reduced = cost(p, q) - sol.row_potential[i] - sol.col_potential[j];
            if (reduced < 0) return false;
            if (sol.coupling.weight(p, q) > 0 && reduced != 0) return false;
            ++j;
        }
        ++i;
    }
    std::size_t j = 0;
    for (const auto& [q, wq] : nu) dual += wq * sol.col_potential[j++];
    return dual == sol.value && sol.coupling.cost(cost) == sol.value;
}

/// Relatively independent composition through the shared middle marginal:
/// pi13(a,c) = sum_b pi12(a,b) pi23(b,c) / eta(b).
inline Coupling glue_couplings(const Coupling& pi12, const Coupling& pi23) {
    if (!(pi12.right() == pi23.left())) throw Error(Errc::incompatible_middle, "glue_couplings");
    const auto& eta = pi12.right();
    std::map<Pattern, std::vector<std::pair<Pattern, Rational>>> by_middle;
    for (const auto& [bc, w] : pi23.weights()) by_middle[bc.first].emplace_back(bc.second, w);
    std::map<PatternPair, Rational> out;
    for (const auto& [ab, w] : pi12.weights()) {
        const Rational mass = eta.weight(ab.second);
        // Coupling invariant: positive pi12 mass implies eta(b) > 0.
        if (mass == 0) throw Error(Errc::incompatible_middle, "middle marginal vanishes on coupling support");
        for (const auto& [c, w2] : by_middle[ab.second]) out[{ab.first, c}] += w * w2 / mass;
    }
    return Coupling(pi12.left(), pi23.right(), std::move(out));
}

/// m((x,z), F): joint pattern frequencies of x and z over F, seen through W.
inline Coupling pair_empirical_joining(const Configuration& x, const Configuration& z, const FiniteSubset& f,
                                       const FiniteSubset& window) {
    if (f.empty() || window.empty()) throw Error(Errc::invalid_input, "pair_empirical_joining: empty set");
    std::map<PatternPair, std::size_t> counts;
    for (const auto& g : f) ++counts[{restrict_shifted(x, g, window), restrict_shifted(z, g, window)}];
    const Integer total(f.size());
    std::map<Pattern, Rational> left, right;
    std::map<PatternPair, Rational> w;
    for (const auto& [pq, c] : counts) {
        const Rational q(Integer(c), total);
        left[pq.first] += q;
        right[pq.second] += q;
        w.emplace(pq, q);
    }
    return Coupling(PatternDistribution(window, std::move(left)), PatternDistribution(window, std::move(right)),
                    std::move(w));
}

/// Uniform measure on the translates of a configuration periodic under `lattice`.
class PeriodicOrbitMeasure {
public:
    PeriodicOrbitMeasure(Configuration config, Lattice lattice)
        : config_(std::move(config)), lattice_(std::move(lattice)) {
        if (!config_.period()) throw Error(Errc::not_periodic, "configuration carries no period lattice");
        if (lattice_.dim() != config_.dim()) throw Error(Errc::invalid_dimension, "PeriodicOrbitMeasure");
        // x is invariant under its declared period, so one window of side
        // exponent() covers every coset needed for the generator test.
        const std::int64_t m = std::lcm(config_.period()->exponent(), lattice_.exponent());
        const FiniteSubset box = FiniteSubset::cube(config_.dim(), 0, m - 1);
        for (int j = 0; j < lattice_.dim(); ++j) {
            const GroupPoint b = lattice_.generator(j);
            for (const auto& g : box) {
                if (config_(g + b) != config_(g)) {
                    throw Error(Errc::not_periodic, "configuration not invariant under " + b.str());
                }
            }
        }
    }

    explicit PeriodicOrbitMeasure(const Configuration& config)
        : PeriodicOrbitMeasure(config, config.period() ? *config.period()
                                                       : throw Error(Errc::not_periodic, "no period lattice")) {}

    [[nodiscard]] const Configuration& config() const noexcept { return config_; }
    [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }

    /// Exact W-marginal of the orbit measure.
    [[nodiscard]] PatternDistribution marginal(const FiniteSubset& window) const {
        return empirical_measure(config_, lattice_.fundamental_domain(), window);
    }

private:
    Configuration config_;
    Lattice lattice_;
};

struct PeriodicRhoResult {
    Rational value;
    GroupPoint best_shift;
};

/// Exact rho-bar for the per-site Hamming cost between two periodic orbit
/// measures: the minimum over relative shifts s of the mismatch frequency of
/// (x, shift(s, z)) over a common period.
inline PeriodicRhoResult periodic_rho_oracle(const PeriodicOrbitMeasure& a, const PeriodicOrbitMeasure& b) {
    if (a.config().dim() != b.config().dim()) throw Error(Errc::invalid_dimension, "periodic_rho_oracle");
    const int dim = a.config().dim();
    const std::int64_t m = std::lcm(a.lattice().exponent(), b.lattice().exponent());
    const FiniteSubset box = FiniteSubset::cube(dim, 0, m - 1);
    std::vector<Symbol> xs, zs;
    xs.reserve(box.size());
    zs.reserve(box.size());
    for (const auto& g : box) {
        xs.push_back(a.config()(g));
        zs.push_back(b.config()(g));
    }
    auto box_offset = [&](const GroupPoint& p) {
        std::size_t off = 0;
        for (int i = 0; i < dim; ++i) {
            off = off * static_cast<std::size_t>(m) + static_cast<std::size_t>(detail::floor_mod(p[i], m));
        }
        return off;
    };
    std::optional<std::size_t> best;
    GroupPoint best_shift(dim);
    for (const auto& s : b.lattice().fundamental_domain()) {
        std::size_t mis = 0;
        for (std::size_t k = 0; k < box.size(); ++k) {
            mis += xs[k] != zs[box_offset(box[k] + s)] ? 1u : 0u;
            if (best && mis >= *best) break;
        }
        if (!best || mis < *best) {
            best = mis;
            best_shift = s;
        }
    }
    return {Rational(Integer(*best), Integer(box.size())), best_shift};
}

enum class CostKind { hamming_per_site, admissible };

constexpr std::string_view to_string(CostKind k) noexcept {
    return k == CostKind::hamming_per_site ? "hamming-per-site" : "admissible";
}

/// Coordinate-wise midpoint (rounded down) of the window's bounding box.
inline GroupPoint window_center(const FiniteSubset& w) {
    auto [lo, hi] = w.bounds();
    GroupPoint c(lo.dim());
    for (int i = 0; i < lo.dim(); ++i) c[i] = detail::floor_div(lo[i] + hi[i], 2);
    return c;
}

struct RhoChain {
    /// min-cost value on each window.
    std::vector<Rational> raw;
    /// Running maximum of `raw`: nondecreasing, each entry a lower bound.
    std::vector<Rational> chain;
};

/// Lower bounds for rho-bar from nested window marginals. Each value is the
/// optimal transport cost between the W_k marginals; every invariant joining
/// projects to a feasible coupling there, so each value bounds the joining
/// infimum from below.
inline RhoChain rho_bar_lower(const std::vector<PatternDistribution>& mu_family,
                              const std::vector<PatternDistribution>& nu_family, CostKind kind,
                              const std::optional<AdmissibleMetric>& metric = std::nullopt) {
    if (mu_family.empty() || mu_family.size() != nu_family.size()) {
        throw Error(Errc::invalid_family, "families must be non-empty and of equal length");
    }
    for (const auto* fam : {&mu_family, &nu_family}) {
        for (std::size_t k = 0; k + 1 < fam->size(); ++k) {
            const auto& small = (*fam)[k];
            const auto& big = (*fam)[k + 1];
            if (!small.window().is_subset_of(big.window()) || !(marginalize(big, small.window()) == small)) {
                throw Error(Errc::invalid_family, "window " + std::to_string(k + 1) + " is not a marginal of the next");
            }
        }
    }
    if (kind == CostKind::admissible && !metric) throw Error(Errc::invalid_input, "admissible cost needs a metric");
    RhoChain out;
    for (std::size_t k = 0; k < mu_family.size(); ++k) {
        const auto& w = mu_family[k].window();
        if (!(w == nu_family[k].window())) throw Error(Errc::invalid_family, "mu and nu windows differ");
        const PatternMetric cost = kind == CostKind::hamming_per_site
                                       ? hamming_per_site(w.size())
                                       : truncated_pattern_metric(*metric, w, window_center(w));
        out.raw.push_back(min_cost_transport(mu_family[k], nu_family[k], cost).value);
        out.chain.push_back(k == 0 ? out.raw.back() : std::max(out.chain.back(), out.raw.back()));
    }
    return out;
}

/// Box windows {0..k-1}^d for k = 1..k_max and the corresponding marginals.
inline std::vector<PatternDistribution> box_marginals(const PeriodicOrbitMeasure& mu, std::size_t k_max) {
    std::vector<PatternDistribution> out;
    for (std::size_t k = 1; k <= k_max; ++k) {
        out.push_back(mu.marginal(FiniteSubset::cube(mu.config().dim(), 0, static_cast<std::int64_t>(k) - 1)));
    }
    return out;
}

struct DbRhoReport {
    Rational dbar;
    Rational oracle;
    GroupPoint best_shift;
    std::vector<Rational> chain_raw;
    double tol = 0.0;
    bool estimate_ok = false;
    bool chain_ok = false;
    [[nodiscard]] bool pass() const noexcept { return estimate_ok && chain_ok; }
};

/// Finite-n check of D_B(x,z) >= rho-bar(mu,nu) for periodic x, z, in the
/// per-site Hamming setting where D_B reduces to the mismatch density.
inline DbRhoReport check_db_ge_rho(const PeriodicOrbitMeasure& x, const PeriodicOrbitMeasure& z,
                                   const FolnerSequence& seq, std::size_t n, std::size_t k_max, double tol) {
    DbRhoReport rep;
    rep.tol = tol;
    rep.dbar = dbar_estimate(x.config(), z.config(), seq, n);
    const auto oracle = periodic_rho_oracle(x, z);
    rep.oracle = oracle.value;
    rep.best_shift = oracle.best_shift;
    if (k_max > 0) {
        rep.chain_raw =
            rho_bar_lower(box_marginals(x, k_max), box_marginals(z, k_max), CostKind::hamming_per_site).raw;
    }
    rep.estimate_ok = to_double(rep.dbar) >= to_double(rep.oracle) - tol;
    rep.chain_ok = std::all_of(rep.chain_raw.begin(), rep.chain_raw.end(),
                               [&](const Rational& v) { return v <= rep.oracle; });
    return rep;
}

struct TriangleReport {
    Rational mu_nu;
    Rational mu_eta;
    Rational eta_nu;
    Rational glued_cost;
    bool inequality = false;
    bool witness = false;
    [[nodiscard]] bool pass() const noexcept { return inequality && witness; }
};

/// min_cost(mu,nu) <= min_cost(mu,eta) + min_cost(eta,nu), witnessed by the
/// glued optimal couplings.
inline TriangleReport rho_triangle_check(const PatternDistribution& mu, const PatternDistribution& eta,
                                         const PatternDistribution& nu, const PatternMetric& cost) {
    TriangleReport rep;
    const auto me = min_cost_transport(mu, eta, cost);
    const auto en = min_cost_transport(eta, nu, cost);
    rep.mu_nu = min_cost_transport(mu, nu, cost).value;
    rep.mu_eta = me.value;
    rep.eta_nu = en.value;
    const Coupling glued = glue_couplings(me.coupling, en.coupling);
    rep.glued_cost = glued.cost(cost);
    rep.inequality = rep.mu_nu <= rep.mu_eta + rep.eta_nu;
    rep.witness = glued.left() == mu && glued.right() == nu && rep.glued_cost <= rep.mu_eta + rep.eta_nu &&
                  rep.glued_cost >= rep.mu_nu;
    return rep;
}

}  // namespace amenlab
