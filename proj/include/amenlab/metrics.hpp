#pragma once

// Finite-window estimators for upper asymptotic density, the Besicovitch
// pseudometric, its threshold variant D' and the d-bar pseudometric.
//
// Every limsup is replaced by values at explicit indices n; EstimateTrace
// keeps them and reports the maximum over the last half of the evaluated
// indices as the limsup proxy.

#include "amenlab/config.hpp"
#include "amenlab/error.hpp"
#include "amenlab/group.hpp"
#include "amenlab/rational.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace amenlab {

using Membership = std::function<bool(const GroupPoint&)>;

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class EstimateTrace {
public:
    struct Row {
        std::size_t n;
        double value;
        double lo;
        double hi;
    };

    void add(std::size_t n, double value, double lo, double hi) {
        if (!rows_.empty() && n <= rows_.back().n) {
            throw Error(Errc::invalid_input, "EstimateTrace: indices must increase");
        }
        if (!(lo <= value && value <= hi)) {
            throw Error(Errc::invalid_input, "EstimateTrace: need lo <= value <= hi");
        }
        rows_.push_back({n, value, lo, hi});
    }

    [[nodiscard]] const std::vector<Row>& rows() const noexcept { return rows_; }
    [[nodiscard]] bool empty() const noexcept { return rows_.empty(); }
    [[nodiscard]] const Row& last() const { return rows_.back(); }

    [[nodiscard]] double running_max() const {
        double m = -INFINITY;
        for (const auto& r : rows_) m = std::max(m, r.value);
        return m;
    }

    /// max of `value` over the last half of the rows (at least one row).
    [[nodiscard]] double limsup_proxy() const {
        if (rows_.empty()) return 0.0;
        double m = -INFINITY;
        for (std::size_t i = rows_.size() / 2; i < rows_.size(); ++i) m = std::max(m, rows_[i].value);
        return m;
    }

    /// CSV with header `n,value,lo,hi`.
    [[nodiscard]] std::string to_csv() const {
        std::string out = "n,value,lo,hi\n";
        for (const auto& r : rows_) {
            out += std::to_string(r.n) + "," + format_double(r.value) + "," + format_double(r.lo) + "," +
                   format_double(r.hi) + "\n";
        }
        return out;
    }

private:
    std::vector<Row> rows_;
};

/// D_F(A) = |A n F| / |F|.
inline Rational density_exact(const Membership& a, const FiniteSubset& f) {
    if (f.empty()) throw Error(Errc::invalid_input, "density: empty window");
    std::size_t hits = 0;
    for (const auto& g : f) hits += a(g) ? 1u : 0u;
    return Rational(Integer(hits), Integer(f.size()));
}

namespace detail {

inline void check_n_list(const std::vector<std::size_t>& n_list) {
    if (n_list.empty()) throw Error(Errc::invalid_input, "n_list must be non-empty");
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) throw Error(Errc::invalid_input, "n_list must increase");
    }
}

}  // namespace detail

inline EstimateTrace upper_density(const Membership& a, const FolnerSequence& seq,
                                   const std::vector<std::size_t>& n_list) {
    detail::check_n_list(n_list);
    EstimateTrace trace;
    for (auto n : n_list) {
        const double v = to_double(density_exact(a, seq.at(n)));
        trace.add(n, v, v, v);
    }
    return trace;
}

/// Lower ends of the truncated distances d(gx, gz) for every g in F (in
/// canonical order of F). Each true value lies in [lo, lo + tail_bound(R)].
inline std::vector<double> pointwise_distances(const Configuration& x, const Configuration& z,
                                               const FiniteSubset& f, const AdmissibleMetric& m,
                                               std::int64_t radius) {
    if (radius < 0) throw Error(Errc::invalid_input, "radius must be >= 0");
    if (f.empty()) throw Error(Errc::invalid_input, "empty Folner set");
    if (x.dim() != z.dim() || x.dim() != f.dim() || m.dim() != x.dim()) {
        throw Error(Errc::invalid_dimension, "pointwise_distances: dimension mismatch");
    }
    const auto ball = m.ball(radius);
    auto [lo, hi] = f.bounds();
    for (int i = 0; i < lo.dim(); ++i) {
        lo[i] -= radius;
        hi[i] += radius;
    }
    std::vector<double> out;
    out.reserve(f.size());
    const std::size_t vol = detail::BoxGrid::volume(lo, hi);
    if (vol <= 50'000'000) {
        // Cache mismatches over the padded bounding box.
        const FiniteSubset padded = FiniteSubset::box(lo, hi);
        std::vector<unsigned char> mis(padded.size());
        for (std::size_t k = 0; k < padded.size(); ++k) mis[k] = x(padded[k]) != z(padded[k]) ? 1 : 0;
        std::array<std::int64_t, kMaxDim> stride{};
        std::int64_t s = 1;
        for (int i = lo.dim() - 1; i >= 0; --i) {
            stride[static_cast<std::size_t>(i)] = s;
            s *= hi[i] - lo[i] + 1;
        }
        auto offset = [&](const GroupPoint& p) {
            std::int64_t o = 0;
            for (int i = 0; i < p.dim(); ++i) o += (p[i] - lo[i]) * stride[static_cast<std::size_t>(i)];
            return o;
        };
        std::vector<std::pair<std::int64_t, double>> ball_off;
        ball_off.reserve(ball.size());
        for (const auto& [h, w] : ball) {
            std::int64_t o = 0;
            for (int i = 0; i < h.dim(); ++i) o += h[i] * stride[static_cast<std::size_t>(i)];
            ball_off.emplace_back(o, w);
        }
        for (const auto& g : f) {
            const std::int64_t base = offset(g);
            detail::CompensatedSum sum;
            for (const auto& [o, w] : ball_off) {
                if (mis[static_cast<std::size_t>(base + o)]) sum.add(w);
            }
            out.push_back(sum.value());
        }
    } else {
        for (const auto& g : f) {
            detail::CompensatedSum sum;
            for (const auto& [h, w] : ball) {
                const GroupPoint p = h + g;
                if (x(p) != z(p)) sum.add(w);
            }
            out.push_back(sum.value());
        }
    }
    return out;
}

/// (1/|F_n|) sum_{g in F_n} d(gx, gz) as an interval; hi - lo <= tail_bound(R).
inline DistanceInterval besicovitch_estimate(const Configuration& x, const Configuration& z,
                                             const FolnerSequence& seq, std::size_t n,
                                             const AdmissibleMetric& m, std::int64_t radius) {
    const FiniteSubset f = seq.at(n);
    const auto dists = pointwise_distances(x, z, f, m, radius);
    detail::CompensatedSum sum;
    for (double v : dists) sum.add(v);
    const double lo = sum.value() / static_cast<double>(f.size());
    const double hi = std::min(1.0, lo + m.tail_bound(radius));
    return {lo, std::max(lo, hi)};
}

struct DPrimeEstimate {
    double value = 0.0;
    bool saturated = false;
};

/// {1.0001} u {k/200 : 1 <= k <= 200}, descending.
inline std::vector<double> default_delta_grid() {
    std::vector<double> grid{1.0001};
    for (int k = 200; k >= 1; --k) grid.push_back(k / 200.0);
    return grid;
}

/// Smallest grid value delta with |{g in F_n : d(gx,gz) >= delta}| / |F_n| < delta,
/// where a point counts when the lower end of its truncated distance is >= delta.
inline DPrimeEstimate besicovitch_prime_estimate(const Configuration& x, const Configuration& z,
                                                 const FolnerSequence& seq, std::size_t n,
                                                 const AdmissibleMetric& m, std::int64_t radius,
                                                 const std::vector<double>& delta_grid = default_delta_grid()) {
    if (delta_grid.empty()) return {0.0, true};
    for (std::size_t i = 1; i < delta_grid.size(); ++i) {
        if (!(delta_grid[i] < delta_grid[i - 1])) {
            throw Error(Errc::invalid_input, "delta grid must be strictly decreasing");
        }
    }
    const FiniteSubset f = seq.at(n);
    auto dists = pointwise_distances(x, z, f, m, radius);
    std::sort(dists.begin(), dists.end());
    const double size = static_cast<double>(f.size());
    std::optional<double> best;
    for (double delta : delta_grid) {
        const auto above = static_cast<double>(dists.end() - std::lower_bound(dists.begin(), dists.end(), delta));
        if (above / size < delta) best = delta;  // descending grid: keep the smallest feasible
    }
    if (!best) return {delta_grid.front(), true};
    return {*best, false};
}

/// |{f in F_n : x(f) != z(f)}| / |F_n|.
inline Rational dbar_estimate(const Configuration& x, const Configuration& z, const FolnerSequence& seq,
                              std::size_t n) {
    if (n < 1) throw Error(Errc::invalid_input, "dbar_estimate: n must be >= 1");
    const FiniteSubset f = seq.at(n);
    std::size_t mis = 0;
    for (const auto& g : f) mis += x(g) != z(g) ? 1u : 0u;
    return Rational(Integer(mis), Integer(f.size()));
}

/// Exact mismatch frequency of two configurations over one common period
/// (both must carry a period lattice).
inline Rational periodic_dbar(const Configuration& x, const Configuration& z) {
    if (!x.period() || !z.period()) throw Error(Errc::not_periodic, "periodic_dbar needs periodic inputs");
    if (x.dim() != z.dim()) throw Error(Errc::invalid_dimension, "periodic_dbar: dimension mismatch");
    const std::int64_t m = std::lcm(x.period()->exponent(), z.period()->exponent());
    // m Z^d lies inside both lattices, so {0..m-1}^d is a common period window.
    const FiniteSubset box = FiniteSubset::cube(x.dim(), 0, m - 1);
    std::size_t mis = 0;
    for (const auto& g : box) mis += x(g) != z(g) ? 1u : 0u;
    return Rational(Integer(mis), Integer(box.size()));
}

}  // namespace amenlab
