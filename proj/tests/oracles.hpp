#pragma once

// Brute-force reference computations used by the tests. They share no code
// with the library beyond the basic value types.

#include "amenlab/amenlab.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using amenlab::Integer;
using amenlab::Pattern;
using amenlab::PatternDistribution;
using amenlab::Rational;

/// Euler totients phi(1..n) by sieve.
inline std::vector<std::int64_t> totients(std::int64_t n) {
    std::vector<std::int64_t> phi(static_cast<std::size_t>(n + 1));
    std::iota(phi.begin(), phi.end(), 0);
    for (std::int64_t p = 2; p <= n; ++p) {
        if (phi[static_cast<std::size_t>(p)] != p) continue;
        for (std::int64_t k = p; k <= n; k += p) phi[static_cast<std::size_t>(k)] -= phi[static_cast<std::size_t>(k)] / p;
    }
    return phi;
}

/// Number of visible points in [-n, n]^2: the four axis neighbours plus four
/// quadrants of coprime pairs in [1, n]^2, counted as 2 sum phi(k) - 1.
inline std::int64_t visible_count_centered(std::int64_t n) {
    if (n == 0) return 0;
    const auto phi = totients(n);
    std::int64_t s = 0;
    for (std::int64_t k = 1; k <= n; ++k) s += phi[static_cast<std::size_t>(k)];
    return 4 + 4 * (2 * s - 1);
}

/// Transport by exhaustive enumeration of integer tables with margins
/// a_i, b_j (common denominator den).
inline Rational transport_enumerate(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                                    const std::vector<std::vector<Rational>>& cost, std::int64_t den) {
    const std::size_t m = a.size(), n = b.size();
    std::vector<std::int64_t> col_left(b);
    std::vector<std::vector<std::int64_t>> t(m, std::vector<std::int64_t>(n, 0));
    Rational best = -1;
    std::function<void(std::size_t, std::size_t, std::int64_t)> rec = [&](std::size_t i, std::size_t j,
                                                                           std::int64_t row_left) {
        if (i == m) {
            Rational c = 0;
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t s = 0; s < n; ++s) c += Rational(Integer(t[r][s]), Integer(den)) * cost[r][s];
            }
            if (best < 0 || c < best) best = c;
            return;
        }
        if (j == n - 1) {
            if (row_left > col_left[j]) return;
            t[i][j] = row_left;
            col_left[j] -= row_left;
            if (i + 1 == m) {
                if (std::all_of(col_left.begin(), col_left.end(), [](std::int64_t v) { return v == 0; })) {
                    rec(m, 0, 0);
                }
            } else {
                rec(i + 1, 0, a[i + 1]);
            }
            col_left[j] += row_left;
            t[i][j] = 0;
            return;
        }
        for (std::int64_t v = 0; v <= std::min(row_left, col_left[j]); ++v) {
            t[i][j] = v;
            col_left[j] -= v;
            rec(i, j + 1, row_left - v);
            col_left[j] += v;
        }
        t[i][j] = 0;
    };
    rec(0, 0, a[0]);
    return best;
}

/// Exact Prokhorov distance by subset enumeration. On each interval between
/// consecutive pattern distances the eps-neighbourhoods are fixed, so the
/// smallest feasible eps there is max(left end, worst subset excess).
inline Rational prokhorov_exact(const PatternDistribution& mu, const PatternDistribution& nu,
                                const amenlab::PatternMetric& metric) {
    std::vector<Pattern> pts;
    for (const auto& [p, w] : mu.weights()) pts.push_back(p);
    for (const auto& [p, w] : nu.weights()) {
        if (mu.weights().find(p) == mu.weights().end()) pts.push_back(p);
    }
    const std::size_t k = pts.size();
    std::vector<std::vector<Rational>> d(k, std::vector<Rational>(k));
    std::set<Rational> breaks{Rational(0)};
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            d[i][j] = metric(pts[i], pts[j]);
            breaks.insert(d[i][j]);
        }
    }
    const std::vector<Rational> t(breaks.begin(), breaks.end());
    Rational best = 1;
    for (std::size_t b = 0; b < t.size(); ++b) {
        const Rational& eps = t[b];
        Rational excess = 0;
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
            Rational ma = 0, na = 0, ma_eps = 0, na_eps = 0;
            for (std::size_t i = 0; i < k; ++i) {
                bool in = (mask >> i) & 1u;
                bool near = false;
                for (std::size_t j = 0; j < k && !near; ++j) near = ((mask >> j) & 1u) && d[j][i] <= eps;
                if (in) {
                    ma += mu.weight(pts[i]);
                    na += nu.weight(pts[i]);
                }
                if (near) {
                    ma_eps += mu.weight(pts[i]);
                    na_eps += nu.weight(pts[i]);
                }
            }
            excess = std::max({excess, Rational(ma - na_eps), Rational(na - ma_eps)});
        }
        const Rational cand = std::max(eps, excess);
        if (b + 1 == t.size() || cand < t[b + 1]) best = std::min(best, cand);
    }
    return best;
}

/// Residually-finite substitution over Z as a string of one period.
inline std::string substitution_word(std::size_t k) {
    std::string w = "0";
    for (std::size_t j = 1; j < k; ++j) {
        const std::size_t r = (std::size_t{1} << j) + 1;
        std::string next;
        for (std::size_t t = 0; t + 1 < r; ++t) next += w;
        for (char c : w) next += c == '0' ? '1' : '0';
        w = next;
    }
    return w;
}

/// Minimum over cyclic shifts of the mismatch frequency of two words over
/// one common period.
inline Rational rho_words(const std::string& a, const std::string& b) {
    const std::size_t l = std::lcm(a.size(), b.size());
    std::size_t best = l;
    for (std::size_t s = 0; s < b.size(); ++s) {
        std::size_t mis = 0;
        for (std::size_t i = 0; i < l; ++i) mis += a[i % a.size()] != b[(i + s) % b.size()] ? 1 : 0;
        best = std::min(best, mis);
    }
    return Rational(Integer(best), Integer(l));
}

/// Default-metric weight from the closed form 2^{-r} / (2 s_1(r)) on Z.
inline Rational weight_z(std::int64_t h) {
    const std::int64_t r = h < 0 ? -h : h;
    const Integer shell = r == 0 ? 1 : 2;
    return Rational(Integer(1), (Integer(1) << static_cast<unsigned>(r + 1)) * shell);
}

}  // namespace oracle
