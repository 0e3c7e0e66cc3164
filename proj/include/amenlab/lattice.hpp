#pragma once

// Full-rank sublattices of Z^d in column Hermite normal form. The HNF gives
// a canonical fundamental domain (a box) and exact coset reduction.

#include "amenlab/error.hpp"
#include "amenlab/group.hpp"
#include "amenlab/rational.hpp"

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace amenlab {

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
    return a - floor_div(a, b) * b;
}

}  // namespace detail

class Lattice {
public:
    /// `columns[j]` is the j-th generator; there must be exactly d of them
    /// and they must be linearly independent.
    explicit Lattice(std::vector<std::vector<std::int64_t>> columns) {
        dim_ = GroupPoint::check_dim(static_cast<int>(columns.size()));
        for (const auto& c : columns) {
            if (static_cast<int>(c.size()) != dim_) {
                throw Error(Errc::invalid_input, "lattice basis must be square");
            }
        }
        hnf_ = std::move(columns);
        to_hermite_form();
    }

    /// m * Z^d
    static Lattice scalar(int dim, std::int64_t m) {
        if (m == 0) throw Error(Errc::invalid_input, "scalar lattice needs m != 0");
        std::vector<std::vector<std::int64_t>> cols(static_cast<std::size_t>(GroupPoint::check_dim(dim)),
                                                    std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0));
        for (int i = 0; i < dim; ++i) cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = m < 0 ? -m : m;
        return Lattice(std::move(cols));
    }

    [[nodiscard]] int dim() const noexcept { return dim_; }

    /// [Z^d : L] = |det|.
    [[nodiscard]] std::int64_t index() const noexcept {
        std::int64_t idx = 1;
        for (int i = 0; i < dim_; ++i) idx *= diag(i);
        return idx;
    }

    /// Smallest m > 0 with m Z^d contained in the lattice (exponent of Z^d / L).
    [[nodiscard]] std::int64_t exponent() const {
        Integer m = 1;
        for (int i = 0; i < dim_; ++i) {
            // Forward substitution of H c = e_i; m e_i lies in L iff m c is integral.
            std::vector<Rational> c(static_cast<std::size_t>(dim_));
            for (int r = 0; r < dim_; ++r) {
                Rational rhs = r == i ? 1 : 0;
                for (int j = 0; j < r; ++j) {
                    rhs -= Rational(hnf_[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)]) *
                           c[static_cast<std::size_t>(j)];
                }
                c[static_cast<std::size_t>(r)] = rhs / diag(r);
                m = boost::multiprecision::lcm(m, denominator_of(c[static_cast<std::size_t>(r)]));
            }
        }
        return m.convert_to<std::int64_t>();
    }

    [[nodiscard]] std::int64_t diag(int i) const noexcept {
        return hnf_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }

    /// Canonical coset representative, lying in prod_i [0, diag(i)).
    [[nodiscard]] GroupPoint reduce(GroupPoint p) const {
        for (int i = 0; i < dim_; ++i) {
            const auto& col = hnf_[static_cast<std::size_t>(i)];
            const std::int64_t q = detail::floor_div(p[i], diag(i));
            if (q == 0) continue;
            for (int r = i; r < dim_; ++r) p[r] -= q * col[static_cast<std::size_t>(r)];
        }
        return p;
    }

    [[nodiscard]] bool contains(const GroupPoint& p) const {
        const GroupPoint r = reduce(p);
        for (int i = 0; i < dim_; ++i) {
            if (r[i] != 0) return false;
        }
        return true;
    }

    /// The box prod_i [0, diag(i)), a transversal of Z^d / L.
    [[nodiscard]] FiniteSubset fundamental_domain() const {
        GroupPoint lo(dim_), hi(dim_);
        for (int i = 0; i < dim_; ++i) hi[i] = diag(i) - 1;
        return FiniteSubset::box(lo, hi);
    }

    /// Generators in Hermite normal form (lower triangular, columns).
    [[nodiscard]] const std::vector<std::vector<std::int64_t>>& basis() const noexcept { return hnf_; }

    [[nodiscard]] GroupPoint generator(int j) const {
        GroupPoint g(dim_);
        for (int i = 0; i < dim_; ++i) g[i] = hnf_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        return g;
    }

    [[nodiscard]] std::string str() const {
        std::string s = "[";
        for (int j = 0; j < dim_; ++j) {
            if (j) s += ",";
            s += generator(j).str();
        }
        return s + "]";
    }

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.hnf_ == b.hnf_; }

private:
    std::int64_t& at(int row, int col) {
        return hnf_[static_cast<std::size_t>(col)][static_cast<std::size_t>(row)];
    }

    // Column operations: col_a <- x col_a + y col_b, col_b <- u col_a + v col_b (unimodular).
    void combine(int a, int b, std::int64_t x, std::int64_t y, std::int64_t u, std::int64_t v) {
        auto& ca = hnf_[static_cast<std::size_t>(a)];
        auto& cb = hnf_[static_cast<std::size_t>(b)];
        for (int r = 0; r < dim_; ++r) {
            const auto pa = ca[static_cast<std::size_t>(r)];
            const auto pb = cb[static_cast<std::size_t>(r)];
            ca[static_cast<std::size_t>(r)] = x * pa + y * pb;
            cb[static_cast<std::size_t>(r)] = u * pa + v * pb;
        }
    }

    void to_hermite_form() {
        for (int i = 0; i < dim_; ++i) {
            // Zero out row i to the right of the diagonal using extended gcd steps.
            for (int j = i + 1; j < dim_; ++j) {
                while (at(i, j) != 0) {
                    const std::int64_t a = at(i, i);
                    const std::int64_t b = at(i, j);
                    if (a == 0) {
                        std::swap(hnf_[static_cast<std::size_t>(i)], hnf_[static_cast<std::size_t>(j)]);
                        continue;
                    }
                    const std::int64_t q = b / a;
                    // col_j <- col_j - q col_i, then swap so the smaller pivot sits on the diagonal.
                    combine(i, j, 1, 0, -q, 1);
                    std::swap(hnf_[static_cast<std::size_t>(i)], hnf_[static_cast<std::size_t>(j)]);
                }
            }
            if (at(i, i) == 0) throw Error(Errc::invalid_input, "lattice basis is singular");
            if (at(i, i) < 0) {
                for (auto& v : hnf_[static_cast<std::size_t>(i)]) v = -v;
            }
        }
        // Reduce entries left of the diagonal into [0, diag).
        for (int i = 0; i < dim_; ++i) {
            for (int j = 0; j < i; ++j) {
                const std::int64_t q = detail::floor_div(at(i, j), at(i, i));
                if (q != 0) combine(j, i, 1, -q, 0, 1);
            }
        }
    }

    int dim_ = 0;
    std::vector<std::vector<std::int64_t>> hnf_;
};

}  // namespace amenlab
