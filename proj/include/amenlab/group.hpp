#pragma once

// Group elements of Z^d, finite windows, Folner sequences and the
// set-combinatorial quantities attached to them (defects, temperedness).

#include "amenlab/error.hpp"
#include "amenlab/rational.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace amenlab {

inline constexpr int kMaxDim = 4;

/// A point of Z^d for 1 <= d <= kMaxDim. Stored inline, no allocation.
class GroupPoint {
public:
    GroupPoint() = default;

    explicit GroupPoint(int dim) : dim_(check_dim(dim)) {}

    GroupPoint(std::initializer_list<std::int64_t> coords)
        : dim_(check_dim(static_cast<int>(coords.size()))) {
        std::copy(coords.begin(), coords.end(), c_.begin());
    }

    static GroupPoint from(std::span<const std::int64_t> coords) {
        GroupPoint p(static_cast<int>(coords.size()));
        std::copy(coords.begin(), coords.end(), p.c_.begin());
        return p;
    }

    [[nodiscard]] int dim() const noexcept { return dim_; }
    std::int64_t operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
    std::int64_t& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }

    [[nodiscard]] std::span<const std::int64_t> coords() const noexcept {
        return {c_.data(), static_cast<std::size_t>(dim_)};
    }

    [[nodiscard]] std::int64_t norm_inf() const noexcept {
        std::int64_t r = 0;
        for (int i = 0; i < dim_; ++i) {
            r = std::max(r, c_[static_cast<std::size_t>(i)] < 0 ? -c_[static_cast<std::size_t>(i)]
                                                                : c_[static_cast<std::size_t>(i)]);
        }
        return r;
    }

    friend GroupPoint operator+(GroupPoint a, const GroupPoint& b) noexcept {
        for (int i = 0; i < a.dim_; ++i) a[i] += b[i];
        return a;
    }
    friend GroupPoint operator-(GroupPoint a, const GroupPoint& b) noexcept {
        for (int i = 0; i < a.dim_; ++i) a[i] -= b[i];
        return a;
    }
    friend GroupPoint operator-(GroupPoint a) noexcept {
        for (int i = 0; i < a.dim_; ++i) a[i] = -a[i];
        return a;
    }

    // dim_ first so the comparison is lexicographic by coordinates within a dimension.
    friend auto operator<=>(const GroupPoint&, const GroupPoint&) = default;
    friend bool operator==(const GroupPoint&, const GroupPoint&) = default;

    [[nodiscard]] std::string str() const {
        std::string s = "(";
        for (int i = 0; i < dim_; ++i) {
            if (i) s += ",";
            s += std::to_string(c_[static_cast<std::size_t>(i)]);
        }
        return s + ")";
    }

    static int check_dim(int dim) {
        if (dim < 1 || dim > kMaxDim) {
            throw Error(Errc::invalid_dimension,
                        "dimension " + std::to_string(dim) + " outside [1," +
                            std::to_string(kMaxDim) + "]");
        }
        return dim;
    }

private:
    int dim_ = 0;
    std::array<std::int64_t, kMaxDim> c_{};
};

struct GroupPointHash {
    std::size_t operator()(const GroupPoint& p) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(p.dim());
        for (auto v : p.coords()) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

/// The minimal interface a discrete group has to offer to the rest of the
/// library. Only Z^d is instantiated.
template <typename G>
concept DiscreteGroup = requires(const typename G::element_type& a, int dim) {
    { G::identity(dim) } -> std::same_as<typename G::element_type>;
    { G::inverse(a) } -> std::same_as<typename G::element_type>;
    { G::compose(a, a) } -> std::same_as<typename G::element_type>;
};

struct IntegerLattice {
    using element_type = GroupPoint;

    static GroupPoint identity(int dim) { return GroupPoint(dim); }
    static GroupPoint inverse(const GroupPoint& g) { return -g; }
    static GroupPoint compose(const GroupPoint& a, const GroupPoint& b) { return a + b; }
};

static_assert(DiscreteGroup<IntegerLattice>);

/// Duplicate-free finite set of group points, kept in canonical
/// (lexicographic) order.
class FiniteSubset {
public:
    FiniteSubset() = default;

    explicit FiniteSubset(std::vector<GroupPoint> points) : pts_(std::move(points)) {
        std::sort(pts_.begin(), pts_.end());
        pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
        if (!pts_.empty()) {
            dim_ = pts_.front().dim();
            for (const auto& p : pts_) {
                if (p.dim() != dim_) throw Error(Errc::invalid_dimension, "mixed dimensions in subset");
            }
        }
    }

    FiniteSubset(std::initializer_list<GroupPoint> points)
        : FiniteSubset(std::vector<GroupPoint>(points)) {}

    /// Integer box prod_i [lo_i, hi_i]; empty when some lo_i > hi_i.
    static FiniteSubset box(const GroupPoint& lo, const GroupPoint& hi) {
        FiniteSubset s;
        s.dim_ = lo.dim();
        for (int i = 0; i < lo.dim(); ++i) {
            if (lo[i] > hi[i]) return s;
        }
        GroupPoint cur = lo;
        for (;;) {
            s.pts_.push_back(cur);
            int i = lo.dim() - 1;
            while (i >= 0 && cur[i] == hi[i]) {
                cur[i] = lo[i];
                --i;
            }
            if (i < 0) break;
            ++cur[i];
        }
        return s;
    }

    /// {lo, ..., hi}^d
    static FiniteSubset cube(int dim, std::int64_t lo, std::int64_t hi) {
        GroupPoint a(dim), b(dim);
        for (int i = 0; i < dim; ++i) {
            a[i] = lo;
            b[i] = hi;
        }
        return box(a, b);
    }

    [[nodiscard]] std::size_t size() const noexcept { return pts_.size(); }
    [[nodiscard]] bool empty() const noexcept { return pts_.empty(); }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<GroupPoint>& points() const noexcept { return pts_; }
    auto begin() const noexcept { return pts_.begin(); }
    auto end() const noexcept { return pts_.end(); }
    const GroupPoint& operator[](std::size_t i) const noexcept { return pts_[i]; }

    [[nodiscard]] bool contains(const GroupPoint& g) const {
        return std::binary_search(pts_.begin(), pts_.end(), g);
    }

    /// Position of g in canonical order, or size() when absent.
    [[nodiscard]] std::size_t index_of(const GroupPoint& g) const {
        auto it = std::lower_bound(pts_.begin(), pts_.end(), g);
        if (it == pts_.end() || *it != g) return pts_.size();
        return static_cast<std::size_t>(it - pts_.begin());
    }

    [[nodiscard]] bool is_subset_of(const FiniteSubset& other) const {
        return std::includes(other.pts_.begin(), other.pts_.end(), pts_.begin(), pts_.end());
    }

    template <DiscreteGroup G = IntegerLattice>
    [[nodiscard]] FiniteSubset translate_left(const GroupPoint& g) const {
        std::vector<GroupPoint> out;
        out.reserve(pts_.size());
        for (const auto& f : pts_) out.push_back(G::compose(g, f));
        return FiniteSubset(std::move(out));
    }

    template <DiscreteGroup G = IntegerLattice>
    [[nodiscard]] FiniteSubset translate_right(const GroupPoint& g) const {
        std::vector<GroupPoint> out;
        out.reserve(pts_.size());
        for (const auto& f : pts_) out.push_back(G::compose(f, g));
        return FiniteSubset(std::move(out));
    }

    template <DiscreteGroup G = IntegerLattice>
    [[nodiscard]] FiniteSubset inverse() const {
        std::vector<GroupPoint> out;
        out.reserve(pts_.size());
        for (const auto& f : pts_) out.push_back(G::inverse(f));
        return FiniteSubset(std::move(out));
    }

    friend FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b) {
        FiniteSubset s;
        s.dim_ = a.empty() ? b.dim_ : a.dim_;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(s.pts_));
        return s;
    }

    friend FiniteSubset set_intersection(const FiniteSubset& a, const FiniteSubset& b) {
        FiniteSubset s;
        s.dim_ = a.dim_;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(s.pts_));
        return s;
    }

    friend FiniteSubset symmetric_difference(const FiniteSubset& a, const FiniteSubset& b) {
        FiniteSubset s;
        s.dim_ = a.empty() ? b.dim_ : a.dim_;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                      std::back_inserter(s.pts_));
        return s;
    }

    /// Coordinate-wise bounding box (lo, hi). Requires a non-empty set.
    [[nodiscard]] std::pair<GroupPoint, GroupPoint> bounds() const {
        GroupPoint lo = pts_.front(), hi = pts_.front();
        for (const auto& p : pts_) {
            for (int i = 0; i < dim_; ++i) {
                lo[i] = std::min(lo[i], p[i]);
                hi[i] = std::max(hi[i], p[i]);
            }
        }
        return {lo, hi};
    }

    friend bool operator==(const FiniteSubset& a, const FiniteSubset& b) { return a.pts_ == b.pts_; }

private:
    int dim_ = 0;
    std::vector<GroupPoint> pts_;
};

namespace detail {

// Dense occupancy grid over an integer box, row-major in canonical order.
class BoxGrid {
public:
    BoxGrid(const GroupPoint& lo, const GroupPoint& hi) : lo_(lo), dim_(lo.dim()) {
        std::size_t vol = 1;
        for (int i = 0; i < dim_; ++i) {
            ext_[static_cast<std::size_t>(i)] = static_cast<std::size_t>(hi[i] - lo[i] + 1);
            vol *= ext_[static_cast<std::size_t>(i)];
        }
        bits_.assign(vol, 0);
    }

    static std::size_t volume(const GroupPoint& lo, const GroupPoint& hi) {
        double v = 1;
        for (int i = 0; i < lo.dim(); ++i) v *= static_cast<double>(hi[i] - lo[i] + 1);
        return v > 4e8 ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(v);
    }

    void set(const GroupPoint& p) { bits_[offset(p)] = 1; }
    void fill() { std::fill(bits_.begin(), bits_.end(), 1); }

    FiniteSubset to_subset() const {
        std::vector<GroupPoint> pts;
        GroupPoint cur = lo_;
        for (std::size_t k = 0; k < bits_.size(); ++k) {
            if (bits_[k]) {
                std::size_t rem = k;
                for (int i = dim_ - 1; i >= 0; --i) {
                    const auto e = ext_[static_cast<std::size_t>(i)];
                    cur[i] = lo_[i] + static_cast<std::int64_t>(rem % e);
                    rem /= e;
                }
                pts.push_back(cur);
            }
        }
        return FiniteSubset(std::move(pts));
    }

private:
    std::size_t offset(const GroupPoint& p) const {
        std::size_t off = 0;
        for (int i = 0; i < dim_; ++i) {
            off = off * ext_[static_cast<std::size_t>(i)] + static_cast<std::size_t>(p[i] - lo_[i]);
        }
        return off;
    }

    GroupPoint lo_;
    int dim_;
    std::array<std::size_t, kMaxDim> ext_{};
    std::vector<unsigned char> bits_;
};

}  // namespace detail

/// A^{-1}B = { a^{-1} b : a in A, b in B }, built exactly.
inline FiniteSubset product_set(const FiniteSubset& a_inv_of, const FiniteSubset& b) {
    const auto [alo, ahi] = a_inv_of.bounds();
    const auto [blo, bhi] = b.bounds();
    const GroupPoint lo = blo - ahi;
    const GroupPoint hi = bhi - alo;
    if (detail::BoxGrid::volume(lo, hi) <= 200'000'000) {
        detail::BoxGrid grid(lo, hi);
        // Differences of two full boxes fill the whole difference box.
        if (a_inv_of.size() == detail::BoxGrid::volume(alo, ahi) && b.size() == detail::BoxGrid::volume(blo, bhi)) {
            grid.fill();
            return grid.to_subset();
        }
        for (const auto& x : a_inv_of) {
            for (const auto& y : b) grid.set(y - x);
        }
        return grid.to_subset();
    }
    std::vector<GroupPoint> out;
    for (const auto& x : a_inv_of) {
        for (const auto& y : b) out.push_back(y - x);
    }
    return FiniteSubset(std::move(out));
}

enum class FolnerKind { boxes, centered_boxes, custom };

constexpr std::string_view to_string(FolnerKind k) noexcept {
    switch (k) {
    case FolnerKind::boxes: return "boxes";
    case FolnerKind::centered_boxes: return "centered";
    case FolnerKind::custom: return "custom";
    }
    return "custom";
}

/// Index n -> F_n. Indices are 1-based; box kinds also accept n = 0.
class FolnerSequence {
public:
    using Generator = std::function<FiniteSubset(std::size_t)>;

    FolnerSequence(int dim, FolnerKind kind, Generator gen, std::size_t length = 0)
        : dim_(dim), kind_(kind), gen_(std::move(gen)), length_(length) {}

    /// Explicit finite list; list[0] is F_1.
    static FolnerSequence from_list(std::vector<FiniteSubset> sets) {
        if (sets.empty()) throw Error(Errc::invalid_input, "empty Folner list");
        for (const auto& s : sets) {
            if (s.empty()) throw Error(Errc::invalid_input, "Folner sets must be non-empty");
        }
        const int dim = sets.front().dim();
        const std::size_t len = sets.size();
        auto shared = std::make_shared<const std::vector<FiniteSubset>>(std::move(sets));
        return FolnerSequence(
            dim, FolnerKind::custom,
            [shared](std::size_t n) {
                if (n < 1 || n > shared->size()) {
                    throw Error(Errc::invalid_input, "index " + std::to_string(n) + " outside list");
                }
                return (*shared)[n - 1];
            },
            len);
    }

    [[nodiscard]] FiniteSubset at(std::size_t n) const { return gen_(n); }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] FolnerKind kind() const noexcept { return kind_; }
    /// 0 for unbounded generators.
    [[nodiscard]] std::size_t length() const noexcept { return length_; }
    [[nodiscard]] bool is_nested() const noexcept { return kind_ != FolnerKind::custom; }

private:
    int dim_;
    FolnerKind kind_;
    Generator gen_;
    std::size_t length_;
};

inline FolnerSequence make_box_folner(int dim, FolnerKind kind) {
    if (dim <= 0 || dim > kMaxDim) {
        throw Error(Errc::invalid_dimension, "make_box_folner: d = " + std::to_string(dim));
    }
    if (kind == FolnerKind::custom) {
        throw Error(Errc::invalid_input, "make_box_folner: use FolnerSequence::from_list for custom");
    }
    if (kind == FolnerKind::boxes) {
        return FolnerSequence(dim, kind, [dim](std::size_t n) {
            return FiniteSubset::cube(dim, 0, static_cast<std::int64_t>(n));
        });
    }
    return FolnerSequence(dim, kind, [dim](std::size_t n) {
        const auto r = static_cast<std::int64_t>(n);
        return FiniteSubset::cube(dim, -r, r);
    });
}

enum class Side { left, right };

/// |gF (sym. diff) F| / |F| for side left, |Fg (sym. diff) F| / |F| for side right.
template <DiscreteGroup G = IntegerLattice>
Rational folner_defect(const FiniteSubset& f, const GroupPoint& g, Side side) {
    if (f.empty()) throw Error(Errc::invalid_input, "folner_defect: empty set");
    const FiniteSubset moved =
        side == Side::left ? f.template translate_left<G>(g) : f.template translate_right<G>(g);
    const auto diff = symmetric_difference(moved, f).size();
    return Rational(Integer(diff), Integer(f.size()));
}

/// |U_{k<=n} F_k^{-1} F_{n+1}| / |F_{n+1}|.
inline Rational temperedness_ratio(const FolnerSequence& seq, std::size_t n) {
    if (n < 1) throw Error(Errc::invalid_input, "temperedness_ratio: n must be >= 1");
    const FiniteSubset next = seq.at(n + 1);
    FiniteSubset acc;
    if (seq.is_nested()) {
        // F_k subset of F_n for k <= n, so the union collapses to its last term.
        acc = product_set(seq.at(n), next);
    } else {
        for (std::size_t k = 1; k <= n; ++k) acc = set_union(acc, product_set(seq.at(k), next));
    }
    return Rational(Integer(acc.size()), Integer(next.size()));
}

/// Greedy tempered subsequence: index j is kept when the ratio against all
/// previously kept indices is at most `bound`. The first index is always kept.
inline std::vector<std::size_t> tempered_subsequence(const FolnerSequence& seq, double bound,
                                                     std::size_t horizon) {
    if (!(bound > 1.0)) throw Error(Errc::invalid_constant, "tempered_subsequence: C must exceed 1");
    if (horizon < 1) throw Error(Errc::invalid_input, "tempered_subsequence: horizon must be >= 1");
    const Rational c = decimal_rational(bound);
    std::vector<std::size_t> kept{1};
    FiniteSubset prev = seq.at(1);
    std::vector<FiniteSubset> kept_sets{prev};
    for (std::size_t j = 2; j <= horizon; ++j) {
        const FiniteSubset cand = seq.at(j);
        FiniteSubset acc;
        if (seq.is_nested()) {
            acc = product_set(kept_sets.back(), cand);
        } else {
            for (const auto& s : kept_sets) acc = set_union(acc, product_set(s, cand));
        }
        if (Rational(Integer(acc.size()), Integer(cand.size())) <= c) {
            kept.push_back(j);
            kept_sets.push_back(cand);
        }
    }
    return kept;
}

}  // namespace amenlab
