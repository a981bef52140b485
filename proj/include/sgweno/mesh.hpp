#pragma once

// Semi-coarsened grid family on a periodic box, nodal grid functions and the
// combination index sets that tie the family together.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "sgweno/error.hpp"

namespace sgweno {

inline constexpr int kMaxDim = 3;

using Point = std::array<double, kMaxDim>;
using NodeIndex = std::array<std::size_t, kMaxDim>;

struct DomainBox {
    int dim = 2;
    Point lo{0.0, 0.0, 0.0};
    Point hi{1.0, 1.0, 1.0};

    /// [a, b]^dim
    static DomainBox cube(int dim, double a, double b) {
        DomainBox box;
        box.dim = dim;
        for (int k = 0; k < kMaxDim; ++k) {
            box.lo[k] = k < dim ? a : 0.0;
            box.hi[k] = k < dim ? b : 0.0;
        }
        box.validate();
        return box;
    }

    double extent(int axis) const { return hi[axis] - lo[axis]; }

    void validate() const {
        detail::require(dim == 2 || dim == 3, "domain dimension must be 2 or 3, got " + std::to_string(dim));
        for (int k = 0; k < dim; ++k)
            detail::require(hi[k] > lo[k], "domain axis " + std::to_string(k) + " has hi <= lo");
    }

    bool operator==(const DomainBox&) const = default;
};

/// Per-axis refinement levels (l1, ..., ld) relative to the root grid.
class LevelTuple {
public:
    LevelTuple() = default;

    LevelTuple(std::initializer_list<int> levels) {
        detail::require(levels.size() == 2 || levels.size() == 3, "level tuple must have 2 or 3 entries");
        dim_ = static_cast<int>(levels.size());
        std::copy(levels.begin(), levels.end(), levels_.begin());
        check();
    }

    static LevelTuple uniform(int dim, int level) {
        detail::require(dim == 2 || dim == 3, "level tuple must have 2 or 3 entries");
        LevelTuple t;
        t.dim_ = dim;
        for (int k = 0; k < dim; ++k) t.levels_[k] = level;
        t.check();
        return t;
    }

    static LevelTuple from_array(int dim, const std::array<int, kMaxDim>& levels) {
        detail::require(dim == 2 || dim == 3, "level tuple must have 2 or 3 entries");
        LevelTuple t;
        t.dim_ = dim;
        for (int k = 0; k < dim; ++k) t.levels_[k] = levels[k];
        t.check();
        return t;
    }

    int dim() const noexcept { return dim_; }
    int operator[](int axis) const { return levels_[axis]; }
    int sum() const { return std::accumulate(levels_.begin(), levels_.begin() + dim_, 0); }
    int max() const { return *std::max_element(levels_.begin(), levels_.begin() + dim_); }

    std::string str() const {
        std::string s = "(";
        for (int k = 0; k < dim_; ++k) {
            if (k) s += ",";
            s += std::to_string(levels_[k]);
        }
        return s + ")";
    }

    auto operator<=>(const LevelTuple&) const = default;

private:
    void check() const {
        for (int k = 0; k < dim_; ++k)
            detail::require(levels_[k] >= 0, "refinement levels must be non-negative");
    }

    int dim_ = 2;
    std::array<int, kMaxDim> levels_{0, 0, 0};
};

/// One semi-coarsened grid: root cell count N_r per axis refined 2^l_k times along axis k.
///
/// Storage is periodic: the right endpoint is identified with the left one, so
/// an axis holds N_r * 2^l_k nodes. `reported_nodes` gives the count with the
/// duplicated endpoint included.
class GridSpec {
public:
    GridSpec() = default;

    GridSpec(DomainBox domain, int root_cells, LevelTuple levels)
        : domain_(domain), root_cells_(root_cells), levels_(levels) {
        domain_.validate();
        detail::require(root_cells_ >= 1, "root cell count must be positive");
        detail::require(levels_.dim() == domain_.dim, "level tuple dimension does not match domain");
        for (int k = 0; k < kMaxDim; ++k) cells_[k] = 1;
        for (int k = 0; k < dim(); ++k) {
            detail::require(levels_[k] < 30, "refinement level too large");
            cells_[k] = static_cast<std::size_t>(root_cells_) << levels_[k];
        }
        strides_[kMaxDim - 1] = 1;
        for (int k = kMaxDim - 2; k >= 0; --k) strides_[k] = strides_[k + 1] * cells_[k + 1];
    }

    int dim() const noexcept { return domain_.dim; }
    const DomainBox& domain() const noexcept { return domain_; }
    int root_cells() const noexcept { return root_cells_; }
    const LevelTuple& levels() const noexcept { return levels_; }

    double root_mesh_size(int axis) const { return domain_.extent(axis) / root_cells_; }
    double mesh_size(int axis) const { return root_mesh_size(axis) / static_cast<double>(1u << levels_[axis]); }

    /// Stored node (= cell) count along an axis; 1 for axes beyond dim().
    std::size_t cells(int axis) const { return cells_[axis]; }
    std::size_t reported_nodes(int axis) const { return cells_[axis] + 1; }
    std::size_t stride(int axis) const { return strides_[axis]; }
    std::size_t size() const { return strides_[0] * cells_[0]; }

    std::size_t flat(const NodeIndex& idx) const {
        return idx[0] * strides_[0] + idx[1] * strides_[1] + idx[2] * strides_[2];
    }

    NodeIndex unflat(std::size_t n) const {
        NodeIndex idx{};
        for (int k = 0; k < kMaxDim; ++k) {
            idx[k] = n / strides_[k];
            n %= strides_[k];
        }
        return idx;
    }

    /// Same domain and root grid, different levels.
    GridSpec with_levels(const LevelTuple& levels) const { return GridSpec(domain_, root_cells_, levels); }

    bool operator==(const GridSpec& o) const {
        return domain_ == o.domain_ && root_cells_ == o.root_cells_ && levels_ == o.levels_;
    }

private:
    DomainBox domain_;
    int root_cells_ = 1;
    LevelTuple levels_;
    std::array<std::size_t, kMaxDim> cells_{1, 1, 1};
    std::array<std::size_t, kMaxDim> strides_{1, 1, 1};
};

/// Nodal values on one grid, row-major with x varying slowest.
struct GridFunction {
    GridSpec spec;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(GridSpec s, double fill = 0.0) : spec(std::move(s)), values(spec.size(), fill) {}

    std::size_t size() const noexcept { return values.size(); }
    double& operator[](std::size_t n) { return values[n]; }
    double operator[](std::size_t n) const { return values[n]; }
    double& at(const NodeIndex& idx) { return values[spec.flat(idx)]; }
    double at(const NodeIndex& idx) const { return values[spec.flat(idx)]; }

    bool all_finite() const {
        return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
    }
};

struct CombinationEntry {
    LevelTuple levels;
    int coefficient = 0;
};

/// Level tuples of the combination technique with their signed coefficients.
struct CombinationIndexSet {
    int dim = 2;
    int finest_level = 0;
    std::vector<CombinationEntry> entries;

    int coefficient_sum() const {
        int s = 0;
        for (const auto& e : entries) s += e.coefficient;
        return s;
    }

    const CombinationEntry* find(const LevelTuple& levels) const {
        auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.levels == levels; });
        return it == entries.end() ? nullptr : &*it;
    }
};

namespace detail {
inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline void tuples_with_sum(int dim, int total, std::vector<LevelTuple>& out) {
    std::array<int, kMaxDim> lv{0, 0, 0};
    std::function<void(int, int)> rec = [&](int axis, int remaining) {
        if (axis == dim - 1) {
            lv[axis] = remaining;
            out.push_back(LevelTuple::from_array(dim, lv));
            return;
        }
        for (int l = 0; l <= remaining; ++l) {
            lv[axis] = l;
            rec(axis + 1, remaining - l);
        }
    };
    if (total >= 0) rec(0, total);
}
}  // namespace detail

/// Layers |l| = N_L - q for q = 0..dim-1 with coefficient (-1)^q C(dim-1, q):
/// (+1, -1) in 2D and (+1, -2, +1) in 3D. Entries sorted lexicographically.
inline CombinationIndexSet build_index_set(int dim, int finest_level) {
    detail::require(dim == 2 || dim == 3, "combination index set supports dim 2 or 3, got " + std::to_string(dim));
    detail::require(finest_level >= dim - 1, "finest level " + std::to_string(finest_level) +
                                                 " too small for the " + std::to_string(dim) +
                                                 "D combination formula (need >= " + std::to_string(dim - 1) + ")");
    CombinationIndexSet set;
    set.dim = dim;
    set.finest_level = finest_level;
    for (int q = 0; q < dim; ++q) {
        const int coeff = static_cast<int>((q % 2 ? -1 : 1) * detail::binomial(dim - 1, q));
        std::vector<LevelTuple> layer;
        detail::tuples_with_sum(dim, finest_level - q, layer);
        for (const auto& t : layer) set.entries.push_back({t, coeff});
    }
    std::sort(set.entries.begin(), set.entries.end(),
              [](const auto& a, const auto& b) { return a.levels < b.levels; });
    return set;
}

inline Point node_coordinate(const GridSpec& spec, const NodeIndex& index) {
    Point x{0.0, 0.0, 0.0};
    for (int k = 0; k < spec.dim(); ++k) {
        if (index[k] >= spec.cells(k))
            throw Error("node index " + std::to_string(index[k]) + " out of range on axis " + std::to_string(k));
        x[k] = spec.domain().lo[k] + static_cast<double>(index[k]) * spec.mesh_size(k);
    }
    return x;
}

/// Pointwise evaluation of f at every stored node.
template <class F>
GridFunction restrict_function(F&& f, const GridSpec& spec) {
    GridFunction u(spec);
    NodeIndex idx{0, 0, 0};
    std::size_t n = 0;
    for (idx[0] = 0; idx[0] < spec.cells(0); ++idx[0])
        for (idx[1] = 0; idx[1] < spec.cells(1); ++idx[1])
            for (idx[2] = 0; idx[2] < spec.cells(2); ++idx[2]) u.values[n++] = f(node_coordinate(spec, idx));
    return u;
}

}  // namespace sgweno
