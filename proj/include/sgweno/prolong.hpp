#pragma once

// Prolongation of component-grid solutions onto the finest grid and the
// combination-technique sum. Both interpolations are third order and applied
// one axis at a time (x, then y, then z).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sgweno/error.hpp"
#include "sgweno/mesh.hpp"
#include "sgweno/parallel.hpp"
#include "sgweno/weno.hpp"

namespace sgweno {

/// Epsilon in the WENO interpolation weights.
inline constexpr double kDefaultProlongEpsilon = 1e-3;

struct ProlongationKind {
    enum class Kind { lagrange, weno };

    Kind kind = Kind::lagrange;
    double epsilon = kDefaultProlongEpsilon;

    static ProlongationKind lagrange() { return {Kind::lagrange, kDefaultProlongEpsilon}; }
    static ProlongationKind weno(double eps = kDefaultProlongEpsilon) {
        detail::require(eps > 0.0, "WENO prolongation epsilon must be positive");
        return {Kind::weno, eps};
    }
};

/// Target location x = x_{i-1} + alpha_tilde * h inside the half-open cell
/// [x_{i-1/2}, x_{i+1/2}) around coarse node i.
class InterpolationPoint {
public:
    explicit InterpolationPoint(double alpha_tilde) : alpha_tilde_(alpha_tilde) {
        if (!(alpha_tilde >= 0.5 && alpha_tilde < 1.5))
            throw Error("interpolation offset " + std::to_string(alpha_tilde) + " outside [0.5, 1.5)");
    }
    double alpha_tilde() const noexcept { return alpha_tilde_; }

private:
    double alpha_tilde_;
};

/// Third-order WENO interpolation from u_{i-1}, u_i, u_{i+1}.
///
/// Blends the linear interpolants on {x_{i-1}, x_i} and {x_i, x_{i+1}} with
/// linear weights gamma = (1 - a/2, a/2), which together give the quadratic
/// through all three nodes. The nonlinear weights suppress the substencil that
/// crosses a jump.
inline double weno_interpolate(double u_im1, double u_i, double u_ip1, InterpolationPoint at, double eps) {
    detail::require(eps > 0.0, "WENO interpolation epsilon must be positive");
    const double a = at.alpha_tilde();
    const double d1 = u_i - u_im1;
    const double d2 = u_ip1 - u_i;
    const double g1 = 1.0 - 0.5 * a;
    const double g2 = 0.5 * a;
    const double t1 = g1 / ((eps + d1 * d1) * (eps + d1 * d1));
    const double t2 = g2 / ((eps + d2 * d2) * (eps + d2 * d2));
    const double w1 = t1 / (t1 + t2);
    const double w2 = 1.0 - w1;
    // w1 * P1 + w2 * P2 with P1 = u_i + (a-1) d1, P2 = u_i + (a-1) d2.
    return u_i + (a - 1.0) * (w1 * d1 + w2 * d2);
}

inline double weno_interpolate(double u_im1, double u_i, double u_ip1, double alpha_tilde, double eps) {
    return weno_interpolate(u_im1, u_i, u_ip1, InterpolationPoint(alpha_tilde), eps);
}

namespace detail {
inline void check_refine_factor(std::size_t factor) {
    require(factor >= 1 && (factor & (factor - 1)) == 0, "refine factor must be a power of two");
}
}  // namespace detail

/// Periodic quadratic Lagrange prolongation. The coarse line is tiled by
/// non-overlapping windows of two cells starting at node 0; the quadratic
/// through each window's three nodes is evaluated at the fine nodes inside it.
inline void lagrange_prolong_line(std::span<const double> coarse, std::size_t factor, std::span<double> fine) {
    detail::check_refine_factor(factor);
    const std::size_t n = coarse.size();
    detail::require(n >= 1, "empty coarse line");
    detail::require(fine.size() == n * factor, "fine line has wrong length");
    if (factor == 1) {
        std::copy(coarse.begin(), coarse.end(), fine.begin());
        return;
    }
    if (n % 2 != 0)
        throw Error("Lagrange prolongation needs an even coarse cell count, got " + std::to_string(n));
    const double inv_r = 1.0 / static_cast<double>(factor);
    for (std::size_t w = 0; w < n; w += 2) {
        const double u0 = coarse[w], u1 = coarse[w + 1], u2 = coarse[(w + 2) % n];
        // Newton form about the window's left node.
        const double d1 = u1 - u0;
        const double d2 = 0.5 * (u2 - 2.0 * u1 + u0);
        const std::size_t first = w * factor;
        for (std::size_t m = 0; m < 2 * factor; ++m) {
            if (m % factor == 0) {
                fine[first + m] = coarse[w + m / factor];
                continue;
            }
            const double s = static_cast<double>(m) * inv_r;
            fine[first + m] = u0 + s * (d1 + (s - 1.0) * d2);
        }
    }
}

inline std::vector<double> lagrange_prolong_line(std::span<const double> coarse, std::size_t factor) {
    std::vector<double> fine(coarse.size() * factor);
    lagrange_prolong_line(coarse, factor, fine);
    return fine;
}

/// Periodic WENO prolongation: each fine node takes the WENO interpolant of
/// the coarse node whose half-open cell contains it.
inline void weno_prolong_line(std::span<const double> coarse, std::size_t factor, double eps, std::span<double> fine) {
    detail::check_refine_factor(factor);
    detail::require(eps > 0.0, "WENO prolongation epsilon must be positive");
    const std::size_t n = coarse.size();
    detail::require(n >= 1, "empty coarse line");
    detail::require(fine.size() == n * factor, "fine line has wrong length");
    if (factor == 1) {
        std::copy(coarse.begin(), coarse.end(), fine.begin());
        return;
    }
    const double inv_r = 1.0 / static_cast<double>(factor);
    const std::size_t half = factor / 2;
    for (std::size_t m = 0; m < n * factor; ++m) {
        // Nearest coarse node, ties going right: x in [x_{i-1/2}, x_{i+1/2}).
        const std::size_t i = (m + half) / factor;
        const std::ptrdiff_t offset = static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(i * factor);
        if (offset == 0) {
            fine[m] = coarse[i % n];
            continue;
        }
        const double a = 1.0 + static_cast<double>(offset) * inv_r;
        fine[m] = weno_interpolate(coarse[(i + n - 1) % n], coarse[i % n], coarse[(i + 1) % n], InterpolationPoint(a),
                                   eps);
    }
}

inline std::vector<double> weno_prolong_line(std::span<const double> coarse, std::size_t factor, double eps) {
    std::vector<double> fine(coarse.size() * factor);
    weno_prolong_line(coarse, factor, eps, fine);
    return fine;
}

/// Interpolate u onto the grid with `target` levels, refining x, then y, then z.
inline GridFunction prolong(const GridFunction& u, const LevelTuple& target, const ProlongationKind& kind) {
    const GridSpec& src = u.spec;
    detail::require(target.dim() == src.dim(), "target level tuple has the wrong dimension");
    for (int k = 0; k < src.dim(); ++k)
        if (target[k] < src.levels()[k])
            throw Error("prolongation target " + target.str() + " is coarser than source " + src.levels().str());

    GridFunction current = u;
    std::vector<double> coarse_line, fine_line;
    for (int axis = 0; axis < src.dim(); ++axis) {
        const int from = current.spec.levels()[axis];
        if (target[axis] == from) continue;
        const std::size_t factor = std::size_t{1} << (target[axis] - from);

        std::array<int, kMaxDim> lv{};
        for (int k = 0; k < src.dim(); ++k) lv[k] = current.spec.levels()[k];
        lv[axis] = target[axis];
        GridFunction next(current.spec.with_levels(LevelTuple::from_array(src.dim(), lv)));

        const std::size_t n = current.spec.cells(axis);
        const std::size_t nf = next.spec.cells(axis);
        const std::size_t stride = current.spec.stride(axis);
        const std::size_t stride_f = next.spec.stride(axis);
        // Axes before `axis` share the same outer extent in both grids.
        const std::size_t outer_count = current.size() / (n * stride);
        coarse_line.resize(n);
        fine_line.resize(nf);
        for (std::size_t o = 0; o < outer_count; ++o) {
            for (std::size_t inner = 0; inner < stride; ++inner) {
                const std::size_t base = o * n * stride + inner;
                const std::size_t base_f = o * nf * stride_f + inner;
                for (std::size_t j = 0; j < n; ++j) coarse_line[j] = current.values[base + j * stride];
                if (kind.kind == ProlongationKind::Kind::lagrange)
                    lagrange_prolong_line(coarse_line, factor, fine_line);
                else
                    weno_prolong_line(coarse_line, factor, kind.epsilon, fine_line);
                for (std::size_t j = 0; j < nf; ++j) next.values[base_f + j * stride_f] = fine_line[j];
            }
        }
        current = std::move(next);
    }
    return current;
}

struct ComponentSolution {
    LevelTuple levels;
    GridFunction solution;
};

/// Sum of coefficient * prolong(U^l) over the index set, on the finest grid.
/// Prolongations may run on `threads` workers; accumulation is sequential in
/// index-set order.
inline GridFunction combine(std::span<const ComponentSolution> solutions, const CombinationIndexSet& index_set,
                            const ProlongationKind& kind, unsigned threads = 1) {
    std::map<LevelTuple, const GridFunction*> by_levels;
    for (const auto& s : solutions) {
        if (!index_set.find(s.levels)) throw Error("component " + s.levels.str() + " is not in the index set");
        if (!(s.solution.spec.levels() == s.levels))
            throw Error("component " + s.levels.str() + " carries a grid with levels " + s.solution.spec.levels().str());
        if (!by_levels.emplace(s.levels, &s.solution).second)
            throw Error("duplicate component solution for " + s.levels.str());
    }
    for (const auto& e : index_set.entries)
        if (!by_levels.count(e.levels)) throw Error("missing component solution for " + e.levels.str());
    detail::require(!index_set.entries.empty(), "empty index set");

    const LevelTuple finest = LevelTuple::uniform(index_set.dim, index_set.finest_level);
    const auto& entries = index_set.entries;
    std::vector<GridFunction> fine(entries.size());
    parallel_for(entries.size(), threads,
                 [&](std::size_t e) { fine[e] = prolong(*by_levels.at(entries[e].levels), finest, kind); });

    const GridSpec& spec = fine.front().spec;
    std::vector<long double> acc(spec.size(), 0.0L);
    for (std::size_t e = 0; e < entries.size(); ++e) {
        if (!(fine[e].spec == spec)) throw Error("component grids do not share a domain and root grid");
        const long double c = entries[e].coefficient;
        for (std::size_t n = 0; n < acc.size(); ++n) acc[n] += c * fine[e].values[n];
    }
    GridFunction result(spec);
    for (std::size_t n = 0; n < acc.size(); ++n) result.values[n] = static_cast<double>(acc[n]);
    return result;
}

/// Grid points of all component grids, each axis counted with both endpoints.
inline std::uint64_t count_points_sparse(int dim, int root_cells, int finest_level) {
    detail::require(dim == 2 || dim == 3, "point count supports dim 2 or 3");
    const auto n = [root_cells](int l) { return (static_cast<std::uint64_t>(root_cells) << l) + 1; };
    const int L = finest_level;
    std::uint64_t total = 0;
    if (dim == 2) {
        for (int i = 0; i <= L; ++i) total += n(i) * n(L - i);
        for (int i = 0; i <= L - 1; ++i) total += n(i) * n(L - i - 1);
        return total;
    }
    for (int q = 0; q <= 2; ++q)
        for (int i = 0; i <= L - q; ++i)
            for (int j = 0; j <= L - q - i; ++j) total += n(i) * n(j) * n(L - q - i - j);
    return total;
}

/// (N_r 2^N_L + 1)^dim
inline std::uint64_t count_points_single(int dim, int root_cells, int finest_level) {
    detail::require(dim == 2 || dim == 3, "point count supports dim 2 or 3");
    const std::uint64_t n = (static_cast<std::uint64_t>(root_cells) << finest_level) + 1;
    return dim == 2 ? n * n : n * n * n;
}

}  // namespace sgweno
