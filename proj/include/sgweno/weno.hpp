#pragma once

// Third-order finite difference WENO flux reconstruction with global
// Lax-Friedrichs splitting, applied dimension by dimension on periodic grids.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sgweno/error.hpp"
#include "sgweno/mesh.hpp"
#include "sgweno/problems.hpp"

namespace sgweno {

enum class SchemeVariant { linear, weno };

/// Epsilon in the flux weights. Indicators are squared differences of split
/// flux values, so this also sets the scale below which data counts as smooth.
inline constexpr double kDefaultEpsilon = 1e-2;

/// Optimal weights of the two-point substencils.
inline constexpr double kLinearWeight0 = 2.0 / 3.0;
inline constexpr double kLinearWeight1 = 1.0 / 3.0;

struct FluxSplitPair {
    double plus = 0.0;
    double minus = 0.0;
};

struct WenoWeights {
    double w0 = kLinearWeight0;
    double w1 = kLinearWeight1;
    double beta0 = 0.0;
    double beta1 = 0.0;
    double epsilon = kDefaultEpsilon;
};

/// Weights for the central substencil (beta0) and the upwind one (beta1).
inline WenoWeights flux_weights(double beta0, double beta1, double eps, SchemeVariant variant) {
    WenoWeights w{kLinearWeight0, kLinearWeight1, beta0, beta1, eps};
    if (variant == SchemeVariant::weno) {
        const double a0 = kLinearWeight0 / ((eps + beta0) * (eps + beta0));
        const double a1 = kLinearWeight1 / ((eps + beta1) * (eps + beta1));
        w.w0 = a0 / (a0 + a1);
        w.w1 = a1 / (a0 + a1);
    }
    return w;
}

/// Numerical flux at x_{i+1/2} for a positive wind, from f(u_{i-1}), f(u_i), f(u_{i+1}).
inline double weno_flux_positive(double f_im1, double f_i, double f_ip1, double eps, SchemeVariant variant) {
    const double d0 = f_ip1 - f_i;
    const double d1 = f_i - f_im1;
    const WenoWeights w = flux_weights(d0 * d0, d1 * d1, eps, variant);
    return w.w0 * 0.5 * (f_i + f_ip1) + w.w1 * 0.5 * (3.0 * f_i - f_im1);
}

/// Numerical flux at x_{i+1/2} for a negative wind, from f(u_i), f(u_{i+1}), f(u_{i+2}).
/// Mirror image of weno_flux_positive about x_{i+1/2}.
inline double weno_flux_negative(double f_i, double f_ip1, double f_ip2, double eps, SchemeVariant variant) {
    return weno_flux_positive(f_ip2, f_ip1, f_i, eps, variant);
}

inline FluxSplitPair lax_friedrichs_split(double f_of_u, double u, double alpha) {
    return {0.5 * (f_of_u + alpha * u), 0.5 * (f_of_u - alpha * u)};
}

/// max |f_axis'(u)| over the stored nodes.
inline double max_wavespeed(const GridFunction& u, const ProblemSpec& problem, int axis) {
    if (u.values.empty()) throw Error("max_wavespeed: empty grid");
    const Flux& flux = problem.flux[axis];
    if (flux.kind == Flux::Kind::linear) return std::abs(flux.speed);
    double a = 0.0;
    for (double v : u.values) a = std::max(a, std::abs(flux.derivative(v)));
    return a;
}

struct SchemeOptions {
    SchemeVariant variant = SchemeVariant::weno;
    double epsilon = kDefaultEpsilon;
};

namespace detail {

// Reusable per-thread buffers for one grid line with 1 left and 2 right ghosts.
struct LineWorkspace {
    std::vector<double> fplus, fminus, flux;

    void resize(std::size_t n) {
        fplus.resize(n + 3);
        fminus.resize(n + 3);
        flux.resize(n);
    }
};

inline LineWorkspace& line_workspace() {
    thread_local LineWorkspace ws;
    return ws;
}

}  // namespace detail

/// out = -sum_k (F_{k,i+1/2} - F_{k,i-1/2}) / h_k + S(u).
inline void rhs_into(const GridFunction& u, const ProblemSpec& problem, const SchemeOptions& opts, GridFunction& out) {
    const GridSpec& spec = u.spec;
    if (spec.dim() != problem.dim)
        throw Error("rhs: grid dimension " + std::to_string(spec.dim()) + " does not match problem dimension " +
                    std::to_string(problem.dim));
    if (opts.epsilon <= 0.0) throw Error("rhs: epsilon must be positive");
    if (!(out.spec == spec)) out = GridFunction(spec);

    const std::size_t total = spec.size();
    if (problem.source.active()) {
        for (std::size_t n = 0; n < total; ++n) out.values[n] = problem.source(u.values[n]);
    } else {
        std::fill(out.values.begin(), out.values.end(), 0.0);
    }

    auto& ws = detail::line_workspace();
    const double eps = opts.epsilon;
    const SchemeVariant variant = opts.variant;

    for (int axis = 0; axis < spec.dim(); ++axis) {
        const Flux flux = problem.flux[axis];
        const double alpha = max_wavespeed(u, problem, axis);
        const std::size_t n = spec.cells(axis);
        const std::size_t stride = spec.stride(axis);
        const std::size_t block = n * stride;
        const double inv_h = 1.0 / spec.mesh_size(axis);
        ws.resize(n);
        double* fp = ws.fplus.data();
        double* fm = ws.fminus.data();
        double* F = ws.flux.data();

        for (std::size_t outer = 0; outer < total; outer += block) {
            for (std::size_t inner = 0; inner < stride; ++inner) {
                const std::size_t base = outer + inner;
                // fp[j + 1] holds node j for j = -1 .. n + 1, wrapped periodically.
                for (std::size_t j = 0; j < n + 3; ++j) {
                    const std::size_t node = (j + n - 1) % n;
                    const double v = u.values[base + node * stride];
                    const FluxSplitPair s = lax_friedrichs_split(flux.value(v), v, alpha);
                    fp[j] = s.plus;
                    fm[j] = s.minus;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    F[j] = weno_flux_positive(fp[j], fp[j + 1], fp[j + 2], eps, variant) +
                           weno_flux_negative(fm[j + 1], fm[j + 2], fm[j + 3], eps, variant);
                }
                double left = F[n - 1];
                for (std::size_t j = 0; j < n; ++j) {
                    out.values[base + j * stride] -= (F[j] - left) * inv_h;
                    left = F[j];
                }
            }
        }
    }
}

inline GridFunction rhs(const GridFunction& u, const ProblemSpec& problem, double eps, SchemeVariant variant) {
    GridFunction out(u.spec);
    rhs_into(u, problem, SchemeOptions{variant, eps}, out);
    return out;
}

}  // namespace sgweno
