#pragma once

// Third-order SSP Runge-Kutta time marching with the sparse-grid time step
// rule: every component grid advances with the dt of the finest grid.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sgweno/error.hpp"
#include "sgweno/mesh.hpp"
#include "sgweno/problems.hpp"
#include "sgweno/weno.hpp"

namespace sgweno {

struct TimeStepPolicy {
    double cfl = 0.5;
    /// Mesh size of the finest grid, shared by all component grids.
    double finest_h = 0.0;
    std::array<double, kMaxDim> wavespeed{0.0, 0.0, 0.0};
};

/// dt = cfl / sum_k (alpha_k / h).
inline double compute_dt(const TimeStepPolicy& policy, int dim) {
    detail::require(policy.cfl > 0.0, "CFL number must be positive");
    detail::require(policy.finest_h > 0.0, "finest mesh size must be positive");
    double rate = 0.0;
    for (int k = 0; k < dim; ++k) {
        detail::require(policy.wavespeed[k] >= 0.0, "wavespeed bounds must be non-negative");
        rate += policy.wavespeed[k] / policy.finest_h;
    }
    if (rate <= 0.0) throw Error("all wavespeeds are zero: no characteristic time scale for dt");
    return policy.cfl / rate;
}

/// Per-axis max |f'(u)| over a set of grids (the union of their data).
inline std::array<double, kMaxDim> wavespeed_bound(const ProblemSpec& problem, std::span<const GridFunction> grids) {
    std::array<double, kMaxDim> a{0.0, 0.0, 0.0};
    for (const auto& g : grids)
        for (int k = 0; k < problem.dim; ++k) a[k] = std::max(a[k], max_wavespeed(g, problem, k));
    return a;
}

namespace detail {
// Relative slack that lets the final step absorb accumulated rounding instead
// of leaving a sliver step.
inline constexpr double kStepSlack = 1e-10;

struct StepSize {
    double dt;
    bool last;
};

inline StepSize next_step(double t, double T, double dt) {
    const double remaining = T - t;
    if (remaining <= dt * (1.0 + kStepSlack)) return {remaining, true};
    return {dt, false};
}
}  // namespace detail

/// Steps of size dt with the last one truncated so the sum lands on T.
inline std::vector<double> step_sequence(double T, double dt) {
    detail::require(T >= 0.0, "final time must be non-negative");
    detail::require(dt > 0.0, "time step must be positive");
    std::vector<double> steps;
    double t = 0.0;
    while (t < T) {
        const auto [h, last] = detail::next_step(t, T, dt);
        steps.push_back(h);
        t = last ? T : t + h;
    }
    return steps;
}

/// Shu-Osher three-stage SSP-RK3 with reusable stage buffers.
class SspRk3 {
public:
    /// Advance u in place. `op(v, out)` writes L(v) into out.
    template <class RhsOp>
    void step(GridFunction& u, double dt, RhsOp&& op) {
        detail::require(dt > 0.0, "time step must be positive");
        const std::size_t n = u.size();
        if (!(stage_.spec == u.spec)) {
            stage_ = GridFunction(u.spec);
            l_ = GridFunction(u.spec);
        }
        double* s = stage_.values.data();
        double* l = l_.values.data();
        double* v = u.values.data();

        op(u, l_);
        for (std::size_t i = 0; i < n; ++i) s[i] = v[i] + dt * l[i];

        op(stage_, l_);
        for (std::size_t i = 0; i < n; ++i) s[i] = 0.75 * v[i] + 0.25 * (s[i] + dt * l[i]);

        op(stage_, l_);
        for (std::size_t i = 0; i < n; ++i) v[i] = (1.0 / 3.0) * v[i] + (2.0 / 3.0) * (s[i] + dt * l[i]);
    }

private:
    GridFunction stage_;
    GridFunction l_;
};

template <class RhsOp>
GridFunction ssp_rk3_step(const GridFunction& u, double dt, RhsOp&& op) {
    GridFunction next = u;
    SspRk3 rk;
    rk.step(next, dt, std::forward<RhsOp>(op));
    return next;
}

struct StepInfo {
    std::size_t step = 0;
    double t = 0.0;
    double dt = 0.0;
};

using ProgressCallback = std::function<void(const StepInfo&)>;

/// Advance u0 to time T with a dt frozen from `policy`.
inline GridFunction evolve(const GridFunction& u0, const ProblemSpec& problem, const TimeStepPolicy& policy, double T,
                           const SchemeOptions& opts, const ProgressCallback& progress = {}) {
    detail::require(T >= 0.0, "final time must be non-negative");
    GridFunction u = u0;
    if (T == 0.0) return u;

    const double dt = compute_dt(policy, problem.dim);
    auto op = [&](const GridFunction& v, GridFunction& out) { rhs_into(v, problem, opts, out); };
    SspRk3 rk;
    double t = 0.0;
    std::size_t step = 0;
    while (t < T) {
        const auto [h, last] = detail::next_step(t, T, dt);
        rk.step(u, h, op);
        ++step;
        t = last ? T : t + h;
        if (!u.all_finite()) throw BlowUpError(step, t);
        if (progress) progress({step, t, h});
    }
    return u;
}

/// Advance several grids in lockstep; dt is refreshed every step from the
/// wavespeed bound over all grids, so every grid sees the same dt sequence.
inline void evolve_lockstep(std::span<GridFunction> grids, const ProblemSpec& problem, double cfl, double finest_h,
                            double T, const SchemeOptions& opts, const ProgressCallback& progress = {}) {
    detail::require(T >= 0.0, "final time must be non-negative");
    if (T == 0.0 || grids.empty()) return;
    auto op = [&](const GridFunction& v, GridFunction& out) { rhs_into(v, problem, opts, out); };
    std::vector<SspRk3> rk(grids.size());
    double t = 0.0;
    std::size_t step = 0;
    while (t < T) {
        TimeStepPolicy policy{cfl, finest_h,
                              wavespeed_bound(problem, std::span<const GridFunction>(grids.data(), grids.size()))};
        const double dt = compute_dt(policy, problem.dim);
        const auto [h, last] = detail::next_step(t, T, dt);
        for (std::size_t g = 0; g < grids.size(); ++g) {
            rk[g].step(grids[g], h, op);
            if (!grids[g].all_finite()) throw BlowUpError(step + 1, t + h);
        }
        ++step;
        t = last ? T : t + h;
        if (progress) progress({step, t, h});
    }
}

}  // namespace sgweno
