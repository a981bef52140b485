#pragma once

// Test problems: periodic scalar conservation laws u_t + div f(u) = S(u).

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sgweno/error.hpp"
#include "sgweno/mesh.hpp"

namespace sgweno {

/// Scalar flux function along one axis. Either linear advection f(u) = c u or
/// Burgers f(u) = u^2 / 2.
struct Flux {
    enum class Kind { linear, burgers };

    Kind kind = Kind::linear;
    double speed = 1.0;

    static Flux linear(double c) { return {Kind::linear, c}; }
    static Flux burgers() { return {Kind::burgers, 0.0}; }

    double value(double u) const { return kind == Kind::linear ? speed * u : 0.5 * u * u; }
    double derivative(double u) const { return kind == Kind::linear ? speed : u; }
};

/// Linear source S(u) = rate * u.
struct Source {
    double rate = 0.0;

    double operator()(double u) const { return rate * u; }
    bool active() const { return rate != 0.0; }
};

using InitialCondition = std::function<double(const Point&)>;

struct ExactSolution {
    std::function<double(const Point&, double)> eval;
    /// Latest time at which `eval` is a valid solution of the PDE.
    double valid_until = std::numeric_limits<double>::infinity();
};

struct ProblemSpec {
    std::string name;
    int dim = 2;
    DomainBox domain;
    std::array<Flux, kMaxDim> flux{};
    Source source;
    InitialCondition initial;
    std::optional<ExactSolution> exact;
    /// Solution by characteristics, defined up to the first shock only.
    std::optional<ExactSolution> pre_shock;
    /// Suggested final times; the Burgers problems have a smooth and a shock phase.
    double t_smooth = 1.0;
    double t_shock = 1.0;

    /// Exact solution usable at time t, if any.
    const ExactSolution* reference_at(double t) const {
        if (exact && t <= exact->valid_until) return &*exact;
        if (pre_shock && t <= pre_shock->valid_until) return &*pre_shock;
        return nullptr;
    }
};

namespace detail {

inline double sum_coords(const Point& x, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += x[k];
    return s;
}

/// u = a + b sin(k (s - d t u)), the characteristic solution of Burgers with
/// equal fluxes on every axis and data a + b sin(k s) with s = x + y (+ z).
inline double burgers_wave(double s, double t, int dim, double a, double b, double k) {
    double u = a + b * std::sin(k * s);
    for (int it = 0; it < 100; ++it) {
        const double phase = k * (s - dim * t * u);
        const double g = u - a - b * std::sin(phase);
        const double dg = 1.0 + b * k * dim * t * std::cos(phase);
        const double du = g / dg;
        u -= du;
        if (std::abs(du) <= 1e-16 * (1.0 + std::abs(u))) break;
    }
    return u;
}

inline ProblemSpec burgers_sine(std::string name, int dim, double half_width) {
    constexpr double pi = std::numbers::pi;
    constexpr double mean = 0.3, amp = 0.7, wavenumber = pi / 2;
    ProblemSpec p;
    p.name = std::move(name);
    p.dim = dim;
    p.domain = DomainBox::cube(dim, -half_width, half_width);
    for (int k = 0; k < dim; ++k) p.flux[k] = Flux::burgers();
    p.initial = [dim](const Point& x) { return mean + amp * std::sin(wavenumber * sum_coords(x, dim)); };
    // Characteristics cross at t = 1 / (dim * amp * wavenumber).
    const double breaking = 1.0 / (dim * amp * wavenumber);
    p.pre_shock = ExactSolution{
        [dim](const Point& x, double t) { return burgers_wave(sum_coords(x, dim), t, dim, mean, amp, wavenumber); },
        breaking * (1.0 - 1e-9)};
    p.t_smooth = 0.5 / (pi * pi);
    p.t_shock = 5.0 / (pi * pi);
    return p;
}

}  // namespace detail

inline const std::vector<std::string>& problem_names() {
    static const std::vector<std::string> names{"linear3d", "burgers_source_2d", "burgers_source_3d", "burgers2d",
                                                "burgers3d"};
    return names;
}

inline ProblemSpec catalog_lookup(const std::string& name) {
    constexpr double pi = std::numbers::pi;

    if (name == "linear3d") {
        ProblemSpec p;
        p.name = name;
        p.dim = 3;
        p.domain = DomainBox::cube(3, -2.0, 2.0);
        for (int k = 0; k < 3; ++k) p.flux[k] = Flux::linear(1.0);
        p.initial = [](const Point& x) { return std::sin(pi / 2 * (x[0] + x[1] + x[2])); };
        p.exact = ExactSolution{[](const Point& x, double t) {
            return std::sin(pi / 2 * ((x[0] - t) + (x[1] - t) + (x[2] - t)));
        }};
        return p;
    }
    if (name == "burgers_source_2d") {
        ProblemSpec p;
        p.name = name;
        p.dim = 2;
        p.domain = DomainBox::cube(2, 0.0, 2 * pi);
        for (int k = 0; k < 2; ++k) p.flux[k] = Flux::burgers();
        p.source = Source{-0.1};
        p.initial = [](const Point& x) { return std::sin(x[0] - x[1]); };
        p.exact = ExactSolution{[](const Point& x, double t) { return std::exp(-0.1 * t) * std::sin(x[0] - x[1]); }};
        return p;
    }
    if (name == "burgers_source_3d") {
        ProblemSpec p;
        p.name = name;
        p.dim = 3;
        p.domain = DomainBox::cube(3, 0.0, 4 * pi);
        for (int k = 0; k < 3; ++k) p.flux[k] = Flux::burgers();
        p.source = Source{-0.1};
        p.initial = [](const Point& x) { return std::sin(x[0] - 0.5 * x[1] - 0.5 * x[2]); };
        p.exact = ExactSolution{[](const Point& x, double t) {
            return std::exp(-0.1 * t) * std::sin(x[0] - 0.5 * x[1] - 0.5 * x[2]);
        }};
        return p;
    }
    if (name == "burgers2d") return detail::burgers_sine(name, 2, 2.0);
    if (name == "burgers3d") return detail::burgers_sine(name, 3, 3.0);

    std::string known;
    for (const auto& n : problem_names()) known += (known.empty() ? "" : ", ") + n;
    throw Error("unknown problem '" + name + "' (known: " + known + ")");
}

}  // namespace sgweno
