// Acceptance gate: convergence studies against reference error levels plus
// shock-phase property checks. Prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sgweno/sgweno.hpp"

using namespace sgweno;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool within_rel(double v, double ref, double rel) { return std::abs(v - ref) <= rel * ref; }
bool within_factor(double v, double ref, double factor) { return v <= ref * factor && v >= ref / factor; }

double linf_error(const RunConfig& cfg) {
    const auto p = catalog_lookup(cfg.problem);
    const auto r = run_simulation(cfg);
    return error_norms(r.solution, p, cfg.final_time(p)).linf;
}

// burgers_source_2d, linear scheme, single grid.
Outcome criterion_1() {
    Outcome o;
    RunConfig cfg;
    cfg.problem = "burgers_source_2d";
    cfg.mode = RunMode::single;
    cfg.scheme = SchemeVariant::linear;
    cfg.finest_level = 0;
    cfg.cfl = 0.5;
    cfg.t_final = 1.0;
    const int meshes[] = {80, 160, 320};
    const double ref[] = {6.95e-5, 8.69e-6, 1.09e-6};
    double prev = 0.0;
    for (int i = 0; i < 3; ++i) {
        cfg.root_cells = meshes[i];
        const double e = linf_error(cfg);
        o.check(within_rel(e, ref[i], 0.2), std::to_string(meshes[i]) + "^2 Linf " + fmt("%.3e", e));
        if (i > 0) {
            const double order = *observed_order(prev, e);
            o.check(std::abs(order - 3.0) <= 0.15, "order " + fmt("%.2f", order));
        }
        prev = e;
    }
    return o;
}

// burgers_source_2d, WENO, sparse N_L = 3, Lagrange prolongation.
Outcome criterion_2() {
    Outcome o;
    RunConfig cfg;
    cfg.problem = "burgers_source_2d";
    cfg.mode = RunMode::sparse;
    cfg.scheme = SchemeVariant::weno;
    cfg.prolongation = ProlongationKind::Kind::lagrange;
    cfg.finest_level = 3;
    cfg.t_final = 1.0;
    std::vector<double> err;
    for (int nr : {10, 20, 40}) {
        cfg.root_cells = nr;
        err.push_back(linf_error(cfg));
    }
    o.check(err[1] < err[0] && err[2] < err[1],
            "Linf " + fmt("%.3e", err[0]) + " " + fmt("%.3e", err[1]) + " " + fmt("%.3e", err[2]));
    const double order = *observed_order(err[1], err[2]);
    o.check(order >= 5.0, "order at 320^2 " + fmt("%.2f", order));
    o.check(within_factor(err[2], 1.17e-5, 3.0), "Linf at 320^2 vs 1.17e-5");
    return o;
}

// linear3d, linear scheme, single vs sparse.
Outcome criterion_3() {
    Outcome o;
    RunConfig cfg;
    cfg.problem = "linear3d";
    cfg.scheme = SchemeVariant::linear;
    cfg.cfl = 0.75;
    cfg.t_final = 1.0;

    cfg.mode = RunMode::single;
    cfg.root_cells = 80;
    cfg.finest_level = 0;
    const double single = linf_error(cfg);
    o.check(within_rel(single, 2.30e-4, 0.2), "single 80^3 Linf " + fmt("%.3e", single));

    cfg.mode = RunMode::sparse;
    cfg.root_cells = 10;
    cfg.finest_level = 3;
    const double sparse = linf_error(cfg);
    o.check(within_factor(sparse, 7.16e-4, 2.0), "sparse N_L=3 Linf " + fmt("%.3e", sparse));
    return o;
}

Outcome criterion_4() {
    Outcome o;
    auto eq = [&](std::uint64_t got, std::uint64_t want, const std::string& what) {
        o.check(got == want, what + " = " + std::to_string(got));
    };
    eq(count_points_sparse(2, 10, 3), 4847, "sparse(2,10,3)");
    eq(count_points_sparse(2, 20, 2), 6805, "sparse(2,20,2)");
    eq(count_points_sparse(3, 10, 3), 132549, "sparse(3,10,3)");
    eq(count_points_sparse(3, 20, 2), 276570, "sparse(3,20,2)");
    eq(count_points_single(2, 10, 3), 6561, "single(2,10,3)");
    eq(count_points_single(3, 10, 3), 531441, "single(3,10,3)");
    return o;
}

// burgers2d smooth phase, WENO, sparse N_L = 2, WENO prolongation.
Outcome criterion_5() {
    Outcome o;
    RunConfig cfg;
    cfg.problem = "burgers2d";
    cfg.mode = RunMode::sparse;
    cfg.scheme = SchemeVariant::weno;
    cfg.prolongation = ProlongationKind::Kind::weno;
    cfg.finest_level = 2;
    cfg.cfl = 0.5;
    std::vector<double> err;
    std::string line;
    for (int nr : {20, 40, 80, 160}) {
        cfg.root_cells = nr;
        err.push_back(linf_error(cfg));
        line += (line.empty() ? "" : " ") + fmt("%.3e", err.back());
    }
    o.check(true, "Linf " + line);
    const double order = *observed_order(err[1], err[2]);
    o.check(order >= 5.0, "order at 320^2 " + fmt("%.2f", order));
    o.check(within_factor(err[3], 1.44e-8, 3.0), "Linf at 640^2 vs 1.44e-8");
    return o;
}

// burgers2d shock phase: sparse WENO against a single-grid WENO run.
Outcome criterion_6() {
    Outcome o;
    const auto p = catalog_lookup("burgers2d");
    RunConfig cfg;
    cfg.problem = "burgers2d";
    cfg.scheme = SchemeVariant::weno;
    cfg.t_final = p.t_shock;

    cfg.mode = RunMode::sparse;
    cfg.prolongation = ProlongationKind::Kind::weno;
    cfg.root_cells = 40;
    cfg.finest_level = 3;
    const GridFunction sparse = run_simulation(cfg).solution;

    cfg.mode = RunMode::single;
    cfg.root_cells = 320;
    cfg.finest_level = 0;
    const GridFunction single = run_simulation(cfg).solution;

    const auto [lo, hi] = std::minmax_element(sparse.values.begin(), sparse.values.end());
    o.check(*lo >= -0.41 && *hi <= 1.01, "range [" + fmt("%.4f", *lo) + ", " + fmt("%.4f", *hi) + "]");

    const double tv0 = total_variation(diagonal_cut(restrict_function(p.initial, sparse.spec)));
    const double tv = total_variation(diagonal_cut(sparse));
    o.check(tv <= tv0 + 0.05, "cut TV " + fmt("%.4f", tv) + " vs initial " + fmt("%.4f", tv0));

    const GridSpec& s = single.spec;
    const std::size_t n = s.cells(0);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double gx = (single.at({(i + 1) % n, j, 0}) - single.at({(i + n - 1) % n, j, 0})) / (2 * s.mesh_size(0));
            const double gy = (single.at({i, (j + 1) % n, 0}) - single.at({i, (j + n - 1) % n, 0})) / (2 * s.mesh_size(1));
            if (std::hypot(gx, gy) >= 1.0) continue;  // |grad u| on the single grid
            diff = std::max(diff, std::abs(single.at({i, j, 0}) - sparse.at({i, j, 0})));
        }
    o.check(diff <= 0.05, "smooth-region max diff vs single " + fmt("%.4f", diff));
    return o;
}

// burgers_source_3d at finest 80^3: sparse must beat single in wall-clock time.
Outcome criterion_7() {
    Outcome o;
    RunConfig cfg;
    cfg.problem = "burgers_source_3d";
    cfg.scheme = SchemeVariant::weno;
    cfg.root_cells = 10;
    cfg.finest_level = 3;
    cfg.t_final = 1.0;
    cfg.threads = 1;

    cfg.mode = RunMode::sparse;
    const auto sparse = run_simulation(cfg);
    cfg.mode = RunMode::single;
    const auto single = run_simulation(cfg);
    o.check(sparse.seconds < single.seconds,
            "sparse " + fmt("%.2fs", sparse.seconds) + " vs single " + fmt("%.2fs", single.seconds));
    const double ratio = static_cast<double>(sparse.grid_points) / static_cast<double>(single.grid_points);
    o.check(std::round(ratio * 100.0) / 100.0 == 0.25, "grid-point ratio " + fmt("%.4f", ratio));
    return o;
}

// Standalone property checks on the building blocks.
Outcome criterion_8() {
    Outcome o;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> d(-2.0, 2.0);

    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double a = d(rng), b = d(rng), c = d(rng);
        const auto w = flux_weights((c - b) * (c - b), (b - a) * (b - a), kDefaultEpsilon, SchemeVariant::weno);
        worst = std::max(worst, std::abs(w.w0 + w.w1 - 1.0));
    }
    o.check(worst <= 1e-14, "weight normalization " + fmt("%.1e", worst));

    ProblemSpec burgers;
    burgers.dim = 2;
    burgers.domain = DomainBox::cube(2, 0.0, 1.0);
    burgers.flux[0] = burgers.flux[1] = Flux::burgers();
    GridFunction u(GridSpec(burgers.domain, 16, LevelTuple{1, 2}));
    for (auto& v : u.values) v = d(rng);
    const auto r = rhs(u, burgers, kDefaultEpsilon, SchemeVariant::weno);
    long double sum = 0;
    for (double v : r.values) sum += v;
    // rhs values scale with 1/h; the sum bound is taken relative to that scale.
    const double bound = 1e-12 * static_cast<double>(u.size()) / u.spec.mesh_size(0);
    o.check(std::abs(static_cast<double>(sum)) <= bound, "rhs sum " + fmt("%.1e", static_cast<double>(sum)));

    const auto set = build_index_set(3, 3);
    std::vector<ComponentSolution> comps;
    const GridSpec root(DomainBox::cube(3, 0.0, 1.0), 4, LevelTuple{0, 0, 0});
    for (const auto& e : set.entries) comps.push_back({e.levels, GridFunction(root.with_levels(e.levels), 0.37)});
    bool exact = true;
    for (auto kind : {ProlongationKind::lagrange(), ProlongationKind::weno()})
        for (double v : combine(comps, set, kind).values) exact = exact && v == 0.37;
    o.check(exact, "constant through combine");

    // The ENO bounds below scale with epsilon squared; they are stated for 1e-6.
    constexpr double kEnoEps = 1e-6;
    bool nodes = true;
    for (int i = 0; i < 1000; ++i) {
        const double a = d(rng), b = d(rng), c = d(rng);
        nodes = nodes && weno_interpolate(a, b, c, 1.0, kEnoEps) == b;
    }
    o.check(nodes, "node reproduction at alpha=1");

    std::vector<double> step(32, 0.0);
    for (std::size_t i = 8; i < 24; ++i) step[i] = 1.0;
    double over = 0.0;
    for (double v : weno_prolong_line(step, 4, kEnoEps)) over = std::max({over, v - 1.0, -v});
    o.check(over <= 1e-9, "step overshoot " + fmt("%.1e", over));

    GridFunction one(GridSpec(DomainBox::cube(2, 0.0, 1.0), 1, LevelTuple{0, 0}), 1.0);
    const auto next = ssp_rk3_step(one, 0.1, [](const GridFunction& v, GridFunction& out) {
        for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = -v.values[i];
    });
    o.check(std::abs(next.values[0] - 0.9048333333333333) <= 1e-12, "RK3 factor " + fmt("%.15f", next.values[0]));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 linear single-grid convergence (burgers_source_2d)", criterion_1},
        {"2 WENO sparse convergence, Lagrange prolongation (burgers_source_2d)", criterion_2},
        {"3 linear 3D single vs sparse (linear3d)", criterion_3},
        {"4 grid-point counts", criterion_4},
        {"5 smooth-phase WENO sparse, WENO prolongation (burgers2d)", criterion_5},
        {"6 shock-phase sparse vs single (burgers2d)", criterion_6},
        {"7 sparse faster than single (burgers_source_3d)", criterion_7},
        {"8 property suites", criterion_8},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
