#pragma once

// Single-grid and sparse-grid runs, error norms and refine-root-grid
// convergence studies with CSV reports.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sgweno/error.hpp"
#include "sgweno/mesh.hpp"
#include "sgweno/parallel.hpp"
#include "sgweno/problems.hpp"
#include "sgweno/prolong.hpp"
#include "sgweno/time_march.hpp"
#include "sgweno/weno.hpp"

namespace sgweno {

enum class RunMode { single, sparse };

/// How the wavespeed bound entering dt is obtained.
enum class DtMode {
    frozen,   ///< from the initial data of all component grids, fixed for the run
    refresh,  ///< recomputed every step from the current data of all component grids
};

struct RunConfig {
    std::string problem = "burgers_source_2d";
    RunMode mode = RunMode::single;
    SchemeVariant scheme = SchemeVariant::weno;
    ProlongationKind::Kind prolongation = ProlongationKind::Kind::lagrange;
    int root_cells = 10;
    int finest_level = 3;
    double cfl = 0.5;
    double epsilon = kDefaultEpsilon;
    /// Epsilon for WENO prolongation; defaults to kDefaultProlongEpsilon.
    std::optional<double> prolong_epsilon;
    /// Final time; defaults to the problem's smooth-phase time.
    std::optional<double> t_final;
    DtMode dt_mode = DtMode::frozen;
    unsigned threads = 1;

    void validate(const ProblemSpec& problem) const {
        detail::require(root_cells >= 1, "root cell count must be positive");
        detail::require(finest_level >= 0, "finest level must be non-negative");
        detail::require(cfl > 0.0, "CFL number must be positive");
        detail::require(epsilon > 0.0, "epsilon must be positive");
        detail::require(!prolong_epsilon || *prolong_epsilon > 0.0, "prolongation epsilon must be positive");
        detail::require(!t_final || *t_final >= 0.0, "final time must be non-negative");
        if (mode == RunMode::sparse) {
            const int need = problem.dim - 1;
            detail::require(finest_level >= need, "sparse mode in " + std::to_string(problem.dim) +
                                                      "D needs a finest level of at least " + std::to_string(need));
            if (prolongation == ProlongationKind::Kind::lagrange)
                detail::require(root_cells % 2 == 0, "Lagrange prolongation needs an even root cell count, got " +
                                                         std::to_string(root_cells));
        }
    }

    ProlongationKind prolongation_kind() const {
        return prolongation == ProlongationKind::Kind::weno ? ProlongationKind::weno(prolong_epsilon.value_or(kDefaultProlongEpsilon))
                                                            : ProlongationKind::lagrange();
    }

    double final_time(const ProblemSpec& problem) const { return t_final.value_or(problem.t_smooth); }
};

struct RunResult {
    GridFunction solution;
    double seconds = 0.0;
    std::uint64_t grid_points = 0;
    /// Time steps taken (identical on every component grid).
    std::size_t steps = 0;
    /// First dt of the run.
    double dt = 0.0;
};

namespace detail {

inline double finest_mesh_size(const GridSpec& finest) {
    double h = finest.mesh_size(0);
    for (int k = 1; k < finest.dim(); ++k) h = std::min(h, finest.mesh_size(k));
    return h;
}

inline void evolve_all(std::vector<GridFunction>& grids, const ProblemSpec& problem, const RunConfig& cfg,
                       double finest_h, double T, RunResult& result, const ProgressCallback& progress) {
    const SchemeOptions opts{cfg.scheme, cfg.epsilon};
    std::size_t steps = 0;
    double first_dt = 0.0;
    auto count = [&](const StepInfo& s) {
        if (s.step == 1) first_dt = s.dt;
        steps = s.step;
        if (progress) progress(s);
    };
    if (cfg.dt_mode == DtMode::refresh) {
        evolve_lockstep(grids, problem, cfg.cfl, finest_h, T, opts, count);
    } else {
        const TimeStepPolicy policy{cfg.cfl, finest_h, wavespeed_bound(problem, grids)};
        // Every grid gets the same dt; only grid 0 reports progress.
        parallel_for(grids.size(), cfg.threads, [&](std::size_t g) {
            grids[g] = evolve(grids[g], problem, policy, T, opts, g == 0 ? ProgressCallback(count) : ProgressCallback{});
        });
    }
    result.steps = steps;
    result.dt = first_dt;
}

}  // namespace detail

/// Restrict, evolve and (in sparse mode) prolong and combine.
inline RunResult run_simulation(const RunConfig& cfg, const ProgressCallback& progress = {}) {
    const ProblemSpec problem = catalog_lookup(cfg.problem);
    cfg.validate(problem);
    const double T = cfg.final_time(problem);
    const auto start = std::chrono::steady_clock::now();

    RunResult result;
    const GridSpec finest(problem.domain, cfg.root_cells, LevelTuple::uniform(problem.dim, cfg.finest_level));
    const double finest_h = detail::finest_mesh_size(finest);

    if (cfg.mode == RunMode::single) {
        std::vector<GridFunction> grids{restrict_function(problem.initial, finest)};
        detail::evolve_all(grids, problem, cfg, finest_h, T, result, progress);
        result.solution = std::move(grids.front());
        result.grid_points = count_points_single(problem.dim, cfg.root_cells, cfg.finest_level);
    } else {
        const CombinationIndexSet index_set = build_index_set(problem.dim, cfg.finest_level);
        std::vector<GridFunction> grids;
        grids.reserve(index_set.entries.size());
        for (const auto& e : index_set.entries)
            grids.push_back(restrict_function(problem.initial, finest.with_levels(e.levels)));
        detail::evolve_all(grids, problem, cfg, finest_h, T, result, progress);

        std::vector<ComponentSolution> components;
        components.reserve(grids.size());
        for (std::size_t e = 0; e < grids.size(); ++e)
            components.push_back({index_set.entries[e].levels, std::move(grids[e])});
        result.solution = combine(components, index_set, cfg.prolongation_kind(), cfg.threads);
        result.grid_points = count_points_sparse(problem.dim, cfg.root_cells, cfg.finest_level);
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

struct ErrorNorms {
    double linf = 0.0;
    double l2 = 0.0;
};

/// Max-norm and root-mean-square error over the stored nodes.
template <class ExactFn>
ErrorNorms error_norms(const GridFunction& numeric, ExactFn&& exact, double T) {
    detail::require(numeric.size() > 0, "error_norms: empty grid");
    double linf = 0.0, sum_sq = 0.0;
    for (std::size_t n = 0; n < numeric.size(); ++n) {
        const double e = numeric.values[n] - exact(node_coordinate(numeric.spec, numeric.spec.unflat(n)), T);
        linf = std::max(linf, std::abs(e));
        sum_sq += e * e;
    }
    return {linf, std::sqrt(sum_sq / static_cast<double>(numeric.size()))};
}

inline ErrorNorms error_norms(const GridFunction& numeric, const ProblemSpec& problem, double T) {
    const ExactSolution* ref = problem.reference_at(T);
    if (!ref) throw Error("problem '" + problem.name + "' has no exact solution at t = " + std::to_string(T));
    return error_norms(numeric, ref->eval, T);
}

/// log2(err_coarse / err_fine); empty when either error is not positive.
inline std::optional<double> observed_order(double err_coarse, double err_fine) {
    if (!(err_coarse > 0.0) || !(err_fine > 0.0)) return std::nullopt;
    return std::log2(err_coarse / err_fine);
}

struct ConvergenceRow {
    std::string mesh;  ///< finest mesh label, e.g. "80x80"
    int root_cells = 0;
    int finest_level = 0;
    std::optional<double> linf;
    std::optional<double> linf_order;
    std::optional<double> l2;
    std::optional<double> l2_order;
    double seconds = 0.0;
    std::uint64_t grid_points = 0;
    std::string status = "ok";

    bool operator==(const ConvergenceRow&) const = default;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;

    bool operator==(const ConvergenceReport&) const = default;
};

inline std::string mesh_label(int dim, int root_cells, int finest_level) {
    const std::string n = std::to_string(static_cast<long long>(root_cells) << finest_level);
    std::string s = n;
    for (int k = 1; k < dim; ++k) s += "x" + n;
    return s;
}

/// Fills in the order columns from consecutive rows.
inline void fill_orders(ConvergenceReport& report) {
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
        auto& row = report.rows[r];
        row.linf_order.reset();
        row.l2_order.reset();
        if (r == 0) continue;
        const auto& prev = report.rows[r - 1];
        if (prev.linf && row.linf) row.linf_order = observed_order(*prev.linf, *row.linf);
        if (prev.l2 && row.l2) row.l2_order = observed_order(*prev.l2, *row.l2);
    }
}

struct StudyOutput {
    ConvergenceReport report;
    /// Solution of the last successful run.
    std::optional<GridFunction> last_solution;
};

/// One run per root cell count, all other settings from `base`. Failed runs
/// are recorded in their row's status and the study continues.
inline StudyOutput run_study(const RunConfig& base, const std::vector<int>& root_cells,
                             const ProgressCallback& progress = {}) {
    detail::require(!root_cells.empty(), "study needs at least one root grid");
    const ProblemSpec problem = catalog_lookup(base.problem);
    StudyOutput out;
    for (int nr : root_cells) {
        RunConfig cfg = base;
        cfg.root_cells = nr;
        ConvergenceRow row;
        row.mesh = mesh_label(problem.dim, nr, cfg.finest_level);
        row.root_cells = nr;
        row.finest_level = cfg.finest_level;
        try {
            RunResult res = run_simulation(cfg, progress);
            row.seconds = res.seconds;
            row.grid_points = res.grid_points;
            const double T = cfg.final_time(problem);
            if (problem.reference_at(T)) {
                const ErrorNorms e = error_norms(res.solution, problem, T);
                row.linf = e.linf;
                row.l2 = e.l2;
            }
            out.last_solution = std::move(res.solution);
        } catch (const std::exception& ex) {
            row.status = std::string("error: ") + ex.what();
        }
        out.report.rows.push_back(std::move(row));
    }
    fill_orders(out.report);
    return out;
}

// ---------------------------------------------------------------------------
// CSV

inline const char* kReportHeader = "mesh,nr,nl,linf,linf_order,l2,l2_order,seconds,grid_points,status";

namespace detail {

inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

inline std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline std::optional<double> parse_optional(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
}

}  // namespace detail

inline void write_report_csv(std::ostream& os, const ConvergenceReport& report) {
    os << kReportHeader << '\n';
    for (const auto& r : report.rows) {
        os << detail::csv_safe(r.mesh) << ',' << r.root_cells << ',' << r.finest_level << ','
           << detail::format_optional(r.linf) << ',' << detail::format_optional(r.linf_order) << ','
           << detail::format_optional(r.l2) << ',' << detail::format_optional(r.l2_order) << ','
           << detail::format_real(r.seconds) << ',' << r.grid_points << ',' << detail::csv_safe(r.status) << '\n';
    }
}

inline std::string report_to_csv(const ConvergenceReport& report) {
    std::ostringstream os;
    write_report_csv(os, report);
    return os.str();
}

inline ConvergenceReport parse_report_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kReportHeader) throw Error("report CSV: missing or unexpected header");
    ConvergenceReport report;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 10) throw Error("report CSV: expected 10 fields, got " + std::to_string(f.size()));
        ConvergenceRow r;
        r.mesh = f[0];
        r.root_cells = std::stoi(f[1]);
        r.finest_level = std::stoi(f[2]);
        r.linf = detail::parse_optional(f[3]);
        r.linf_order = detail::parse_optional(f[4]);
        r.l2 = detail::parse_optional(f[5]);
        r.l2_order = detail::parse_optional(f[6]);
        r.seconds = std::stod(f[7]);
        r.grid_points = std::stoull(f[8]);
        r.status = f[9];
        report.rows.push_back(std::move(r));
    }
    return report;
}

inline ConvergenceReport parse_report_csv(const std::string& text) {
    std::istringstream is(text);
    return parse_report_csv(is);
}

}  // namespace sgweno
