#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <memory>
#include <sstream>

#include "pide/errors.hpp"
#include "pide/harness.hpp"
#include "pide/solvers.hpp"

namespace pide {

namespace {

using Clock = std::chrono::steady_clock;
using Vec = std::vector<double>;
using LinearSolve = std::function<std::pair<Vec, SolveReport>(std::span<const double>, std::span<const double>)>;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename T>
std::string field(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_same_v<T, double>) {
    return format_number(*v);
  } else {
    return std::to_string(*v);
  }
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// Builds the per-step linear solver once, so setup cost is paid (and timed) once.
LinearSolve make_linear_solve(const SystemOperator& op, const SolverChoice& choice) {
  switch (choice.solver) {
    case SolverKind::Direct:
      return [&op](std::span<const double> rhs, std::span<const double>) {
        const auto start = Clock::now();
        auto x = direct_solve(op, rhs);
        SolveReport report;
        report.wall_time = seconds_since(start);
        report.iterations = 1;
        Vec ax(op.size());
        op.apply(x, ax);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) {
          num += (rhs[i] - ax[i]) * (rhs[i] - ax[i]);
          den += rhs[i] * rhs[i];
        }
        report.residual_history = {1.0, den > 0.0 ? std::sqrt(num / den) : std::sqrt(num)};
        report.converged = true;
        return std::pair{std::move(x), report};
      };
    case SolverKind::Cg:
    case SolverKind::Bicg: {
      auto pre = std::make_shared<Preconditioner>(make_preconditioner(op, choice));
      const bool use_cg = choice.solver == SolverKind::Cg;
      return [&op, pre, use_cg, choice](std::span<const double> rhs, std::span<const double>) {
        return use_cg ? cg(op, rhs, *pre, choice.tol, choice.max_iter) : bicg(op, rhs, *pre, choice.tol, choice.max_iter);
      };
    }
    case SolverKind::Mg: {
      auto hierarchy = std::make_shared<MgHierarchy>(build_hierarchy(op, choice.mg));
      return [hierarchy, choice](std::span<const double> rhs, std::span<const double> guess) {
        return mg_solve(*hierarchy, rhs, guess, choice.tol, choice.max_iter);
      };
    }
  }
  throw InvalidArgument("unknown solver");
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string csv_header() {
  return "run_id,N,scheme,solver,preconditioner,iterations,residual,wall_time_seconds,error_vs_oracle,"
         "max_amplification,stability_bound\n";
}

std::string csv_row(const CsvRecord& rec) {
  std::ostringstream out;
  out << sanitize(rec.run_id) << ',' << rec.n << ',' << rec.scheme << ',' << rec.solver << ',' << rec.preconditioner
      << ',' << field(rec.iterations) << ',' << field(rec.residual) << ',' << field(rec.wall_time_seconds) << ','
      << field(rec.error_vs_oracle) << ',' << field(rec.max_amplification) << ',' << field(rec.stability_bound)
      << '\n';
  return out.str();
}

SolveRun run_solve(const RunConfig& cfg, bool include_setup_time, const std::string& run_id) {
  validate(cfg);
  const Grid grid = cfg.grid();
  const Kernel kernel = make_kernel(cfg.kernel, grid);
  const AssemblyOptions options{cfg.one_sided_advection};
  const Vec u0 = initial_values(cfg, grid);

  SolveRun run;
  run.nodes = grid.nodes();
  auto& rec = run.record;
  rec.run_id = run_id;
  rec.n = grid.n_points();
  rec.scheme = symbol_scheme_name(cfg.scheme);
  if (cfg.scheme != SymbolScheme::Explicit) {
    rec.solver = solver_name(cfg.solver.solver);
    rec.preconditioner = cfg.solver.solver == SolverKind::Cg || cfg.solver.solver == SolverKind::Bicg
                             ? preconditioner_name(cfg.solver.preconditioner)
                             : "none";
  }
  const auto sym = symbol(cfg.scheme, grid, cfg.params, kernel, {true, cfg.one_sided_advection});
  rec.max_amplification = max_amplification(sym);
  if (cfg.params.is_unit()) rec.stability_bound = stability_bound(cfg.scheme, grid.spacing());

  Vec u = u0;
  double wall = 0.0;
  if (cfg.scheme == SymbolScheme::Explicit) {
    const SystemOperator e = assemble(grid, cfg.params, kernel, Scheme::Explicit, options);
    const auto start = Clock::now();
    for (int step = 0; step < cfg.n_steps; ++step) u = step_explicit(e, u);
    wall = seconds_since(start);
  } else {
    const bool imex = cfg.scheme == SymbolScheme::Imex;
    const SystemOperator a =
        assemble(grid, cfg.params, kernel, imex ? Scheme::ImexImplicitPart : Scheme::Implicit, options);
    std::optional<SystemOperator> e;
    if (imex) e = assemble(grid, cfg.params, kernel, Scheme::ImexExplicitPart, options);

    const auto setup_start = Clock::now();
    const LinearSolve solve = make_linear_solve(a, cfg.solver);
    const double setup = seconds_since(setup_start);
    if (include_setup_time) wall += setup;

    int iterations = 0;
    double worst = 0.0;
    const auto start = Clock::now();
    try {
      for (int step = 0; step < cfg.n_steps; ++step) {
        const Vec rhs = imex ? pide::apply(*e, u) : u;
        auto [next, report] = solve(rhs, u);
        iterations += report.iterations;
        worst = std::max(worst, report.final_residual());
        run.last_report = std::move(report);
        u = std::move(next);
      }
    } catch (const ConvergenceFailure& failure) {
      run.converged = false;
      run.failure = failure.what();
      run.last_report = failure.report();
      iterations += failure.report().iterations;
      worst = std::max(worst, failure.report().final_residual());
    }
    wall += seconds_since(start);
    if (cfg.n_steps > 0) {
      rec.iterations = iterations;
      rec.residual = worst;
    }
  }
  rec.wall_time_seconds = wall;
  if (run.converged) rec.error_vs_oracle = error_norm(u, fourier_propagate(u0, sym, cfg.n_steps), grid.spacing());
  run.solution = std::move(u);
  return run;
}

void write_solution(std::ostream& out, const SolveRun& run) {
  out << "x,u\n";
  for (std::size_t i = 0; i < run.nodes.size(); ++i) {
    out << format_number(run.nodes[i]) << ',' << format_number(run.solution[i]) << '\n';
  }
}

std::string run_stability_table(const std::vector<double>& h_values, const std::vector<SymbolScheme>& schemes) {
  std::ostringstream out;
  out << "h,scheme,stability_bound,max_amplification\n";
  constexpr std::size_t n = 256;
  for (double h : h_values) {
    if (!(h > 0.0)) throw InvalidArgument("stability table: h must be positive");
    const double half = 0.5 * static_cast<double>(n) * h;
    const Grid grid = make_grid(n, -half, half);
    const Kernel kernel = make_kernel(GaussianKernel{1.0}, grid);
    for (SymbolScheme scheme : schemes) {
      const double bound = stability_bound(scheme, h);
      const double dt = std::isfinite(bound) ? bound : 10.0;
      const auto sym = symbol(scheme, grid, ModelParams::unit(dt), kernel);
      out << format_number(h) << ',' << symbol_scheme_name(scheme) << ',' << format_number(bound) << ','
          << format_number(max_amplification(sym)) << '\n';
    }
  }
  return out.str();
}

std::vector<BenchRow> run_precond_benchmark(const RunConfig& base, const std::vector<std::size_t>& n_list,
                                            const std::vector<BenchEntry>& entries, const BenchOptions& options) {
  std::vector<BenchRow> rows;
  const int repeats = std::max(1, options.repeats);
  for (std::size_t n : n_list) {
    RunConfig cfg = base;
    cfg.n_points = n;
    std::optional<Grid> grid;
    std::optional<SystemOperator> op;
    Vec rhs;
    std::string setup_failure;
    try {
      grid = cfg.grid();
      const Kernel kernel = make_kernel(cfg.kernel, *grid);
      op = assemble(*grid, cfg.params, kernel, Scheme::Implicit, {cfg.one_sided_advection});
      rhs = initial_values(cfg, *grid);
    } catch (const std::exception& ex) {
      setup_failure = ex.what();
    }
    for (const BenchEntry& entry : entries) {
      BenchRow row;
      row.n = n;
      row.entry = entry;
      if (!setup_failure.empty()) {
        row.failure = setup_failure;
        rows.push_back(row);
        continue;
      }
      try {
        SolverChoice choice = cfg.solver;
        choice.solver = entry.solver;
        choice.preconditioner = entry.preconditioner;
        if (entry.solver == SolverKind::Cg) choice.mode = ApplyMode::Symmetric;
        choice.mg.pre_smooth_count = options.mg_sweeps;
        double best = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < repeats; ++rep) {
          const auto start = Clock::now();
          if (entry.solver == SolverKind::Mg) {
            const MgHierarchy h = build_hierarchy(*op, choice.mg);
            const double setup = seconds_since(start);
            const auto solve_start = Clock::now();
            Vec u(n, 0.0);
            SolveReport last;
            for (int c = 0; c < options.mg_cycles; ++c) {
              auto [next, report] = mg_vcycle(h, rhs, u);
              u = std::move(next);
              last = std::move(report);
            }
            const double t = seconds_since(solve_start) + (options.include_setup_time ? setup : 0.0);
            best = std::min(best, t);
            row.iterations = options.mg_cycles;
            row.residual = last.final_residual();
          } else if (entry.solver == SolverKind::Direct) {
            const auto x = direct_solve(*op, rhs);
            best = std::min(best, seconds_since(start));
            Vec ax(n);
            op->apply(x, ax);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
              num += (rhs[i] - ax[i]) * (rhs[i] - ax[i]);
              den += rhs[i] * rhs[i];
            }
            row.iterations = 1;
            row.residual = std::sqrt(num / den);
          } else {
            const Preconditioner pre = make_preconditioner(*op, choice);
            const double setup = seconds_since(start);
            const auto [x, report] = entry.solver == SolverKind::Cg
                                         ? cg(*op, rhs, pre, choice.tol, choice.max_iter)
                                         : bicg(*op, rhs, pre, choice.tol, choice.max_iter);
            best = std::min(best, report.wall_time + (options.include_setup_time ? setup : 0.0));
            row.iterations = report.iterations;
            row.residual = report.final_residual();
          }
        }
        row.wall_time = best;
        if (options.condition && entry.solver != SolverKind::Mg && op->is_symmetric()) {
          if (entry.preconditioner == PreconditionerKind::None || entry.solver == SolverKind::Direct) {
            row.condition = condition_estimate(*op);
          } else {
            const Preconditioner pre = make_preconditioner(*op, choice);
            row.condition = condition_estimate(*op, &pre);
          }
        }
      } catch (const std::exception& ex) {
        row.failure = ex.what();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "N,solver,preconditioner,iterations,condition_estimate,wall_time_seconds,residual,status\n";
  for (const auto& row : rows) {
    out << row.n << ',' << solver_name(row.entry.solver) << ',' << preconditioner_name(row.entry.preconditioner) << ','
        << field(row.iterations) << ',' << field(row.condition) << ',' << field(row.wall_time) << ','
        << field(row.residual) << ',' << (row.failure.empty() ? "ok" : sanitize(row.failure)) << '\n';
  }
  return out.str();
}

ConvergenceStudy run_convergence_study(const RunConfig& cfg, int refinement_levels, Refinement refinement) {
  if (refinement_levels < 1) throw InvalidArgument("convergence study: need at least one level");
  validate(cfg);
  std::optional<ContinuousSymbol> csym;
  try {
    csym.emplace(cfg.kernel, cfg.params);
  } catch (const UnsupportedKernel& ex) {
    throw ConfigError(0, "type", ex.what());
  }
  const double final_time = cfg.n_steps * cfg.params.dt;

  ConvergenceStudy study;
  std::vector<double> steps, errors;
  for (int level = 0; level < refinement_levels; ++level) {
    RunConfig c = cfg;
    const int factor = refinement == Refinement::Space ? 1 << (2 * level) : 1 << level;
    if (refinement == Refinement::Space) c.n_points = cfg.n_points << level;
    c.params.dt = cfg.params.dt / factor;
    c.n_steps = cfg.n_steps * factor;
    const SolveRun run = run_solve(c, false, "converge");
    if (!run.converged) throw ConvergenceFailure(run.failure, run.last_report);
    const Grid grid = c.grid();
    const Vec exact = exact_solution(initial_values(c, grid), final_time, *csym, grid);
    ConvergenceRow row{grid.spacing(), c.params.dt, symbol_scheme_name(c.scheme),
                       error_norm(run.solution, exact, grid.spacing())};
    steps.push_back(refinement == Refinement::Space ? row.h : row.dt);
    errors.push_back(row.error);
    study.rows.push_back(row);
  }
  study.slope = refinement_levels > 1 ? fit_slope(steps, errors) : std::numeric_limits<double>::quiet_NaN();
  return study;
}

std::string convergence_csv(const ConvergenceStudy& study) {
  std::ostringstream out;
  out << "h,dt,scheme,error_norm\n";
  for (const auto& row : study.rows) {
    out << format_number(row.h) << ',' << format_number(row.dt) << ',' << row.scheme << ','
        << format_number(row.error) << '\n';
  }
  out << "slope,,," << format_number(study.slope) << '\n';
  return out.str();
}

std::string symbol_table(const RunConfig& cfg) {
  validate(cfg);
  const Grid grid = cfg.grid();
  const Kernel kernel = make_kernel(cfg.kernel, grid);
  const auto sym = symbol(cfg.scheme, grid, cfg.params, kernel, {true, cfg.one_sided_advection});
  std::ostringstream out;
  out << "m,xi,theta,re_g,im_g,abs_g,q_tilde\n";
  for (std::size_t i = 0; i < sym.size(); ++i) {
    const double xi = sym.xi(i);
    out << static_cast<long>(i) - static_cast<long>(sym.size() / 2) << ',' << format_number(xi) << ','
        << format_number(xi * grid.spacing()) << ',' << format_number(sym.values[i].real()) << ','
        << format_number(sym.values[i].imag()) << ',' << format_number(std::abs(sym.values[i])) << ','
        << format_number(sym.q_tilde[i]) << '\n';
  }
  return out.str();
}

}  // namespace pide
