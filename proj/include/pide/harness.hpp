#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pide/grid_kernel.hpp"
#include "pide/operator.hpp"
#include "pide/solvers.hpp"
#include "pide/spectral.hpp"

namespace pide {

enum class InitialKind { GaussianBump, Exponential, Custom };

/// GaussianBump: exp(-rate (x - center)^2). Exponential: exp(-sqrt(rate) |x - center|).
struct InitialCondition {
  InitialKind kind = InitialKind::GaussianBump;
  double center = 0.5;
  double rate = 100.0;
  std::string path;  // Custom: one value per line, or "x,u" lines
  bool operator==(const InitialCondition&) const = default;
};

struct RunConfig {
  std::size_t n_points = 512;
  double left = 0.0;
  double right = 1.0;
  ModelParams params = ModelParams::reference_preset();
  KernelKind kernel = GaussianKernel{100.0};
  SymbolScheme scheme = SymbolScheme::Implicit;
  SolverChoice solver{SolverKind::Bicg, PreconditionerKind::Fsp, ApplyMode::Left, 1e-8, 10000, 12, 0,
                      MgOptions{0, SmootherKind::Sor, 1.2, 2}};
  int n_steps = 1;
  InitialCondition initial;
  bool one_sided_advection = false;

  Grid grid() const { return make_grid(n_points, left, right); }
  bool operator==(const RunConfig&) const = default;
};

/// The default profile (`--preset paper`): sigma = mu = r = 0.01, lambda = 0.1, dt = 0.01,
/// Gaussian kernel omega = 100, u0 = exp(-100 (x - 0.5)^2) on [0, 1].
/// Solves default to BiCG with left Fourier preconditioning and, for
/// multigrid, two SOR sweeps per smoothing step.
RunConfig reference_preset();

/// Sections [grid] [params] [kernel] [solver] with key=value lines; keys
/// before the first header are looked up by name. '#' starts a comment.
/// Throws ConfigError naming the line and key.
RunConfig parse_config(const std::string& text);
std::string serialize(const RunConfig& cfg);

/// Checks cross-field invariants. Throws ConfigError.
void validate(const RunConfig& cfg);

std::vector<double> initial_values(const RunConfig& cfg, const Grid& grid);

/// One CSV row; unset fields are written empty.
struct CsvRecord {
  std::string run_id;
  std::size_t n = 0;
  std::string scheme;
  std::string solver;
  std::string preconditioner;
  std::optional<int> iterations;
  std::optional<double> residual;
  std::optional<double> wall_time_seconds;
  std::optional<double> error_vs_oracle;
  std::optional<double> max_amplification;
  std::optional<double> stability_bound;
};

std::string csv_header();
std::string csv_row(const CsvRecord& rec);
/// Shortest round-trip decimal form; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double v);

struct SolveRun {
  CsvRecord record;
  std::vector<double> nodes;
  std::vector<double> solution;
  bool converged = true;
  std::string failure;
  SolveReport last_report;  // of the final (or failing) linear solve
};

/// Runs n_steps of the configured scheme. Assembly and, unless
/// include_setup_time, preconditioner / hierarchy construction are outside
/// the timed region. A solver convergence failure stops the run and is
/// reported through `converged` and `failure` with the partial record.
SolveRun run_solve(const RunConfig& cfg, bool include_setup_time = false, const std::string& run_id = "solve");

/// Writes "x,u" rows.
void write_solution(std::ostream& out, const SolveRun& run);

/// Rows h,scheme,stability_bound,max_amplification with unit parameters,
/// dt at the bound (dt = 10 for implicit) and a Gaussian omega = 1 kernel on 256 points.
std::string run_stability_table(const std::vector<double>& h_values, const std::vector<SymbolScheme>& schemes);

struct BenchEntry {
  SolverKind solver;
  PreconditionerKind preconditioner;
};

struct BenchRow {
  std::size_t n = 0;
  BenchEntry entry;
  std::optional<int> iterations;
  std::optional<double> condition;
  std::optional<double> wall_time;
  std::optional<double> residual;
  std::string failure;
};

struct BenchOptions {
  bool include_setup_time = false;
  int repeats = 3;        // wall time is the best of these
  int mg_cycles = 1;      // v-cycles per MG solve
  int mg_sweeps = 1;      // SOR sweeps per smoothing step in the benchmark hierarchy
  bool condition = true;  // also estimate condition numbers
};

/// Solves the implicit system with rhs = u0 for every N and entry. Failures
/// are recorded per row and the run continues.
std::vector<BenchRow> run_precond_benchmark(const RunConfig& base, const std::vector<std::size_t>& n_list,
                                            const std::vector<BenchEntry>& entries, const BenchOptions& options = {});
std::string bench_csv(const std::vector<BenchRow>& rows);

enum class Refinement { Space, Time };

struct ConvergenceRow {
  double h = 0.0;
  double dt = 0.0;
  std::string scheme;
  double error = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double slope = 0.0;  // least-squares d log(error) / d log(h or dt)
};

/// Errors against exact_solution at T = n_steps * dt. Space: N doubles and
/// dt shrinks 4x per level. Time: dt halves per level on the fixed grid.
/// Throws ConfigError for kernels without a closed-form transform.
ConvergenceStudy run_convergence_study(const RunConfig& cfg, int refinement_levels,
                                       Refinement refinement = Refinement::Space);
std::string convergence_csv(const ConvergenceStudy& study);

/// Rows m,xi,theta,re_g,im_g,abs_g,q_tilde.
std::string symbol_table(const RunConfig& cfg);

}  // namespace pide
