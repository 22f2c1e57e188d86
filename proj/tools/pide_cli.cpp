#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pide/errors.hpp"
#include "pide/harness.hpp"
#include "pide/solvers.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kConvergenceFailure = 3;
constexpr int kConsistencyFailure = 4;

struct Common {
  std::string config_path;
  std::string preset;
  std::string out_path;
};

void add_common(CLI::App* cmd, Common& c, bool with_config = true) {
  if (with_config) {
    cmd->add_option("--config", c.config_path, "configuration file ([grid] [params] [kernel] [solver])");
    cmd->add_option("--preset", c.preset, "named preset")->check(CLI::IsMember({"paper"}));
  }
  cmd->add_option("--out", c.out_path, "output CSV (default: stdout)");
}

pide::RunConfig load_config(const Common& c) {
  if (c.config_path.empty()) return pide::reference_preset();
  std::ifstream in(c.config_path);
  if (!in) throw pide::ConfigError(0, "", "cannot open config file '" + c.config_path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return pide::parse_config(text.str());
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::vector<pide::BenchEntry> parse_entries(const std::vector<std::string>& specs) {
  std::vector<pide::BenchEntry> entries;
  for (const auto& spec : specs) {
    const auto colon = spec.find(':');
    const std::string solver = spec.substr(0, colon);
    const std::string pre = colon == std::string::npos ? "none" : spec.substr(colon + 1);
    pide::BenchEntry e{};
    if (solver == "cg") e.solver = pide::SolverKind::Cg;
    else if (solver == "bicg") e.solver = pide::SolverKind::Bicg;
    else if (solver == "mg") e.solver = pide::SolverKind::Mg;
    else if (solver == "direct") e.solver = pide::SolverKind::Direct;
    else throw pide::ConfigError(0, "entries", "unknown solver '" + solver + "'");
    if (pre == "none") e.preconditioner = pide::PreconditionerKind::None;
    else if (pre == "wdp") e.preconditioner = pide::PreconditionerKind::Wdp;
    else if (pre == "fsp") e.preconditioner = pide::PreconditionerKind::Fsp;
    else throw pide::ConfigError(0, "entries", "unknown preconditioner '" + pre + "'");
    entries.push_back(e);
  }
  return entries;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and benchmark harness for a periodic jump-diffusion integro-differential equation"};
  app.require_subcommand(1);

  Common solve_opts, stab_opts, bench_opts, conv_opts, sym_opts;
  bool include_setup = false;
  std::string solution_path;

  auto* solve = app.add_subcommand("solve", "time-step the configured scheme and write a CSV record");
  add_common(solve, solve_opts);
  solve->add_option("--solution", solution_path, "x,u solution file (default: <out>.solution.csv)");
  solve->add_flag("--include-setup-time", include_setup, "count preconditioner / hierarchy setup in wall time");

  auto* stability = app.add_subcommand("stability", "stability bounds and amplification at the bound");
  add_common(stability, stab_opts, false);
  std::vector<double> h_values{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  stability->add_option("--spacing", h_values, "grid spacings h");

  auto* bench = app.add_subcommand("precond-bench", "preconditioner and multigrid benchmark on the implicit system");
  add_common(bench, bench_opts);
  std::vector<std::size_t> n_list{256, 512, 1024, 2048};
  std::vector<std::string> entry_specs{"cg:none", "cg:wdp", "cg:fsp", "mg:none"};
  pide::BenchOptions bench_options;
  bool keep_drift = false;
  bench->add_option("--n", n_list, "grid sizes");
  bench->add_option("--entries", entry_specs, "solver:preconditioner pairs");
  bench->add_option("--repeats", bench_options.repeats, "timing repeats (best is kept)");
  bench->add_option("--mg-cycles", bench_options.mg_cycles, "v-cycles per multigrid solve");
  bench->add_option("--mg-sweeps", bench_options.mg_sweeps, "SOR sweeps per multigrid smoothing step");
  bench->add_flag("--include-setup-time", bench_options.include_setup_time, "count setup in wall time");
  bench->add_flag("--keep-drift", keep_drift, "keep mu from the config instead of the symmetric mu = 0 family");

  auto* converge = app.add_subcommand("converge", "errors against the exact solution under refinement");
  add_common(converge, conv_opts);
  int levels = 3;
  std::string refine = "space";
  converge->add_option("--levels", levels, "refinement levels");
  converge->add_option("--refine", refine, "space or time")->check(CLI::IsMember({"space", "time"}));

  auto* sym = app.add_subcommand("symbol", "dump the amplification symbol g(h xi)");
  add_common(sym, sym_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*solve) {
      const auto cfg = load_config(solve_opts);
      const auto run = pide::run_solve(cfg, include_setup);
      emit(solve_opts.out_path, pide::csv_header() + pide::csv_row(run.record));
      std::string sol = solution_path;
      if (sol.empty() && !solve_opts.out_path.empty()) {
        sol = std::filesystem::path(solve_opts.out_path).replace_extension(".solution.csv").string();
      }
      if (!sol.empty()) {
        std::ofstream out(sol);
        if (!out) throw std::runtime_error("cannot write '" + sol + "'");
        pide::write_solution(out, run);
      }
      if (!run.converged) {
        std::cerr << "convergence failure: " << run.failure << '\n';
        return kConvergenceFailure;
      }
    } else if (*stability) {
      emit(stab_opts.out_path,
           pide::run_stability_table(h_values, {pide::SymbolScheme::Explicit, pide::SymbolScheme::Imex,
                                                pide::SymbolScheme::Implicit}));
    } else if (*bench) {
      auto cfg = load_config(bench_opts);
      if (!keep_drift) {
        cfg.params.mu = 0.0;
        cfg.solver.mode = pide::ApplyMode::Symmetric;
      }
      const auto rows = pide::run_precond_benchmark(cfg, n_list, parse_entries(entry_specs), bench_options);
      emit(bench_opts.out_path, pide::bench_csv(rows));
    } else if (*converge) {
      const auto cfg = load_config(conv_opts);
      const auto study = pide::run_convergence_study(
          cfg, levels, refine == "space" ? pide::Refinement::Space : pide::Refinement::Time);
      emit(conv_opts.out_path, pide::convergence_csv(study));
    } else if (*sym) {
      emit(sym_opts.out_path, pide::symbol_table(load_config(sym_opts)));
    }
  } catch (const pide::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  } catch (const pide::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const pide::ConvergenceFailure& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kConvergenceFailure;
  } catch (const pide::NumericalConsistencyError& e) {
    std::cerr << "numerical consistency failure: " << e.what() << '\n';
    return kConsistencyFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
