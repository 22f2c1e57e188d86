#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "oracles.hpp"
#include "pide/errors.hpp"
#include "pide/harness.hpp"

using namespace pide;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("pide_harness_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PIDE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  CHECK(parse_config("") == reference_preset());
  const RunConfig p = reference_preset();
  CHECK(p.params == ModelParams::reference_preset());
  CHECK(p.kernel == KernelKind{GaussianKernel{100.0}});
  CHECK(p.left == 0.0);
  CHECK(p.right == 1.0);
  CHECK(p.initial.rate == 100.0);
  CHECK(p.initial.center == 0.5);

  const RunConfig c = parse_config("scheme=imex\nn_points=512");
  RunConfig expected = reference_preset();
  expected.scheme = SymbolScheme::Imex;
  expected.n_points = 512;
  CHECK(c == expected);

  const RunConfig s = parse_config(
      "# comment\n[grid]\nn_points = 1024\nleft=-2\nright=2\n[params]\nsigma=0.02\n[kernel]\ntype=periodized_gaussian\n"
      "period=4\n[solver]\nsolver=mg\nsmoother=jacobi\n");
  CHECK(s.n_points == 1024);
  CHECK(s.left == -2.0);
  CHECK(s.params.sigma == 0.02);
  CHECK(std::get<PeriodizedGaussianKernel>(s.kernel).period == 4.0);
  CHECK(s.solver.solver == SolverKind::Mg);
  CHECK(s.solver.mg.smoother == SmootherKind::Jacobi);
}

TEST_CASE("config errors name line and key") {
  auto expect_error = [](const std::string& text, int line, const std::string& key) {
    try {
      (void)parse_config(text);
      FAIL("no ConfigError for: " << text);
    } catch (const ConfigError& e) {
      CHECK(e.line() == line);
      CHECK(e.key() == key);
    }
  };
  expect_error("n_points=100", 1, "n_points");
  expect_error("\nbogus=1", 2, "bogus");
  expect_error("[grid]\nsigma=0.1", 2, "sigma");
  expect_error("dt=abc", 1, "dt");
  expect_error("scheme=crank", 1, "scheme");
  expect_error("[kernel]\ntype=exponential\nomega=3", 3, "omega");
  expect_error("solver=cg", 1, "solver");  // cg with drift under the implicit scheme
  expect_error("[wrong]", 1, "");
  expect_error("sigma=0\nlambda=0", 2, "lambda");
}

TEST_CASE("config round trip") {
  for (const std::string& text : {std::string(""), std::string("scheme=explicit\nn_points=64\nkernel_type=exponential"),
                                  std::string("[kernel]\ntype=periodized_gaussian\nshift_terms=5\n[solver]\nsolver=mg\nsor_omega=1.5")}) {
    RunConfig cfg;
    try {
      cfg = parse_config(text);
    } catch (const ConfigError&) {
      continue;  // the middle text is deliberately checked below
    }
    CHECK(parse_config(serialize(cfg)) == cfg);
  }
  RunConfig odd = reference_preset();
  odd.params.dt = 0.1 + 0.2;
  odd.initial.kind = InitialKind::Exponential;
  odd.solver.tol = 3e-11;
  CHECK(parse_config(serialize(odd)) == odd);
}

TEST_CASE("csv records") {
  CHECK(csv_header() ==
        "run_id,N,scheme,solver,preconditioner,iterations,residual,wall_time_seconds,error_vs_oracle,max_amplification,"
        "stability_bound\n");
  CsvRecord r;
  r.run_id = "x";
  r.n = 8;
  r.scheme = "explicit";
  CHECK(csv_row(r) == "x,8,explicit,,,,,,,,\n");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("solve runs") {
  RunConfig cfg = reference_preset();
  cfg.n_steps = 0;
  const auto zero = run_solve(cfg);
  CHECK(zero.solution == initial_values(cfg, cfg.grid()));

  cfg.n_steps = 3;
  auto a = run_solve(cfg, false, "a");
  auto b = run_solve(cfg, false, "a");
  CHECK(a.converged);
  a.record.wall_time_seconds.reset();
  b.record.wall_time_seconds.reset();
  CHECK(csv_row(a.record) == csv_row(b.record));
  CHECK(a.solution == b.solution);
  CHECK(*a.record.error_vs_oracle < 1e-6);
  CHECK_FALSE(a.record.stability_bound.has_value());

  std::ostringstream sol;
  write_solution(sol, a);
  const auto sol_lines = lines(sol.str());
  CHECK(sol_lines.size() == 513);
  CHECK(sol_lines.front() == "x,u");

  RunConfig mg = reference_preset();
  mg.n_points = 1024;
  mg.solver.solver = SolverKind::Mg;
  const auto m = run_solve(mg);
  CHECK(m.converged);
  CHECK(*m.record.residual <= mg.solver.tol);

  RunConfig starved = reference_preset();
  starved.solver.max_iter = 1;
  starved.solver.tol = 1e-14;
  starved.solver.preconditioner = PreconditionerKind::None;
  const auto f = run_solve(starved);
  CHECK_FALSE(f.converged);
  CHECK_FALSE(f.failure.empty());
}

TEST_CASE("stability table") {
  const auto rows = lines(run_stability_table({1.0, 0.5}, {SymbolScheme::Explicit, SymbolScheme::Imex, SymbolScheme::Implicit}));
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "h,scheme,stability_bound,max_amplification");
  const auto e = fields(rows[1]), m = fields(rows[2]), i = fields(rows[3]);
  CHECK(e[1] == "explicit");
  CHECK(std::stod(e[2]) == doctest::Approx(0.08));
  CHECK(std::stod(m[2]) == doctest::Approx(4.0 / 9.0));
  CHECK(i[2] == "inf");
  CHECK(std::stod(i[3]) <= 1.0);
  for (std::size_t r = 1; r < rows.size(); r += 3) {
    CHECK(std::stod(fields(rows[r + 1])[2]) > std::stod(fields(rows[r])[2]));
    CHECK(std::stod(fields(rows[r])[3]) <= 1.0 + 1e-12);
  }
}

TEST_CASE("benchmark") {
  RunConfig base = reference_preset();
  base.params.mu = 0.0;
  base.solver.mode = ApplyMode::Symmetric;
  BenchOptions opt;
  opt.repeats = 1;
  const std::vector<BenchEntry> entries{{SolverKind::Cg, PreconditionerKind::None},
                                        {SolverKind::Cg, PreconditionerKind::Fsp},
                                        {SolverKind::Mg, PreconditionerKind::None}};
  const auto rows = run_precond_benchmark(base, {256, 512}, entries, opt);
  REQUIRE(rows.size() == 6);
  CHECK(*rows[3].condition / *rows[0].condition == doctest::Approx(4.0).epsilon(0.25));
  CHECK(*rows[1].condition < 3.0);
  CHECK_FALSE(rows[2].condition.has_value());
  CHECK(*rows[2].residual < 0.2);
  const auto csv = lines(bench_csv(rows));
  CHECK(csv.size() == 7);
  CHECK(csv[0] == "N,solver,preconditioner,iterations,condition_estimate,wall_time_seconds,residual,status");

  // A failing entry is recorded and the run continues.
  RunConfig drift = base;
  drift.params.mu = 0.5;
  const auto bad = run_precond_benchmark(drift, {256}, {{SolverKind::Cg, PreconditionerKind::None}, {SolverKind::Bicg, PreconditionerKind::Fsp}}, opt);
  REQUIRE(bad.size() == 2);
  CHECK_FALSE(bad[0].failure.empty());
  CHECK(bad[1].failure.empty());
}

TEST_CASE("convergence study") {
  RunConfig cfg = reference_preset();
  cfg.scheme = SymbolScheme::Explicit;
  cfg.n_points = 64;
  cfg.n_steps = 0;
  const auto zero = run_convergence_study(cfg, 3);
  REQUIRE(zero.rows.size() == 3);
  for (const auto& r : zero.rows) CHECK(r.error == 0.0);

  cfg.n_steps = 10;
  cfg.params.dt = 0.01;
  const auto s = run_convergence_study(cfg, 3);
  CHECK(s.slope >= 0.9);
  CHECK(s.rows[1].h == s.rows[0].h / 2);
  CHECK(s.rows[1].dt == s.rows[0].dt / 4);
  const auto csv = lines(convergence_csv(s));
  CHECK(csv.front() == "h,dt,scheme,error_norm");
  CHECK(csv.back().rfind("slope,,,", 0) == 0);

  cfg.kernel = PeriodizedGaussianKernel{};
  CHECK_THROWS_AS(run_convergence_study(cfg, 3), ConfigError);
}

TEST_CASE("symbol table") {
  RunConfig cfg = reference_preset();
  cfg.n_points = 16;
  cfg.params = ModelParams::unit(0.01);
  const auto rows = lines(symbol_table(cfg));
  REQUIRE(rows.size() == 17);
  CHECK(rows[0] == "m,xi,theta,re_g,im_g,abs_g,q_tilde");
  CHECK(fields(rows[9])[0] == "0");
}

TEST_CASE("command line exit codes") {
  const TempDir dir;
  const auto out = (dir.path / "out.csv").string();
  CHECK(run_cli("solve --preset paper --out " + out) == 0);
  CHECK(fs::exists(out));
  CHECK(run_cli("stability --spacing 1 0.5 --out " + out) == 0);
  CHECK(run_cli("symbol --out " + out) == 0);

  const auto bad = dir.write("bad.cfg", "n_points=100\n");
  CHECK(run_cli("solve --config " + bad.string()) == 2);
  CHECK(run_cli("solve --no-such-flag") == 2);
  const auto starved = dir.write("starved.cfg", "[solver]\npreconditioner=none\nmax_iter=1\ntol=1e-14\n");
  CHECK(run_cli("solve --config " + starved.string() + " --out " + out) == 3);
  const auto periodized = dir.write("per.cfg", "[kernel]\ntype=periodized_gaussian\n");
  CHECK(run_cli("converge --config " + periodized.string() + " --levels 2") == 2);
}
