#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pide/errors.hpp"
#include "pide/harness.hpp"

namespace pide {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& v, int line, const std::string& key) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || v.empty()) throw ConfigError(line, key, "'" + v + "' is not a number");
  return out;
}

long parse_int(const std::string& v, int line, const std::string& key) {
  long out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || v.empty()) throw ConfigError(line, key, "'" + v + "' is not an integer");
  return out;
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(line, key, "'" + v + "' is not a boolean");
}

template <typename E>
E parse_enum(const std::string& v, const std::map<std::string, E>& names, int line, const std::string& key) {
  const auto it = names.find(v);
  if (it != names.end()) return it->second;
  std::string allowed;
  for (const auto& [name, value] : names) allowed += (allowed.empty() ? "" : ", ") + name;
  throw ConfigError(line, key, "'" + v + "' is not one of: " + allowed);
}

template <typename E>
std::string enum_name(E value, const std::map<std::string, E>& names) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "unknown";
}

const std::map<std::string, SymbolScheme> kSchemes = {
    {"implicit", SymbolScheme::Implicit}, {"explicit", SymbolScheme::Explicit}, {"imex", SymbolScheme::Imex}};
const std::map<std::string, SolverKind> kSolvers = {
    {"direct", SolverKind::Direct}, {"cg", SolverKind::Cg}, {"bicg", SolverKind::Bicg}, {"mg", SolverKind::Mg}};
const std::map<std::string, PreconditionerKind> kPreconditioners = {
    {"none", PreconditionerKind::None}, {"wdp", PreconditionerKind::Wdp}, {"fsp", PreconditionerKind::Fsp}};
const std::map<std::string, ApplyMode> kModes = {
    {"symmetric", ApplyMode::Symmetric}, {"left", ApplyMode::Left}, {"right", ApplyMode::Right}};
const std::map<std::string, SmootherKind> kSmoothers = {{"jacobi", SmootherKind::Jacobi}, {"sor", SmootherKind::Sor}};
const std::map<std::string, InitialKind> kInitials = {{"gaussian_bump", InitialKind::GaussianBump},
                                                      {"exponential", InitialKind::Exponential},
                                                      {"custom", InitialKind::Custom}};

// Kernel keys are collected first and resolved once the type is known.
struct KernelDraft {
  std::string type = "gaussian";
  std::optional<double> omega;
  std::optional<double> period;
  std::optional<long> shift_terms;
};

struct Draft {
  RunConfig cfg = reference_preset();
  KernelDraft kernel;
  bool mode_set = false;
  std::map<std::string, int> lines;
};

using Setter = std::function<void(Draft&, const std::string&, int, const std::string&)>;

struct KeySpec {
  std::string section;
  Setter set;
};

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = {
      {"n_points",
       {"grid",
        [](Draft& d, const std::string& v, int l, const std::string& k) {
          const long n = parse_int(v, l, k);
          if (n <= 0) throw ConfigError(l, k, "must be positive");
          d.cfg.n_points = static_cast<std::size_t>(n);
        }}},
      {"left", {"grid", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.left = parse_double(v, l, k); }}},
      {"right", {"grid", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.right = parse_double(v, l, k); }}},
      {"sigma", {"params", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.params.sigma = parse_double(v, l, k); }}},
      {"mu", {"params", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.params.mu = parse_double(v, l, k); }}},
      {"r", {"params", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.params.r = parse_double(v, l, k); }}},
      {"lambda", {"params", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.params.lambda = parse_double(v, l, k); }}},
      {"dt", {"params", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.params.dt = parse_double(v, l, k); }}},
      {"type",
       {"kernel",
        [](Draft& d, const std::string& v, int l, const std::string& k) {
          if (v != "gaussian" && v != "exponential" && v != "periodized_gaussian") {
            throw ConfigError(l, k, "'" + v + "' is not one of: exponential, gaussian, periodized_gaussian");
          }
          d.kernel.type = v;
        }}},
      {"omega", {"kernel", [](Draft& d, const std::string& v, int l, const std::string& k) { d.kernel.omega = parse_double(v, l, k); }}},
      {"period", {"kernel", [](Draft& d, const std::string& v, int l, const std::string& k) { d.kernel.period = parse_double(v, l, k); }}},
      {"shift_terms", {"kernel", [](Draft& d, const std::string& v, int l, const std::string& k) { d.kernel.shift_terms = parse_int(v, l, k); }}},
      {"scheme", {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.scheme = parse_enum(v, kSchemes, l, k); }}},
      {"solver", {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.solver.solver = parse_enum(v, kSolvers, l, k); }}},
      {"preconditioner",
       {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) {
          d.cfg.solver.preconditioner = parse_enum(v, kPreconditioners, l, k);
        }}},
      {"mode",
       {"solver",
        [](Draft& d, const std::string& v, int l, const std::string& k) {
          d.cfg.solver.mode = parse_enum(v, kModes, l, k);
          d.mode_set = true;
        }}},
      {"tol", {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.solver.tol = parse_double(v, l, k); }}},
      {"max_iter",
       {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) {
          d.cfg.solver.max_iter = static_cast<int>(parse_int(v, l, k));
        }}},
      {"wavelet_order",
       {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) {
          d.cfg.solver.wavelet_order = static_cast<int>(parse_int(v, l, k));
        }}},
      {"wavelet_levels",
       {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) {
          d.cfg.solver.wavelet_levels = static_cast<int>(parse_int(v, l, k));
        }}},
      {"mg_levels",
       {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) {
          d.cfg.solver.mg.n_levels = static_cast<int>(parse_int(v, l, k));
        }}},
      {"smoother",
       {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) {
          d.cfg.solver.mg.smoother = parse_enum(v, kSmoothers, l, k);
        }}},
      {"sor_omega", {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.solver.mg.sor_omega = parse_double(v, l, k); }}},
      {"pre_smooth_count",
       {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) {
          d.cfg.solver.mg.pre_smooth_count = static_cast<int>(parse_int(v, l, k));
        }}},
      {"n_steps", {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.n_steps = static_cast<int>(parse_int(v, l, k)); }}},
      {"initial_condition",
       {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) {
          d.cfg.initial.kind = parse_enum(v, kInitials, l, k);
        }}},
      {"ic_center", {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.initial.center = parse_double(v, l, k); }}},
      {"ic_rate", {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) { d.cfg.initial.rate = parse_double(v, l, k); }}},
      {"ic_file", {"solver", [](Draft& d, const std::string& v, int, const std::string&) { d.cfg.initial.path = v; }}},
      {"one_sided_advection",
       {"solver", [](Draft& d, const std::string& v, int l, const std::string& k) {
          d.cfg.one_sided_advection = parse_bool(v, l, k);
        }}},
  };
  return table;
}

int line_of(const Draft& d, const std::string& key) {
  const auto it = d.lines.find(key);
  return it == d.lines.end() ? 0 : it->second;
}

void resolve_kernel(Draft& d) {
  const auto& k = d.kernel;
  auto reject = [&](const char* key, bool present) {
    if (present) throw ConfigError(line_of(d, key), key, "not a parameter of kernel type '" + k.type + "'");
  };
  if (k.type == "gaussian") {
    reject("period", k.period.has_value());
    reject("shift_terms", k.shift_terms.has_value());
    d.cfg.kernel = GaussianKernel{k.omega.value_or(100.0)};
  } else if (k.type == "exponential") {
    reject("omega", k.omega.has_value());
    reject("period", k.period.has_value());
    reject("shift_terms", k.shift_terms.has_value());
    d.cfg.kernel = ExponentialKernel{};
  } else {
    PeriodizedGaussianKernel p;
    p.omega = k.omega.value_or(100.0);
    p.period = k.period.value_or(d.cfg.right - d.cfg.left);
    p.shift_terms = static_cast<int>(k.shift_terms.value_or(3));
    d.cfg.kernel = p;
  }
}

void validate_draft(const RunConfig& cfg, const std::function<int(const std::string&)>& line) {
  auto require = [&](bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(line(key), key, what);
  };
  require(is_power_of_two(cfg.n_points) && cfg.n_points >= 8, "n_points",
          std::to_string(cfg.n_points) + " is not a power of two >= 8");
  require(std::isfinite(cfg.left), "left", "must be finite");
  require(std::isfinite(cfg.right) && cfg.right > cfg.left, "right", "must exceed left");

  const auto& p = cfg.params;
  require(p.sigma >= 0.0, "sigma", "must be non-negative");
  require(std::isfinite(p.mu), "mu", "must be finite");
  require(p.r >= 0.0, "r", "must be non-negative");
  require(p.lambda >= 0.0, "lambda", "must be non-negative");
  require(p.sigma != 0.0 || p.lambda != 0.0, "lambda", "sigma and lambda cannot both vanish");
  require(p.dt > 0.0, "dt", "must be positive");

  if (const auto* g = std::get_if<GaussianKernel>(&cfg.kernel)) require(g->omega > 0.0, "omega", "must be positive");
  if (const auto* g = std::get_if<PeriodizedGaussianKernel>(&cfg.kernel)) {
    require(g->omega > 0.0, "omega", "must be positive");
    require(g->shift_terms >= 1, "shift_terms", "must be at least 1");
    require(std::abs(g->period - (cfg.right - cfg.left)) <= 1e-12 * std::abs(g->period), "period",
            "must equal the grid length");
  }

  const auto& s = cfg.solver;
  require(s.tol > 0.0, "tol", "must be positive");
  require(s.max_iter >= 1, "max_iter", "must be at least 1");
  require(s.wavelet_order >= 2 && s.wavelet_order <= 12 && s.wavelet_order % 2 == 0, "wavelet_order",
          "must be an even number in [2, 12]");
  require(s.wavelet_levels >= 0, "wavelet_levels", "must be non-negative");
  require(s.mg.n_levels >= 0, "mg_levels", "must be non-negative");
  require(s.mg.sor_omega > 0.0 && s.mg.sor_omega < 2.0, "sor_omega", "must lie in (0, 2)");
  require(s.mg.pre_smooth_count >= 1, "pre_smooth_count", "must be at least 1");
  require(cfg.n_steps >= 0, "n_steps", "must be non-negative");
  require(!(s.solver == SolverKind::Direct && cfg.n_points > 1024), "solver", "direct solves are limited to N <= 1024");
  require(!(s.solver == SolverKind::Cg && cfg.scheme == SymbolScheme::Implicit && p.mu != 0.0), "solver",
          "cg needs a symmetric system (mu = 0); use bicg");

  if (cfg.initial.kind != InitialKind::Custom) require(cfg.initial.rate > 0.0, "ic_rate", "must be positive");
  if (cfg.initial.kind == InitialKind::Custom) require(!cfg.initial.path.empty(), "ic_file", "custom initial data needs a file");
}

}  // namespace

RunConfig reference_preset() { return RunConfig{}; }

RunConfig parse_config(const std::string& text) {
  Draft d;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(line, "", "malformed section header '" + body + "'");
      section = trim(body.substr(1, body.size() - 2));
      if (section != "grid" && section != "params" && section != "kernel" && section != "solver") {
        throw ConfigError(line, "", "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line, body, "expected key=value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto& table = key_table();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(line, key, "unknown key");
    if (!section.empty() && it->second.section != section) {
      throw ConfigError(line, key, "belongs in [" + it->second.section + "], not [" + section + "]");
    }
    it->second.set(d, value, line, key);
    d.lines[key] = line;
  }
  resolve_kernel(d);
  if (!d.mode_set) d.cfg.solver.mode = d.cfg.solver.solver == SolverKind::Bicg ? ApplyMode::Left : ApplyMode::Symmetric;
  validate_draft(d.cfg, [&](const std::string& key) { return line_of(d, key); });
  return d.cfg;
}

void validate(const RunConfig& cfg) {
  validate_draft(cfg, [](const std::string&) { return 0; });
}

std::string serialize(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[grid]\n"
      << "n_points=" << cfg.n_points << "\n"
      << "left=" << format_number(cfg.left) << "\n"
      << "right=" << format_number(cfg.right) << "\n\n";
  out << "[params]\n"
      << "sigma=" << format_number(cfg.params.sigma) << "\n"
      << "mu=" << format_number(cfg.params.mu) << "\n"
      << "r=" << format_number(cfg.params.r) << "\n"
      << "lambda=" << format_number(cfg.params.lambda) << "\n"
      << "dt=" << format_number(cfg.params.dt) << "\n\n";
  out << "[kernel]\n";
  if (const auto* g = std::get_if<GaussianKernel>(&cfg.kernel)) {
    out << "type=gaussian\nomega=" << format_number(g->omega) << "\n";
  } else if (std::holds_alternative<ExponentialKernel>(cfg.kernel)) {
    out << "type=exponential\n";
  } else {
    const auto& p = std::get<PeriodizedGaussianKernel>(cfg.kernel);
    out << "type=periodized_gaussian\nomega=" << format_number(p.omega) << "\nperiod=" << format_number(p.period)
        << "\nshift_terms=" << p.shift_terms << "\n";
  }
  const auto& s = cfg.solver;
  out << "\n[solver]\n"
      << "scheme=" << enum_name(cfg.scheme, kSchemes) << "\n"
      << "solver=" << enum_name(s.solver, kSolvers) << "\n"
      << "preconditioner=" << enum_name(s.preconditioner, kPreconditioners) << "\n"
      << "mode=" << enum_name(s.mode, kModes) << "\n"
      << "tol=" << format_number(s.tol) << "\n"
      << "max_iter=" << s.max_iter << "\n"
      << "wavelet_order=" << s.wavelet_order << "\n"
      << "wavelet_levels=" << s.wavelet_levels << "\n"
      << "mg_levels=" << s.mg.n_levels << "\n"
      << "smoother=" << enum_name(s.mg.smoother, kSmoothers) << "\n"
      << "sor_omega=" << format_number(s.mg.sor_omega) << "\n"
      << "pre_smooth_count=" << s.mg.pre_smooth_count << "\n"
      << "n_steps=" << cfg.n_steps << "\n"
      << "initial_condition=" << enum_name(cfg.initial.kind, kInitials) << "\n"
      << "ic_center=" << format_number(cfg.initial.center) << "\n"
      << "ic_rate=" << format_number(cfg.initial.rate) << "\n";
  if (!cfg.initial.path.empty()) out << "ic_file=" << cfg.initial.path << "\n";
  out << "one_sided_advection=" << (cfg.one_sided_advection ? "true" : "false") << "\n";
  return out.str();
}

std::vector<double> initial_values(const RunConfig& cfg, const Grid& grid) {
  const std::size_t n = grid.n_points();
  std::vector<double> u(n);
  switch (cfg.initial.kind) {
    case InitialKind::GaussianBump:
      for (std::size_t j = 0; j < n; ++j) {
        const double d = grid.node(j) - cfg.initial.center;
        u[j] = std::exp(-cfg.initial.rate * d * d);
      }
      return u;
    case InitialKind::Exponential: {
      // Same length scale 1/sqrt(rate) as the Gaussian bump.
      const double inv_len = std::sqrt(cfg.initial.rate);
      for (std::size_t j = 0; j < n; ++j) u[j] = std::exp(-inv_len * std::abs(grid.node(j) - cfg.initial.center));
      return u;
    }
    case InitialKind::Custom: {
      std::ifstream file(cfg.initial.path);
      if (!file) throw ConfigError(0, "ic_file", "cannot open '" + cfg.initial.path + "'");
      u.clear();
      std::string raw;
      int line = 0;
      while (std::getline(file, raw)) {
        ++line;
        const std::string body = trim(raw);
        if (body.empty() || body.front() == '#' || body.front() == 'x') continue;
        const auto comma = body.rfind(',');
        u.push_back(parse_double(trim(comma == std::string::npos ? body : body.substr(comma + 1)), line, "ic_file"));
      }
      if (u.size() != n) {
        throw ConfigError(0, "ic_file", "holds " + std::to_string(u.size()) + " values, grid has " + std::to_string(n));
      }
      return u;
    }
  }
  return u;
}

}  // namespace pide
