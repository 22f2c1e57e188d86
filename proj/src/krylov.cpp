#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "pide/errors.hpp"
#include "pide/solvers.hpp"

namespace pide {

namespace {

using Clock = std::chrono::steady_clock;
using Map = std::function<void(std::span<const double>, std::span<double>)>;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_rhs(const SystemOperator& op, std::span<const double> rhs, const Preconditioner& pre, const char* who) {
  if (rhs.size() != op.size()) throw InvalidArgument(std::string(who) + ": rhs length does not match operator");
  if (pre.size() != op.size()) throw InvalidArgument(std::string(who) + ": preconditioner size does not match");
}

// M^{-1} r = F* S F r. CG on D A D with D = M^{-1/2} is PCG with this map.
Map inverse_map(const Preconditioner& pre) {
  if (pre.kind() == PreconditionerKind::None) {
    return [](std::span<const double> in, std::span<double> out) { std::copy(in.begin(), in.end(), out.begin()); };
  }
  return [&pre](std::span<const double> in, std::span<double> out) { pre.apply(in, out); };
}

std::string format_number_short(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

[[noreturn]] void fail(const char* who, SolveReport report, double tol) {
  throw ConvergenceFailure(std::string(who) + ": no convergence to " + format_number_short(tol) + " within " +
                               std::to_string(report.iterations) + " iterations (residual " +
                               format_number_short(report.final_residual()) + ")",
                           std::move(report));
}

// Preconditioned BiCG on A x = b with preconditioner m (and its transpose m_t).
// The recurrence residual is the true residual b - A x.
std::pair<std::vector<double>, SolveReport> bicg_core(const Map& a, const Map& a_t, const Map& m, const Map& m_t,
                                                      std::span<const double> rhs, double tol, int max_iter) {
  const auto start = Clock::now();
  const std::size_t n = rhs.size();
  SolveReport report;
  std::vector<double> x(n, 0.0);
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    report.residual_history = {0.0};
    report.converged = true;
    report.wall_time = seconds_since(start);
    return {x, report};
  }
  std::vector<double> r(rhs.begin(), rhs.end()), rt = r;
  std::vector<double> z(n), zt(n), p(n), pt(n), q(n), qt(n);
  report.residual_history.push_back(1.0);
  double rho_prev = 1.0;
  for (int it = 1; it <= max_iter; ++it) {
    m(r, z);
    m_t(rt, zt);
    const double rho = dot(z, rt);
    if (rho == 0.0 || !std::isfinite(rho)) {
      report.wall_time = seconds_since(start);
      fail("bicg (breakdown)", std::move(report), tol);
    }
    if (it == 1) {
      p = z;
      pt = zt;
    } else {
      const double beta = rho / rho_prev;
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = z[i] + beta * p[i];
        pt[i] = zt[i] + beta * pt[i];
      }
    }
    a(p, q);
    a_t(pt, qt);
    const double alpha = rho / dot(pt, q);
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    axpy(-alpha, qt, rt);
    rho_prev = rho;
    report.iterations = it;
    report.residual_history.push_back(norm2(r) / bnorm);
    if (report.residual_history.back() <= tol) {
      report.converged = true;
      report.wall_time = seconds_since(start);
      return {x, report};
    }
  }
  report.wall_time = seconds_since(start);
  fail("bicg", std::move(report), tol);
}

}  // namespace

std::pair<std::vector<double>, SolveReport> cg(const SystemOperator& op, std::span<const double> rhs,
                                               const Preconditioner& pre, double tol, int max_iter) {
  check_rhs(op, rhs, pre, "cg");
  double spectrum_scale = 1.0;
  double max_imag = 0.0;
  for (const auto& ev : op.spectrum()) {
    spectrum_scale = std::max(spectrum_scale, std::abs(ev));
    max_imag = std::max(max_imag, std::abs(ev.imag()));
  }
  if (max_imag > 1e-12 * spectrum_scale) {
    throw InvalidArgument("cg: operator is not symmetric (drift term present); use bicg");
  }

  const auto start = Clock::now();
  const std::size_t n = rhs.size();
  const Map m = inverse_map(pre);
  SolveReport report;
  std::vector<double> x(n, 0.0);
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    report.residual_history = {0.0};
    report.converged = true;
    report.wall_time = seconds_since(start);
    return {x, report};
  }
  std::vector<double> r(rhs.begin(), rhs.end()), z(n), p(n), q(n);
  m(r, z);
  p = z;
  double rz = dot(r, z);
  report.residual_history.push_back(1.0);
  for (int it = 1; it <= max_iter; ++it) {
    op.apply(p, q);
    const double alpha = rz / dot(p, q);
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    report.iterations = it;
    report.residual_history.push_back(norm2(r) / bnorm);
    if (report.residual_history.back() <= tol) {
      report.converged = true;
      report.wall_time = seconds_since(start);
      return {x, report};
    }
    m(r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  report.wall_time = seconds_since(start);
  fail("cg", std::move(report), tol);
}

std::pair<std::vector<double>, SolveReport> bicg(const SystemOperator& op, std::span<const double> rhs,
                                                 const Preconditioner& pre, double tol, int max_iter) {
  check_rhs(op, rhs, pre, "bicg");
  const Map a = [&op](std::span<const double> in, std::span<double> out) { op.apply(in, out); };
  const Map a_t = [&op](std::span<const double> in, std::span<double> out) { op.apply_transpose(in, out); };
  // Both preconditioners are symmetric, so M^{-T} = M^{-1}.
  const Map m = inverse_map(pre);

  if (pre.mode() != ApplyMode::Right || pre.kind() == PreconditionerKind::None) {
    return bicg_core(a, a_t, m, m, rhs, tol, max_iter);
  }

  // Right preconditioning: A M^{-1} y = b, x = M^{-1} y.
  const std::size_t n = rhs.size();
  const Map am = [&](std::span<const double> in, std::span<double> out) {
    std::vector<double> tmp(n);
    pre.apply(in, tmp);
    op.apply(tmp, out);
  };
  const Map am_t = [&](std::span<const double> in, std::span<double> out) {
    std::vector<double> tmp(n);
    op.apply_transpose(in, tmp);
    pre.apply(tmp, out);
  };
  const Map id = [](std::span<const double> in, std::span<double> out) { std::copy(in.begin(), in.end(), out.begin()); };
  auto [y, report] = bicg_core(am, am_t, id, id, rhs, tol, max_iter);
  std::vector<double> x(n);
  pre.apply(y, x);
  return {x, report};
}

std::vector<double> direct_solve(const SystemOperator& op, std::span<const double> rhs) {
  const auto n = static_cast<Eigen::Index>(op.size());
  if (op.size() > 1024) throw InvalidArgument("direct_solve: dense LU is limited to N <= 1024");
  if (rhs.size() != op.size()) throw InvalidArgument("direct_solve: rhs length does not match operator");
  const auto dense = op.dense();
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(dense.data(), n, n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0) throw SingularityError("direct_solve: singular operator");
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);
  const Eigen::VectorXd x = lu.solve(b);
  return {x.data(), x.data() + n};
}

}  // namespace pide
