#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "pide/errors.hpp"
#include "pide/fft.hpp"
#include "pide/solvers.hpp"

namespace pide {

namespace {

using Clock = std::chrono::steady_clock;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> residual(const SystemOperator& op, std::span<const double> u, std::span<const double> rhs) {
  std::vector<double> r(op.size());
  op.apply(u, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
  return r;
}

std::string format_tol(double tol) {
  std::ostringstream out;
  out << tol;
  return out.str();
}

}  // namespace

Smoother::Smoother(const SystemOperator& op, SmootherSpec spec) : op_(op), spec_(spec) {
  const double d = op_.diagonal();
  if (d == 0.0) throw SingularityError("smoother: zero diagonal");
  if (spec_.kind == SmootherKind::Sor && !(spec_.omega > 0.0 && spec_.omega < 2.0)) {
    throw InvalidArgument("smoother: SOR omega must lie in (0, 2)");
  }
  if (spec_.kind != SmootherKind::Sor || op_.is_tridiagonal()) return;

  // First column of (D + omega L)^{-1}, a lower triangular Toeplitz matrix,
  // by forward substitution on e_0.
  const auto& c = op_.first_column();
  const std::size_t n = c.size();
  std::vector<double> inv(2 * n, 0.0);
  inv[0] = 1.0 / d;
  for (std::size_t i = 1; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 1; k <= i; ++k) s += c[k] * inv[i - k];
    inv[i] = -spec_.omega * s / d;
  }
  inverse_lower_spectrum_.resize(n + 1);
  fft::forward_real(inv, inverse_lower_spectrum_);
  const double scale = 1.0 / static_cast<double>(2 * n);
  for (auto& v : inverse_lower_spectrum_) v *= scale;
}

void Smoother::sweep(std::span<double> u, std::span<const double> rhs, int count) const {
  const std::size_t n = op_.size();
  if (u.size() != n || rhs.size() != n) throw InvalidArgument("smooth: vector length does not match operator");
  if (count < 1) throw InvalidArgument("smooth: count must be at least 1");
  for (int s = 0; s < count; ++s) {
    if (spec_.kind == SmootherKind::Jacobi) {
      const auto r = residual(op_, u, rhs);
      const double inv_d = 1.0 / op_.diagonal();
      for (std::size_t i = 0; i < n; ++i) u[i] += r[i] * inv_d;
    } else if (op_.is_tridiagonal()) {
      sor_sweep_tridiagonal(u, rhs);
    } else {
      sor_sweep_toeplitz(u, rhs);
    }
  }
}

void Smoother::sor_sweep_tridiagonal(std::span<double> u, std::span<const double> rhs) const {
  const auto& c = op_.first_column();
  const std::size_t n = c.size();
  const double d = c[0];
  const double lower = c[1];      // multiplies u_{i-1}
  const double upper = c[n - 1];  // multiplies u_{i+1}
  const double w = spec_.omega;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = u[(i + n - 1) % n];
    const double right = u[(i + 1) % n];
    const double gs = (rhs[i] - lower * left - upper * right) / d;
    u[i] = (1.0 - w) * u[i] + w * gs;
  }
}

void Smoother::sweep_from_zero(std::span<double> u, std::span<const double> rhs, int count) const {
  const std::size_t n = op_.size();
  if (u.size() != n || rhs.size() != n) throw InvalidArgument("smooth: vector length does not match operator");
  if (count < 1) throw InvalidArgument("smooth: count must be at least 1");
  std::fill(u.begin(), u.end(), 0.0);
  if (spec_.kind == SmootherKind::Jacobi) {
    const double inv_d = 1.0 / op_.diagonal();
    for (std::size_t i = 0; i < n; ++i) u[i] = rhs[i] * inv_d;
  } else if (op_.is_tridiagonal()) {
    sor_sweep_tridiagonal(u, rhs);
  } else {
    add_lower_solve(u, rhs);
  }
  if (count > 1) sweep(u, rhs, count - 1);
}

void Smoother::sor_sweep_toeplitz(std::span<double> u, std::span<const double> rhs) const {
  add_lower_solve(u, residual(op_, u, rhs));
}

void Smoother::add_lower_solve(std::span<double> u, std::span<const double> r) const {
  const std::size_t n = op_.size();
  std::vector<double> padded(2 * n, 0.0);
  std::copy(r.begin(), r.end(), padded.begin());
  std::vector<fft::cplx> work(n + 1);
  fft::forward_real(padded, work);
  for (std::size_t k = 0; k <= n; ++k) work[k] *= inverse_lower_spectrum_[k];
  fft::inverse_real(work, padded);
  for (std::size_t i = 0; i < n; ++i) u[i] += spec_.omega * padded[i];
}

std::vector<double> smooth(const SystemOperator& op, std::span<const double> u, std::span<const double> rhs,
                           SmootherSpec smoother, int count) {
  std::vector<double> out(u.begin(), u.end());
  Smoother(op, smoother).sweep(out, rhs, count);
  return out;
}

std::vector<double> restrict_residual(std::span<const double> fine_residual) {
  if (fine_residual.size() % 2 != 0) throw InvalidArgument("restrict_residual: length must be even");
  std::vector<double> coarse(fine_residual.size() / 2);
  for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = fine_residual[2 * i];
  return coarse;
}

std::vector<double> prolong(std::span<const double> coarse) {
  const std::size_t m = coarse.size();
  std::vector<double> fine(2 * m);
  if (m == 0) return fine;
  for (std::size_t j = 0; j < m; ++j) fine[2 * j] = coarse[j];
  for (std::size_t j = 0; j + 1 < m; ++j) fine[2 * j + 1] = 0.5 * (coarse[j] + coarse[j + 1]);
  fine[2 * m - 1] = 0.5 * (coarse[0] + coarse[m - 1]);
  return fine;
}

MgHierarchy build_hierarchy(const SystemOperator& fine, const MgOptions& options) {
  const std::size_t n = fine.size();
  int n_levels = options.n_levels;
  if (n_levels <= 0) n_levels = max_dwt_levels(n) - 2;
  if (n_levels < 1 || (n >> (n_levels - 1)) < 4 || (n >> (n_levels - 1)) << (n_levels - 1) != n) {
    throw InvalidArgument("build_hierarchy: " + std::to_string(n_levels) + " levels leave fewer than 4 coarse points");
  }
  if (options.pre_smooth_count < 1) throw InvalidArgument("build_hierarchy: pre_smooth_count must be at least 1");

  MgHierarchy h;
  h.smoother = {options.smoother, options.sor_omega};
  h.pre_smooth_count = options.pre_smooth_count;
  h.levels.push_back(fine);
  for (int level = 1; level < n_levels; ++level) {
    const SystemOperator& prev = h.levels.back();
    const Grid grid = prev.grid().coarsened();
    const Kernel kernel = make_kernel(prev.kernel_kind(), grid);
    h.levels.push_back(assemble(grid, prev.params(), kernel, prev.scheme(), prev.options()));
  }
  for (int level = 0; level + 1 < n_levels; ++level) {
    h.smoothers.emplace_back(h.levels[static_cast<std::size_t>(level)], h.smoother);
  }
  const SystemOperator& coarsest = h.levels.back();
  const auto nc = static_cast<Eigen::Index>(coarsest.size());
  const auto dense = coarsest.dense();
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(dense.data(), nc,
                                                                                                     nc);
  h.coarse_lu.compute(a);
  return h;
}

namespace {

// An empty u0 stands for the zero initial guess.
std::vector<double> vcycle(const MgHierarchy& h, std::size_t level, std::span<const double> f,
                           std::span<const double> u0) {
  if (level + 1 == h.levels.size()) {
    const auto nc = static_cast<Eigen::Index>(f.size());
    const Eigen::VectorXd x = h.coarse_lu.solve(Eigen::Map<const Eigen::VectorXd>(f.data(), nc));
    return {x.data(), x.data() + nc};
  }
  const SystemOperator& op = h.levels[level];
  const Smoother& smoother = h.smoothers[level];
  std::vector<double> u(f.size());
  if (u0.empty()) {
    smoother.sweep_from_zero(u, f, h.pre_smooth_count);
  } else {
    std::copy(u0.begin(), u0.end(), u.begin());
    smoother.sweep(u, f, h.pre_smooth_count);
  }
  const auto coarse_f = restrict_residual(residual(op, u, f));
  const auto correction = prolong(vcycle(h, level + 1, coarse_f, {}));
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += correction[i];
  smoother.sweep(u, f, h.pre_smooth_count);
  return u;
}

void check_lengths(const MgHierarchy& h, std::span<const double> rhs, std::span<const double> u0) {
  if (h.levels.empty()) throw InvalidArgument("mg: empty hierarchy");
  const std::size_t n = h.levels.front().size();
  if (rhs.size() != n || u0.size() != n) throw InvalidArgument("mg: vector length does not match the finest grid");
}

}  // namespace

std::pair<std::vector<double>, SolveReport> mg_vcycle(const MgHierarchy& hierarchy, std::span<const double> rhs,
                                                      std::span<const double> u0) {
  check_lengths(hierarchy, rhs, u0);
  const auto start = Clock::now();
  const SystemOperator& fine = hierarchy.levels.front();
  const double bnorm = norm2(rhs);
  const double scale = bnorm > 0.0 ? 1.0 / bnorm : 1.0;
  SolveReport report;
  const bool zero_guess = std::all_of(u0.begin(), u0.end(), [](double v) { return v == 0.0; });
  report.residual_history.push_back(zero_guess ? bnorm * scale : norm2(residual(fine, u0, rhs)) * scale);
  auto u = vcycle(hierarchy, 0, rhs, zero_guess ? std::span<const double>{} : u0);
  report.iterations = 1;
  report.residual_history.push_back(norm2(residual(fine, u, rhs)) * scale);
  report.converged = report.residual_history.back() <= report.residual_history.front();
  report.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return {std::move(u), report};
}

std::pair<std::vector<double>, SolveReport> mg_solve(const MgHierarchy& hierarchy, std::span<const double> rhs,
                                                     std::span<const double> u0, double tol, int max_cycles) {
  check_lengths(hierarchy, rhs, u0);
  const auto start = Clock::now();
  const SystemOperator& fine = hierarchy.levels.front();
  const double bnorm = norm2(rhs);
  const double scale = bnorm > 0.0 ? 1.0 / bnorm : 1.0;
  SolveReport report;
  std::vector<double> u(u0.begin(), u0.end());
  report.residual_history.push_back(norm2(residual(fine, u, rhs)) * scale);
  while (report.residual_history.back() > tol && report.iterations < max_cycles) {
    u = vcycle(hierarchy, 0, rhs, u);
    ++report.iterations;
    report.residual_history.push_back(norm2(residual(fine, u, rhs)) * scale);
    const double current = report.residual_history.back();
    if (!std::isfinite(current) || current > 1e6 * std::max(report.residual_history.front(), tol)) {
      report.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
      throw ConvergenceFailure("mg: v-cycles diverged after " + std::to_string(report.iterations) + " cycles",
                               std::move(report));
    }
  }
  report.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  report.converged = report.residual_history.back() <= tol;
  if (!report.converged) {
    throw ConvergenceFailure("mg: no convergence to " + format_tol(tol) + " within " +
                                 std::to_string(max_cycles) + " v-cycles",
                             std::move(report));
  }
  return {std::move(u), report};
}

}  // namespace pide
