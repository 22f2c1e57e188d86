#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pide/operator.hpp"

namespace pide {

struct SolveReport {
  int iterations = 0;
  /// Relative residuals ||b - A x|| / ||b||, starting with the initial guess.
  std::vector<double> residual_history;
  double wall_time = 0.0;   // seconds, iteration loop only
  double setup_time = 0.0;  // seconds spent building preconditioner / hierarchy
  bool converged = false;

  double final_residual() const noexcept { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

/// Diagonal scaling in a transform basis. For WDP the basis is the periodic
/// wavelet transform and the weights are indexed by scale (0 = approximation,
/// `levels` = finest); for FSP it is the DFT and the weights are indexed by
/// natural FFT bin. apply() is M^{-1} = F* S F, apply_sqrt() is F* S^{1/2} F.
class Preconditioner {
 public:
  static Preconditioner identity(std::size_t n, ApplyMode mode = ApplyMode::Symmetric);

  PreconditionerKind kind() const noexcept { return kind_; }
  ApplyMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return n_; }
  const std::vector<double>& diagonal_weights() const noexcept { return weights_; }
  int wavelet_levels() const noexcept { return levels_; }
  int wavelet_order() const noexcept { return filter_order_; }

  void apply(std::span<const double> r, std::span<double> out) const;
  void apply_sqrt(std::span<const double> r, std::span<double> out) const;

 private:
  friend Preconditioner wdp_preconditioner(const Grid&, const ModelParams&, int, int, ApplyMode);
  friend Preconditioner fsp_preconditioner(const Grid&, const ModelParams&, ApplyMode);

  void apply_power(std::span<const double> r, std::span<double> out, double power) const;

  PreconditionerKind kind_ = PreconditionerKind::None;
  ApplyMode mode_ = ApplyMode::Symmetric;
  std::size_t n_ = 0;
  std::vector<double> weights_;
  int levels_ = 0;
  int filter_order_ = 0;
};

/// Wavelet weights s_l = 1 / (1 + r dt + c 4 sigma dt 4^(l - levels) / h^2) per
/// scale index l, with c = 9 pi^2 / 64 placing the symbol at each band's centre.
Preconditioner wdp_preconditioner(const Grid& grid, const ModelParams& params, int filter_order, int levels,
                                  ApplyMode mode = ApplyMode::Symmetric);

/// Fourier weights 1 / M_k with M_k = 1 + r dt + sigma dt xi_k^2.
Preconditioner fsp_preconditioner(const Grid& grid, const ModelParams& params, ApplyMode mode = ApplyMode::Symmetric);

/// Builds the preconditioner named by `choice` for `op` (Identity for None).
Preconditioner make_preconditioner(const SystemOperator& op, const SolverChoice& choice);

/// Preconditioned conjugate gradients. Requires a symmetric operator.
std::pair<std::vector<double>, SolveReport> cg(const SystemOperator& op, std::span<const double> rhs,
                                               const Preconditioner& pre, double tol = 1e-8, int max_iter = 10000);

/// Preconditioned biconjugate gradients for the non-symmetric case.
std::pair<std::vector<double>, SolveReport> bicg(const SystemOperator& op, std::span<const double> rhs,
                                                 const Preconditioner& pre, double tol = 1e-8, int max_iter = 10000);

/// Dense LU solve. Limited to N <= 1024.
std::vector<double> direct_solve(const SystemOperator& op, std::span<const double> rhs);

// ---------------------------------------------------------------------------
// Multigrid

struct SmootherSpec {
  SmootherKind kind = SmootherKind::Sor;
  double omega = 1.2;
};

/// Jacobi or lexicographic SOR sweeps on a circulant operator. The SOR sweep
/// x += omega (D + omega L)^{-1} (b - A x) is applied with an FFT-based lower
/// triangular Toeplitz solve for dense operators and with the plain
/// componentwise recurrence for tridiagonal ones.
class Smoother {
 public:
  Smoother(const SystemOperator& op, SmootherSpec spec);

  void sweep(std::span<double> u, std::span<const double> rhs, int count) const;
  /// Same as filling u with zeros and calling sweep, without the first residual evaluation.
  void sweep_from_zero(std::span<double> u, std::span<const double> rhs, int count) const;
  const SmootherSpec& spec() const noexcept { return spec_; }

 private:
  void sor_sweep_tridiagonal(std::span<double> u, std::span<const double> rhs) const;
  void sor_sweep_toeplitz(std::span<double> u, std::span<const double> rhs) const;
  // u += omega (D + omega L)^{-1} r
  void add_lower_solve(std::span<double> u, std::span<const double> r) const;

  SystemOperator op_;
  SmootherSpec spec_;
  // Half spectrum of the zero-padded first column of (D + omega L)^{-1}, length 2N.
  std::vector<std::complex<double>> inverse_lower_spectrum_;
};

std::vector<double> smooth(const SystemOperator& op, std::span<const double> u, std::span<const double> rhs,
                           SmootherSpec smoother, int count);

/// Injection: coarse_i = fine_{2i} (0-based), i.e. the 1-based odd entries.
std::vector<double> restrict_residual(std::span<const double> fine_residual);

/// Linear interpolation with periodic wrap: out_{2j} = c_j,
/// out_{2j+1} = (c_j + c_{j+1}) / 2, out_{2n-1} = (c_0 + c_{n-1}) / 2.
std::vector<double> prolong(std::span<const double> coarse);

struct MgHierarchy {
  std::vector<SystemOperator> levels;  // fine to coarse
  std::vector<Smoother> smoothers;     // one per level except the coarsest
  Eigen::PartialPivLU<Eigen::MatrixXd> coarse_lu;
  SmootherSpec smoother;
  int pre_smooth_count = 1;

  int n_levels() const noexcept { return static_cast<int>(levels.size()); }
};

/// Rediscretizes `fine` on successively halved grids. n_levels = 0 selects
/// log2(N) - 2; the coarsest grid must keep at least 4 points.
MgHierarchy build_hierarchy(const SystemOperator& fine, const MgOptions& options);

/// One v-cycle starting from u0.
std::pair<std::vector<double>, SolveReport> mg_vcycle(const MgHierarchy& hierarchy, std::span<const double> rhs,
                                                      std::span<const double> u0);

/// Repeated v-cycles until the relative residual drops to tol (max_cycles cap).
std::pair<std::vector<double>, SolveReport> mg_solve(const MgHierarchy& hierarchy, std::span<const double> rhs,
                                                     std::span<const double> u0, double tol, int max_cycles);

/// Spectral condition number max|lambda| / min|lambda| of A or of the
/// symmetric sandwich D A D. Exact through the circulant spectrum when the
/// preconditioner is Identity or Fourier; dense eigenvalues up to N = 1024,
/// Lanczos above.
double condition_estimate(const SystemOperator& op, const Preconditioner* pre = nullptr);

}  // namespace pide
