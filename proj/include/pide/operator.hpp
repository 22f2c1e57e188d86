#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pide/grid_kernel.hpp"

namespace pide {

struct ModelParams {
  double sigma = 0.01;   // diffusion
  double mu = 0.01;      // drift
  double r = 0.01;       // discount
  double lambda = 0.1;   // jump intensity
  double dt = 0.01;

  /// sigma = mu = lambda = r = 1, the convention of the Fourier stability analysis.
  static ModelParams unit(double dt);
  static ModelParams reference_preset() { return {}; }

  bool is_unit() const noexcept;
  /// Throws InvalidArgument unless sigma, r, lambda >= 0, (sigma, lambda) != (0, 0) and dt > 0.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

enum class Scheme { Implicit, Explicit, ImexImplicitPart, ImexExplicitPart };

std::string scheme_name(Scheme s);

struct AssemblyOptions {
  /// Forward difference (U_{j+1}-U_j)/h for the drift term instead of the centered one.
  bool one_sided_advection = false;
};

/// Periodic circulant operator: dense entry (i, j) = first_column[(i - j) mod N].
/// Immutable after assembly.
class SystemOperator {
 public:
  SystemOperator(std::vector<double> first_column, Scheme scheme, ModelParams params, Grid grid,
                 KernelKind kernel_kind, AssemblyOptions options);

  const std::vector<double>& first_column() const noexcept { return column_; }
  /// Eigenvalues in natural FFT order: spectrum[k] belongs to xi = 2 pi k / (N h)
  /// (k < N/2) or 2 pi (k - N) / (N h).
  const std::vector<std::complex<double>>& spectrum() const noexcept { return spectrum_; }
  Scheme scheme() const noexcept { return scheme_; }
  const ModelParams& params() const noexcept { return params_; }
  const Grid& grid() const noexcept { return grid_; }
  const KernelKind& kernel_kind() const noexcept { return kernel_kind_; }
  const AssemblyOptions& options() const noexcept { return options_; }
  std::size_t size() const noexcept { return column_.size(); }
  double diagonal() const noexcept { return column_.front(); }

  /// True when only the main diagonal and the two periodic neighbours are non-zero.
  bool is_tridiagonal() const noexcept;
  /// first_column[k] == first_column[N-k] up to roundoff.
  bool is_symmetric() const noexcept;

  /// out = A v via FFT. `out` must not alias `v`.
  void apply(std::span<const double> v, std::span<double> out) const;
  void apply_transpose(std::span<const double> v, std::span<double> out) const;

  /// Row-major N*N dense matrix, for oracles and small direct solves.
  std::vector<double> dense() const;

 private:
  void apply_with(std::span<const double> v, std::span<double> out, bool transpose) const;

  std::vector<double> column_;
  std::vector<std::complex<double>> spectrum_;
  std::vector<std::complex<double>> half_spectrum_;
  Scheme scheme_;
  ModelParams params_;
  Grid grid_;
  KernelKind kernel_kind_;
  AssemblyOptions options_;
};

/// Builds the circulant for one scheme:
///   Implicit          -dt sigma D2 - dt mu D1 + (1 + r dt) I - dt lambda K
///   Explicit           I + dt (sigma D2 + mu D1 - r I + lambda K)
///   ImexImplicitPart  -dt sigma D2 + (1 + r dt) I
///   ImexExplicitPart   I + dt mu D1 + dt lambda K
/// where D2, D1 are the periodic second / first differences and
/// K u_i = h sum_k J(x_i - x_k) (u_k - u_i).
SystemOperator assemble(const Grid& grid, const ModelParams& params, const Kernel& kernel, Scheme scheme,
                        AssemblyOptions options = {});

std::vector<double> apply(const SystemOperator& op, std::span<const double> v);

/// One explicit Euler step U^{n+1} = E U^n.
std::vector<double> step_explicit(const SystemOperator& op, std::span<const double> u_prev);

// ---------------------------------------------------------------------------
// Linear solve configuration shared by the stepping routines and the solvers.

enum class SolverKind { Direct, Cg, Bicg, Mg };
enum class PreconditionerKind { None, Wdp, Fsp };
enum class ApplyMode { Symmetric, Left, Right };
enum class SmootherKind { Jacobi, Sor };

std::string solver_name(SolverKind s);
std::string preconditioner_name(PreconditionerKind p);

struct MgOptions {
  int n_levels = 0;  // 0: log2(N) - 2
  SmootherKind smoother = SmootherKind::Sor;
  double sor_omega = 1.2;
  int pre_smooth_count = 1;
  bool operator==(const MgOptions&) const = default;
};

struct SolverChoice {
  SolverKind solver = SolverKind::Cg;
  PreconditionerKind preconditioner = PreconditionerKind::None;
  ApplyMode mode = ApplyMode::Symmetric;
  double tol = 1e-8;
  int max_iter = 10000;  // Krylov iterations or multigrid cycles
  int wavelet_order = 12;
  int wavelet_levels = 0;  // 0: log2(N) - 4, at least 1
  MgOptions mg;
  bool operator==(const SolverChoice&) const = default;
};

struct SolveReport;

/// Solves the implicit system A U^n = rhs.
std::pair<std::vector<double>, SolveReport> solve_implicit_step(const SystemOperator& op, std::span<const double> rhs,
                                                                const SolverChoice& method);

/// Solves ImexImplicitPart U^n = ImexExplicitPart U^{n-1}.
std::pair<std::vector<double>, SolveReport> step_imex(const SystemOperator& implicit_part,
                                                      const SystemOperator& explicit_part,
                                                      std::span<const double> u_prev, const SolverChoice& method);

}  // namespace pide
