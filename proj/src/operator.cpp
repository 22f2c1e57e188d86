#include "pide/operator.hpp"

#include <algorithm>
#include <cmath>

#include "pide/errors.hpp"
#include "pide/fft.hpp"

namespace pide {

ModelParams ModelParams::unit(double dt) { return {1.0, 1.0, 1.0, 1.0, dt}; }

bool ModelParams::is_unit() const noexcept { return sigma == 1.0 && mu == 1.0 && r == 1.0 && lambda == 1.0; }

void ModelParams::validate() const {
  if (!(sigma >= 0.0)) throw InvalidArgument("params: sigma must be non-negative");
  if (!(r >= 0.0)) throw InvalidArgument("params: r must be non-negative");
  if (!(lambda >= 0.0)) throw InvalidArgument("params: lambda must be non-negative");
  if (sigma == 0.0 && lambda == 0.0) throw InvalidArgument("params: sigma and lambda cannot both vanish");
  if (!(dt > 0.0)) throw InvalidArgument("params: dt must be positive");
  if (!std::isfinite(mu)) throw InvalidArgument("params: mu must be finite");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Implicit: return "implicit";
    case Scheme::Explicit: return "explicit";
    case Scheme::ImexImplicitPart: return "imex_implicit_part";
    case Scheme::ImexExplicitPart: return "imex_explicit_part";
  }
  return "unknown";
}

std::string solver_name(SolverKind s) {
  switch (s) {
    case SolverKind::Direct: return "direct";
    case SolverKind::Cg: return "cg";
    case SolverKind::Bicg: return "bicg";
    case SolverKind::Mg: return "mg";
  }
  return "unknown";
}

std::string preconditioner_name(PreconditionerKind p) {
  switch (p) {
    case PreconditionerKind::None: return "none";
    case PreconditionerKind::Wdp: return "wdp";
    case PreconditionerKind::Fsp: return "fsp";
  }
  return "unknown";
}

SystemOperator::SystemOperator(std::vector<double> first_column, Scheme scheme, ModelParams params, Grid grid,
                               KernelKind kernel_kind, AssemblyOptions options)
    : column_(std::move(first_column)),
      scheme_(scheme),
      params_(params),
      grid_(grid),
      kernel_kind_(kernel_kind),
      options_(options) {
  if (column_.size() != grid_.n_points()) throw InvalidArgument("SystemOperator: column length differs from grid");
  half_spectrum_.resize(column_.size() / 2 + 1);
  fft::forward_real(column_, half_spectrum_);
  spectrum_ = fft::expand_hermitian(half_spectrum_, column_.size());
}

bool SystemOperator::is_tridiagonal() const noexcept {
  const std::size_t n = column_.size();
  for (std::size_t k = 2; k + 1 < n; ++k) {
    if (column_[k] != 0.0) return false;
  }
  return true;
}

bool SystemOperator::is_symmetric() const noexcept {
  const std::size_t n = column_.size();
  double scale = 0.0;
  for (double c : column_) scale = std::max(scale, std::abs(c));
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs(column_[k] - column_[n - k]) > 1e-12 * scale) return false;
  }
  return true;
}

void SystemOperator::apply(std::span<const double> v, std::span<double> out) const { apply_with(v, out, false); }

void SystemOperator::apply_transpose(std::span<const double> v, std::span<double> out) const {
  apply_with(v, out, true);
}

void SystemOperator::apply_with(std::span<const double> v, std::span<double> out, bool transpose) const {
  const std::size_t n = column_.size();
  if (v.size() != n || out.size() != n) {
    throw InvalidArgument("apply: vector length " + std::to_string(v.size()) + " does not match operator size " +
                          std::to_string(n));
  }
  std::vector<fft::cplx> work(n / 2 + 1);
  fft::forward_real(v, work);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < work.size(); ++k) {
    work[k] *= (transpose ? std::conj(half_spectrum_[k]) : half_spectrum_[k]) * inv_n;
  }
  fft::inverse_real(work, out);
}

std::vector<double> SystemOperator::dense() const {
  const std::size_t n = column_.size();
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = column_[(i + n - j) % n];
  }
  return a;
}

SystemOperator assemble(const Grid& grid, const ModelParams& params, const Kernel& kernel, Scheme scheme,
                        AssemblyOptions options) {
  if (!(kernel.grid == grid) || kernel.samples.size() != grid.n_points()) {
    throw InvalidArgument("assemble: kernel was sampled on a different grid");
  }
  params.validate();

  const std::size_t n = grid.n_points();
  const double h = grid.spacing();
  const double dt = params.dt;
  const double diffusion = params.sigma * dt / (h * h);

  // Column slots: [0] diagonal, [1] multiplies U_{i-1}, [n-1] multiplies U_{i+1}.
  std::vector<double> c(n, 0.0);

  // Adds `scale` times the periodic second difference U_{i+1} - 2U_i + U_{i-1}.
  auto add_second_difference = [&](double scale) {
    c[0] += -2.0 * scale;
    c[1] += scale;
    c[n - 1] += scale;
  };
  // Adds `scale` times the first difference: (U_{i+1} - U_{i-1})/(2h) or (U_{i+1} - U_i)/h.
  auto add_first_difference = [&](double scale) {
    if (options.one_sided_advection) {
      c[n - 1] += scale / h;
      c[0] -= scale / h;
    } else {
      c[n - 1] += scale / (2.0 * h);
      c[1] -= scale / (2.0 * h);
    }
  };
  // Adds `scale` times K: h * sum_k J_{i-k} U_k - (h sum_k J) U_i.
  auto add_convolution_difference = [&](double scale) {
    const double mass = kernel.mass();
    for (std::size_t k = 0; k < n; ++k) c[k] += scale * h * kernel.samples[k];
    c[0] -= scale * mass;
  };

  switch (scheme) {
    case Scheme::Implicit:
      c[0] += 1.0 + params.r * dt;
      add_second_difference(-diffusion);
      add_first_difference(-params.mu * dt);
      add_convolution_difference(-params.lambda * dt);
      break;
    case Scheme::Explicit:
      c[0] += 1.0 - params.r * dt;
      add_second_difference(diffusion);
      add_first_difference(params.mu * dt);
      add_convolution_difference(params.lambda * dt);
      break;
    case Scheme::ImexImplicitPart:
      c[0] += 1.0 + params.r * dt;
      add_second_difference(-diffusion);
      break;
    case Scheme::ImexExplicitPart:
      c[0] += 1.0;
      add_first_difference(params.mu * dt);
      add_convolution_difference(params.lambda * dt);
      break;
  }
  return SystemOperator(std::move(c), scheme, params, grid, kernel.kind, options);
}

std::vector<double> apply(const SystemOperator& op, std::span<const double> v) {
  std::vector<double> out(op.size());
  op.apply(v, out);
  return out;
}

std::vector<double> step_explicit(const SystemOperator& op, std::span<const double> u_prev) {
  if (op.scheme() != Scheme::Explicit) throw InvalidArgument("step_explicit: operator is not an explicit scheme");
  return apply(op, u_prev);
}

}  // namespace pide
