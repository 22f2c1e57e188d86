#include "pide/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pide/errors.hpp"
#include "pide/transforms.hpp"

namespace pide {

namespace {

using cplx = std::complex<double>;

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

cplx power(cplx g, int n) {
  cplx result{1.0, 0.0};
  while (n > 0) {
    if (n & 1) result *= g;
    g *= g;
    n >>= 1;
  }
  return result;
}

std::vector<double> multiply_spectrum(std::span<const double> u, double h, const std::vector<cplx>& factors) {
  SpectralVector spec = dft(u, h);
  for (std::size_t i = 0; i < spec.size(); ++i) spec.coefficients[i] *= factors[i];
  return idft(spec);
}

}  // namespace

std::string symbol_scheme_name(SymbolScheme s) {
  switch (s) {
    case SymbolScheme::Explicit: return "explicit";
    case SymbolScheme::Imex: return "imex";
    case SymbolScheme::Implicit: return "implicit";
  }
  return "unknown";
}

double AmplificationSymbol::xi(std::size_t i) const noexcept {
  const double m = static_cast<double>(i) - static_cast<double>(size() / 2);
  return 2.0 * std::numbers::pi * m / (static_cast<double>(size()) * grid_spacing);
}

AmplificationSymbol symbol(SymbolScheme scheme, const Grid& grid, const ModelParams& params, const Kernel& kernel,
                           SymbolOptions options) {
  if (!(kernel.grid == grid)) throw InvalidArgument("symbol: kernel was sampled on a different grid");
  if (!options.generalized && !params.is_unit()) {
    throw InvalidArgument("symbol: non-unit parameters need the generalized flag");
  }
  params.validate();

  AmplificationSymbol sym;
  sym.scheme = scheme;
  sym.params = params;
  sym.grid_spacing = grid.spacing();
  const std::size_t n = grid.n_points();
  const double h = grid.spacing();
  const double dt = params.dt;
  const cplx j0 = kernel.dft.at_frequency(0);
  sym.values.resize(n);
  sym.q_tilde.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = h * sym.xi(i);
    const double q = kSqrt2Pi * (kernel.dft.coefficients[i] - j0).real();
    sym.q_tilde[i] = q;
    const double s = std::sin(0.5 * theta);
    const double diffusion = 4.0 * params.sigma * dt / (h * h) * s * s;
    const cplx drift = options.one_sided_advection ? params.mu * dt / h * (std::exp(cplx{0.0, theta}) - 1.0)
                                                   : cplx{0.0, params.mu * dt / h * std::sin(theta)};
    const double reaction = params.r * dt;
    const double jump = params.lambda * dt * q;
    switch (scheme) {
      case SymbolScheme::Explicit:
        sym.values[i] = 1.0 - reaction - diffusion + drift + jump;
        break;
      case SymbolScheme::Imex:
        sym.values[i] = (1.0 + drift + jump) / (1.0 + reaction + diffusion);
        break;
      case SymbolScheme::Implicit:
        sym.values[i] = 1.0 / (1.0 + reaction + diffusion - drift - jump);
        break;
    }
  }
  return sym;
}

double stability_bound(SymbolScheme scheme, double h) {
  if (!(h > 0.0)) throw InvalidArgument("stability_bound: h must be positive");
  const double h2 = h * h;
  switch (scheme) {
    case SymbolScheme::Explicit: {
      const double a = 3.0 * h2 + 4.0;
      return 4.0 * h2 * h2 / (a * a + h2);
    }
    case SymbolScheme::Imex:
      return 2.0 * h * (h + 1.0) / (3.0 * h2 + 4.0 * h + 2.0);
    case SymbolScheme::Implicit:
      return std::numeric_limits<double>::infinity();
  }
  throw InvalidArgument("stability_bound: unknown scheme");
}

double max_amplification(const AmplificationSymbol& sym) {
  double m = 0.0;
  for (const auto& g : sym.values) m = std::max(m, std::abs(g));
  return m;
}

std::vector<double> fourier_propagate(std::span<const double> u0, const AmplificationSymbol& sym, int n_steps) {
  if (n_steps < 0) throw InvalidArgument("fourier_propagate: n_steps must be non-negative");
  if (u0.size() != sym.size()) throw InvalidArgument("fourier_propagate: u0 length does not match the symbol");
  std::vector<cplx> factors(sym.size());
  for (std::size_t i = 0; i < factors.size(); ++i) factors[i] = power(sym.values[i], n_steps);
  return multiply_spectrum(u0, sym.grid_spacing, factors);
}

ContinuousSymbol::ContinuousSymbol(KernelKind kernel, ModelParams params)
    : kernel_(std::move(kernel)), params_(params) {
  if (!pide::kernel_fourier(kernel_, 0.0)) {
    throw UnsupportedKernel("kernel '" + kernel_name(kernel_) + "' has no closed-form continuous transform");
  }
  params_.validate();
}

double ContinuousSymbol::kernel_fourier(double xi) const { return *pide::kernel_fourier(kernel_, xi); }

std::complex<double> ContinuousSymbol::q_hat(double xi) const {
  const double jump = params_.lambda * kSqrt2Pi * (kernel_fourier(xi) - kernel_fourier(0.0));
  return {-params_.sigma * xi * xi - params_.r + jump, params_.mu * xi};
}

std::vector<double> exact_solution(std::span<const double> u0, double t, const ContinuousSymbol& csym,
                                   const Grid& grid) {
  if (!(t >= 0.0)) throw InvalidArgument("exact_solution: t must be non-negative");
  if (u0.size() != grid.n_points()) throw InvalidArgument("exact_solution: u0 length does not match the grid");
  if (t == 0.0) return {u0.begin(), u0.end()};
  const std::size_t n = grid.n_points();
  const double h = grid.spacing();
  std::vector<cplx> factors(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = static_cast<double>(i) - static_cast<double>(n / 2);
    const double xi = 2.0 * std::numbers::pi * m / (static_cast<double>(n) * h);
    factors[i] = std::exp(csym.q_hat(xi) * t);
  }
  // The Nyquist mode stands for both +pi/h and -pi/h; average the pair.
  factors[0] = factors[0].real();
  return multiply_spectrum(u0, h, factors);
}

double error_norm(std::span<const double> u, std::span<const double> v, double h) {
  if (u.size() != v.size()) throw InvalidArgument("error_norm: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - v[i]) * (u[i] - v[i]);
  return std::sqrt(h * s);
}

}  // namespace pide
