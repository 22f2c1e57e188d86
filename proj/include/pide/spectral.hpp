#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pide/grid_kernel.hpp"
#include "pide/operator.hpp"

namespace pide {

enum class SymbolScheme { Explicit, Imex, Implicit };

std::string symbol_scheme_name(SymbolScheme s);

struct SymbolOptions {
  /// Allow parameters other than sigma = mu = lambda = r = 1.
  bool generalized = false;
  bool one_sided_advection = false;
};

/// Per-frequency amplification factors of one time step, in the centered
/// order of SpectralVector (slot i <-> m = i - N/2).
struct AmplificationSymbol {
  SymbolScheme scheme = SymbolScheme::Implicit;
  std::vector<std::complex<double>> values;
  /// sqrt(2 pi) (J~(xi) - J~(0)) from the grid kernel's transform.
  std::vector<double> q_tilde;
  ModelParams params;
  double grid_spacing = 1.0;

  std::size_t size() const noexcept { return values.size(); }
  double xi(std::size_t i) const noexcept;
};

/// Throws InvalidArgument for non-unit params unless options.generalized is set.
AmplificationSymbol symbol(SymbolScheme scheme, const Grid& grid, const ModelParams& params, const Kernel& kernel,
                           SymbolOptions options = {});

/// Largest dt the closed-form sufficient condition allows at spacing h
/// (unit parameters). Implicit: +infinity. h <= 0 throws InvalidArgument.
double stability_bound(SymbolScheme scheme, double h);

double max_amplification(const AmplificationSymbol& sym);

/// Transforms u0, multiplies by g^n, transforms back.
std::vector<double> fourier_propagate(std::span<const double> u0, const AmplificationSymbol& sym, int n_steps);

/// q^(xi) = -sigma xi^2 + i mu xi - r + lambda sqrt(2 pi) (J^(xi) - J^(0)).
class ContinuousSymbol {
 public:
  /// Throws UnsupportedKernel when the kind has no closed-form transform.
  ContinuousSymbol(KernelKind kernel, ModelParams params);

  std::complex<double> q_hat(double xi) const;
  double kernel_fourier(double xi) const;
  const KernelKind& kernel() const noexcept { return kernel_; }
  const ModelParams& params() const noexcept { return params_; }

 private:
  KernelKind kernel_;
  ModelParams params_;
};

/// Spectral multiplication of the grid transform of u0 by exp(q^(xi_m) t).
std::vector<double> exact_solution(std::span<const double> u0, double t, const ContinuousSymbol& csym,
                                   const Grid& grid);

/// sqrt(h sum |u_m - v_m|^2)
double error_norm(std::span<const double> u, std::span<const double> v, double h);

}  // namespace pide
