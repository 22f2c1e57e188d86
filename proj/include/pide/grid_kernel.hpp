#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pide/transforms.hpp"

namespace pide {

bool is_power_of_two(std::size_t n) noexcept;

/// Uniform periodic mesh x_j = left + j*h, j = 0..n-1, h = (right-left)/n.
/// Node n would coincide with node 0.
class Grid {
 public:
  std::size_t n_points() const noexcept { return n_points_; }
  double left() const noexcept { return left_; }
  double right() const noexcept { return right_; }
  double length() const noexcept { return right_ - left_; }
  double spacing() const noexcept { return length() / static_cast<double>(n_points_); }
  double node(std::size_t j) const noexcept { return left_ + static_cast<double>(j) * spacing(); }
  std::vector<double> nodes() const;

  /// Same interval, half the points. Allowed down to 4 points (multigrid coarse levels).
  Grid coarsened() const;

  bool operator==(const Grid&) const = default;

  friend Grid make_grid(std::size_t n_points, double left, double right);

 private:
  Grid(std::size_t n, double left, double right) : n_points_(n), left_(left), right_(right) {}

  std::size_t n_points_;
  double left_;
  double right_;
};

/// Throws InvalidArgument naming the violated constraint: n_points must be a
/// power of two, at least 8, and right > left.
Grid make_grid(std::size_t n_points, double left, double right);

// Kernel kinds. `omega` is the Gaussian rate: J(x) = sqrt(omega/pi) exp(-omega x^2),
// i.e. omega = 1/(2 delta^2) for the variance-style parameterization.
struct GaussianKernel {
  double omega = 1.0;
  bool operator==(const GaussianKernel&) const = default;
};
/// J(x) = exp(-|x|)/2.
struct ExponentialKernel {
  bool operator==(const ExponentialKernel&) const = default;
};
/// sum_{r=-shift_terms}^{shift_terms} J_gauss(x - r*period).
struct PeriodizedGaussianKernel {
  double omega = 100.0;
  double period = 1.0;
  int shift_terms = 3;
  bool operator==(const PeriodizedGaussianKernel&) const = default;
};

using KernelKind = std::variant<GaussianKernel, ExponentialKernel, PeriodizedGaussianKernel>;

std::string kernel_name(const KernelKind& kind);

/// Analytic value J(x).
double kernel_value(const KernelKind& kind, double x);

/// Continuous transform J^(xi) = (1/sqrt(2 pi)) int e^{-i x xi} J(x) dx where a
/// closed form exists (Gaussian, Exponential); nullopt otherwise.
std::optional<double> kernel_fourier(const KernelKind& kind, double xi);

/// A kernel sampled on a grid. samples[j] = J(x_0 - x_j) with periodic
/// distance, so samples[j] == samples[n-j]; dft is the grid-scaled transform
/// of the samples.
struct Kernel {
  KernelKind kind;
  Grid grid;
  std::vector<double> samples;
  SpectralVector dft;

  /// h * sum_j samples_j
  double mass() const;
};

Kernel make_kernel(const KernelKind& kind, const Grid& grid);

/// Rebuilds `dft` after samples were edited in place.
void refresh_dft(Kernel& kernel);

struct HypothesisReport {
  bool h1_nonnegative = false;
  bool h2_unit_mass = false;
  bool h3_symmetric = false;
  bool h4_monotone = false;
  bool h5_nonnegative_transform = false;
  bool h6_transform_decreasing = false;
  /// 0 <= J~(0) and J~(xi) <= J~(0) <= sqrt(2/pi) + J~(xi) on all grid frequencies.
  bool dft_bounds = false;
  double mass = 0.0;

  bool all() const noexcept {
    return h1_nonnegative && h2_unit_mass && h3_symmetric && h4_monotone && h5_nonnegative_transform &&
           h6_transform_decreasing && dft_bounds;
  }
};

HypothesisReport check_hypotheses(const Kernel& kernel);

struct TruncationBounds {
  double a_bound;
  double b_bound;
  double delta;
  double epsilon;
};

/// A = sqrt(-2 delta^2 log(delta eps sqrt(2 pi))), B = -A. Requires
/// delta*eps*sqrt(2 pi) < 1, else DomainError.
TruncationBounds truncation_bounds(double delta, double epsilon = 1e-8);

}  // namespace pide
