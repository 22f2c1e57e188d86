#include "pide/grid_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <type_traits>

#include "pide/errors.hpp"

namespace pide {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;  // sqrt(2 pi)

double gaussian(double omega, double x) { return std::sqrt(omega / std::numbers::pi) * std::exp(-omega * x * x); }

void require_positive_omega(double omega) {
  if (!(omega > 0.0)) throw InvalidArgument("kernel: omega must be positive, got " + std::to_string(omega));
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n_points_);
  for (std::size_t j = 0; j < n_points_; ++j) x[j] = node(j);
  return x;
}

Grid Grid::coarsened() const {
  // Multigrid may coarsen below the 8-point floor of make_grid, down to 4.
  if (n_points_ < 8) throw InvalidArgument("Grid::coarsened: a coarse grid needs at least 4 points");
  return Grid(n_points_ / 2, left_, right_);
}

Grid make_grid(std::size_t n_points, double left, double right) {
  if (!is_power_of_two(n_points)) {
    throw InvalidArgument("make_grid: n_points must be a power of two, got " + std::to_string(n_points));
  }
  if (n_points < 8) throw InvalidArgument("make_grid: n_points must be at least 8, got " + std::to_string(n_points));
  if (!(right > left)) throw InvalidArgument("make_grid: right must exceed left");
  return Grid(n_points, left, right);
}

std::string kernel_name(const KernelKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianKernel>) return "gaussian";
        else if constexpr (std::is_same_v<K, ExponentialKernel>) return "exponential";
        else return "periodized_gaussian";
      },
      kind);
}

double kernel_value(const KernelKind& kind, double x) {
  return std::visit(
      [x](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianKernel>) {
          require_positive_omega(k.omega);
          return gaussian(k.omega, x);
        } else if constexpr (std::is_same_v<K, ExponentialKernel>) {
          return 0.5 * std::exp(-std::abs(x));
        } else {
          require_positive_omega(k.omega);
          double sum = 0.0;
          for (int r = -k.shift_terms; r <= k.shift_terms; ++r) sum += gaussian(k.omega, x - r * k.period);
          return sum;
        }
      },
      kind);
}

std::optional<double> kernel_fourier(const KernelKind& kind, double xi) {
  return std::visit(
      [xi](const auto& k) -> std::optional<double> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianKernel>) {
          return std::exp(-xi * xi / (4.0 * k.omega)) / kSqrt2Pi;
        } else if constexpr (std::is_same_v<K, ExponentialKernel>) {
          return 1.0 / (kSqrt2Pi * (1.0 + xi * xi));
        } else {
          return std::nullopt;
        }
      },
      kind);
}

double Kernel::mass() const {
  double sum = 0.0;
  for (double s : samples) sum += s;
  return grid.spacing() * sum;
}

void refresh_dft(Kernel& kernel) { kernel.dft = pide::dft(kernel.samples, kernel.grid.spacing()); }

Kernel make_kernel(const KernelKind& kind, const Grid& grid) {
  if (const auto* p = std::get_if<PeriodizedGaussianKernel>(&kind)) {
    if (p->shift_terms < 1) throw InvalidArgument("make_kernel: shift_terms must be at least 1");
    if (std::abs(p->period - grid.length()) > 1e-12 * grid.length()) {
      throw InvalidArgument("make_kernel: periodized kernel period must equal the grid length");
    }
  }

  const std::size_t n = grid.n_points();
  const double h = grid.spacing();
  Kernel kernel{kind, grid, std::vector<double>(n), {}};
  for (std::size_t j = 0; j < n; ++j) {
    // Integer periodic distance keeps samples[j] == samples[n-j] bit for bit.
    const std::size_t k = std::min(j, n - j);
    kernel.samples[j] = kernel_value(kind, static_cast<double>(k) * h);
  }
  refresh_dft(kernel);
  return kernel;
}

HypothesisReport check_hypotheses(const Kernel& kernel) {
  HypothesisReport report;
  const auto& s = kernel.samples;
  const std::size_t n = s.size();

  report.h1_nonnegative = std::all_of(s.begin(), s.end(), [](double v) { return v >= 0.0; });

  report.mass = kernel.mass();
  report.h2_unit_mass = std::abs(report.mass - 1.0) <= 1e-6;

  report.h3_symmetric = true;
  for (std::size_t j = 1; j < n; ++j) {
    if (std::abs(s[j] - s[n - j]) > 1e-12) report.h3_symmetric = false;
  }

  report.h4_monotone = true;
  for (std::size_t j = 1; j < n / 2; ++j) {
    if (s[j + 1] > s[j]) report.h4_monotone = false;
  }

  const auto& spec = kernel.dft;
  report.h5_nonnegative_transform =
      std::all_of(spec.coefficients.begin(), spec.coefficients.end(), [](const auto& c) { return c.real() >= -1e-12; });

  // xi >= 0 covers m = 0..N/2; m = N/2 is stored as -N/2 (same value by symmetry).
  report.h6_transform_decreasing = true;
  const int half = static_cast<int>(n / 2);
  for (int m = 0; m < half; ++m) {
    if (spec.at_frequency(m + 1).real() > spec.at_frequency(m).real() + 1e-12) report.h6_transform_decreasing = false;
  }

  const double j0 = spec.at_frequency(0).real();
  const double upper_gap = std::sqrt(2.0 / std::numbers::pi);
  report.dft_bounds = j0 >= 0.0;
  for (const auto& c : spec.coefficients) {
    if (c.real() > j0 + 1e-12 || j0 > upper_gap + c.real() + 1e-12) report.dft_bounds = false;
  }
  return report;
}

TruncationBounds truncation_bounds(double delta, double epsilon) {
  if (!(delta > 0.0) || !(epsilon > 0.0)) throw InvalidArgument("truncation_bounds: delta and epsilon must be positive");
  const double arg = delta * epsilon * kSqrt2Pi;
  if (arg >= 1.0) {
    throw DomainError("truncation_bounds: delta*epsilon*sqrt(2 pi) = " + std::to_string(arg) +
                      " >= 1, no valid truncation");
  }
  const double a = std::sqrt(-2.0 * delta * delta * std::log(arg));
  return {a, -a, delta, epsilon};
}

}  // namespace pide
