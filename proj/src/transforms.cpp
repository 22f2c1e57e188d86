#include "pide/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pide/errors.hpp"
#include "pide/fft.hpp"

namespace pide {

namespace {

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

std::size_t SpectralVector::slot(int m) const noexcept {
  const auto n = static_cast<long>(size());
  long k = (static_cast<long>(m) + n / 2) % n;
  if (k < 0) k += n;
  return static_cast<std::size_t>(k);
}

double SpectralVector::xi(std::size_t i) const noexcept {
  return 2.0 * std::numbers::pi * frequency_index(i) / (static_cast<double>(size()) * grid_spacing);
}

SpectralVector dft(std::span<const double> values, double spacing) {
  const std::size_t n = values.size();
  if (!power_of_two(n)) throw InvalidArgument("dft: length must be a power of two");
  if (!(spacing > 0.0)) throw InvalidArgument("dft: spacing must be positive");

  std::vector<fft::cplx> half(n / 2 + 1);
  fft::forward_real(values, half);
  const auto natural = fft::expand_hermitian(half, n);

  const double scale = spacing / std::sqrt(2.0 * std::numbers::pi);
  SpectralVector out;
  out.grid_spacing = spacing;
  out.coefficients.resize(n);
  // natural bin k holds frequency m = k (k < N/2) or k - N.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + n / 2) % n;
    out.coefficients[i] = scale * natural[k];
  }
  return out;
}

std::vector<double> idft(const SpectralVector& spec) {
  const std::size_t n = spec.size();
  if (!power_of_two(n)) throw InvalidArgument("idft: length must be a power of two");
  if (!(spec.grid_spacing > 0.0)) throw InvalidArgument("idft: spacing must be positive");

  std::vector<fft::cplx> natural(n);
  for (std::size_t i = 0; i < n; ++i) natural[(i + n / 2) % n] = spec.coefficients[i];
  std::vector<fft::cplx> back(n);
  fft::inverse(natural, back);

  // v_j = (1/sqrt(2 pi)) * (2 pi / (N h)) * sum_m e^{i h j xi_m} v~_m
  const double scale = std::sqrt(2.0 * std::numbers::pi) / (static_cast<double>(n) * spec.grid_spacing);
  double max_re = 0.0;
  double max_im = 0.0;
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const fft::cplx v = scale * back[j];
    out[j] = v.real();
    max_re = std::max(max_re, std::abs(v.real()));
    max_im = std::max(max_im, std::abs(v.imag()));
  }
  if (max_im > 1e-8 * std::max(1.0, max_re)) {
    throw NumericalConsistencyError("idft: imaginary residue " + std::to_string(max_im) +
                                    " exceeds 1e-8; spectrum is not the transform of real data");
  }
  return out;
}

double parseval_gap(std::span<const double> values, double spacing) {
  const SpectralVector spec = dft(values, spacing);
  const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(values.size()) * spacing);
  double spectral = 0.0;
  for (const auto& c : spec.coefficients) spectral += std::norm(c);
  spectral *= dxi;
  double spatial = 0.0;
  for (double v : values) spatial += spacing * v * v;
  return std::abs(spectral - spatial);
}

}  // namespace pide
