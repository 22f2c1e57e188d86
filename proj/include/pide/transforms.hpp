#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pide {

/// Grid-scaled DFT coefficients
///   v~(xi_m) = h / sqrt(2 pi) * sum_j exp(-i h j xi_m) v_j,
/// stored in centered order: coefficients[i] belongs to frequency index
/// m = i - N/2, i.e. m runs over {-N/2, ..., N/2-1}, and xi_m = 2 pi m / (N h)
/// lies in [-pi/h, pi/h).
struct SpectralVector {
  std::vector<std::complex<double>> coefficients;
  double grid_spacing = 1.0;

  std::size_t size() const noexcept { return coefficients.size(); }

  /// Frequency index m of storage slot i.
  int frequency_index(std::size_t i) const noexcept {
    return static_cast<int>(i) - static_cast<int>(size() / 2);
  }
  /// Storage slot of frequency index m (m taken modulo N).
  std::size_t slot(int m) const noexcept;
  /// Angular frequency xi of storage slot i.
  double xi(std::size_t i) const noexcept;

  const std::complex<double>& at_frequency(int m) const { return coefficients[slot(m)]; }
};

SpectralVector dft(std::span<const double> values, double spacing);

/// Inverse of dft. Throws NumericalConsistencyError if the reconstruction
/// carries an imaginary part above 1e-8 (relative), i.e. the spectrum was not
/// the transform of real data.
std::vector<double> idft(const SpectralVector& spec);

/// | int |v~|^2 dxi  -  sum h |v_m|^2 |, with the frequency integral taken as
/// the quadrature over the N grid frequencies.
double parseval_gap(std::span<const double> values, double spacing);

/// Periodic orthogonal Daubechies decomposition.
///   detail_bands[0] is the finest band (scale index `levels`),
///   detail_bands[levels-1] the coarsest (scale index 1),
///   approximation carries scale index 0.
struct WaveletDecomposition {
  int levels = 0;
  std::vector<std::vector<double>> detail_bands;
  std::vector<double> approximation;
  int filter_order = 2;

  std::size_t total_size() const noexcept;
};

WaveletDecomposition dwt(std::span<const double> values, int levels, int filter_order);
std::vector<double> idwt(const WaveletDecomposition& decomp);

/// Scaling (low-pass) filter with filter_order taps, filter_order/2 vanishing
/// moments; sums to sqrt(2). filter_order must be even and in [2, 12].
std::span<const double> daubechies_filter(int filter_order);

/// Maximum number of dwt levels supported for a signal of length n.
int max_dwt_levels(std::size_t n) noexcept;

}  // namespace pide
