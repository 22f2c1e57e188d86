#pragma once

// Thin FFTW wrapper. Plans are cached per (kind, length) behind a mutex and
// executed through the new-array interface, so concurrent calls are safe.
// All transforms are unnormalized: inverse(forward(x)) == n * x.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pide::fft {

using cplx = std::complex<double>;

/// Real-to-half-complex forward transform: out[k] = sum_j in[j] e^{-2 pi i jk/n},
/// k = 0..n/2. `out` must hold n/2+1 entries.
void forward_real(std::span<const double> in, std::span<cplx> out);

/// Inverse of forward_real (times n). `in` holds n/2+1 Hermitian-half entries;
/// it is not modified.
void inverse_real(std::span<const cplx> in, std::span<double> out);

/// Full complex transforms, sign -1 (forward) and +1 (inverse).
void forward(std::span<const cplx> in, std::span<cplx> out);
void inverse(std::span<const cplx> in, std::span<cplx> out);

/// Expands a half spectrum of a real length-n signal to all n bins.
std::vector<cplx> expand_hermitian(std::span<const cplx> half, std::size_t n);

}  // namespace pide::fft
