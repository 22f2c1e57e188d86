#pragma once

// Brute-force reference implementations used only by the tests. None of them
// goes through FFTW or the circulant first-column machinery.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pide/grid_kernel.hpp"
#include "pide/operator.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// h/sqrt(2 pi) sum_j exp(-i h j xi_m) v_j for m = -N/2 .. N/2-1.
std::vector<cplx> naive_dft(std::span<const double> v, double h);

/// Dense matrix of one scheme, built entry by entry from the stencils and
/// kernel_value at the periodic node distance.
Eigen::MatrixXd dense_operator(const pide::Grid& grid, const pide::ModelParams& p, const pide::KernelKind& kind,
                               pide::Scheme scheme, bool one_sided = false);

/// Eigenvalue of a circulant matrix for Fourier mode m: (A f)_0 / f_0 with
/// f_j = exp(i 2 pi m j / N). Also returns the eigen-residual |A f - lambda f|.
cplx mode_eigenvalue(const Eigen::MatrixXd& a, int m, double* residual = nullptr);

/// Lexicographic SOR sweep on a dense matrix.
void sor_sweep(const Eigen::MatrixXd& a, std::vector<double>& u, std::span<const double> b, double omega);

std::vector<double> dense_solve(const Eigen::MatrixXd& a, std::span<const double> b);

std::vector<double> matvec(const Eigen::MatrixXd& a, std::span<const double> x);

/// Relative max-norm distance.
double rel_diff(std::span<const double> a, std::span<const double> b);

std::vector<double> random_vector(std::size_t n, unsigned seed);

}  // namespace oracle
