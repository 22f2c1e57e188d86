#include <algorithm>
#include <cmath>
#include <numbers>

#include "pide/errors.hpp"
#include "pide/fft.hpp"
#include "pide/solvers.hpp"
#include "pide/transforms.hpp"

namespace pide {

namespace {

// Band l spans |xi| in [pi/2, pi] * 2^(l - levels) / h; sigma dt xi^2 at the
// centre 3 pi/4 of that range is 4 sigma dt 4^(l - levels) / h^2 times this.
constexpr double kWdpBandCentre = 9.0 * std::numbers::pi * std::numbers::pi / 64.0;

int default_wavelet_levels(std::size_t n) { return std::max(1, max_dwt_levels(n) - 4); }

}  // namespace

Preconditioner Preconditioner::identity(std::size_t n, ApplyMode mode) {
  Preconditioner p;
  p.kind_ = PreconditionerKind::None;
  p.mode_ = mode;
  p.n_ = n;
  return p;
}

void Preconditioner::apply(std::span<const double> r, std::span<double> out) const { apply_power(r, out, 1.0); }

void Preconditioner::apply_sqrt(std::span<const double> r, std::span<double> out) const {
  apply_power(r, out, 0.5);
}

void Preconditioner::apply_power(std::span<const double> r, std::span<double> out, double power) const {
  if (r.size() != n_ || out.size() != n_) throw InvalidArgument("preconditioner: vector length mismatch");
  switch (kind_) {
    case PreconditionerKind::None:
      std::copy(r.begin(), r.end(), out.begin());
      return;
    case PreconditionerKind::Wdp: {
      auto decomp = dwt(r, levels_, filter_order_);
      for (int band = 0; band < levels_; ++band) {
        // detail_bands[band] has scale index levels - band.
        const double w = std::pow(weights_[static_cast<std::size_t>(levels_ - band)], power);
        for (double& c : decomp.detail_bands[static_cast<std::size_t>(band)]) c *= w;
      }
      const double w0 = std::pow(weights_[0], power);
      for (double& c : decomp.approximation) c *= w0;
      const auto back = idwt(decomp);
      std::copy(back.begin(), back.end(), out.begin());
      return;
    }
    case PreconditionerKind::Fsp: {
      std::vector<fft::cplx> work(n_ / 2 + 1);
      fft::forward_real(r, work);
      const double inv_n = 1.0 / static_cast<double>(n_);
      for (std::size_t k = 0; k < work.size(); ++k) {
        work[k] *= (power == 1.0 ? weights_[k] : std::pow(weights_[k], power)) * inv_n;
      }
      fft::inverse_real(work, out);
      return;
    }
  }
}

Preconditioner wdp_preconditioner(const Grid& grid, const ModelParams& params, int filter_order, int levels,
                                  ApplyMode mode) {
  daubechies_filter(filter_order);  // validates the order
  const std::size_t n = grid.n_points();
  if (levels <= 0) levels = default_wavelet_levels(n);
  if (levels > max_dwt_levels(n)) {
    throw InvalidArgument("wdp_preconditioner: grid length " + std::to_string(n) + " is not divisible by 2^" +
                          std::to_string(levels));
  }
  const double h = grid.spacing();
  Preconditioner p;
  p.kind_ = PreconditionerKind::Wdp;
  p.mode_ = mode;
  p.n_ = n;
  p.levels_ = levels;
  p.filter_order_ = filter_order;
  p.weights_.resize(static_cast<std::size_t>(levels) + 1);
  for (int scale = 0; scale <= levels; ++scale) {
    const double dyadic = std::ldexp(1.0, 2 * (scale - levels));  // 4^(scale - levels)
    p.weights_[static_cast<std::size_t>(scale)] =
        1.0 / (1.0 + params.r * params.dt + 4.0 * kWdpBandCentre * params.sigma * params.dt * dyadic / (h * h));
  }
  return p;
}

Preconditioner fsp_preconditioner(const Grid& grid, const ModelParams& params, ApplyMode mode) {
  const std::size_t n = grid.n_points();
  const double h = grid.spacing();
  Preconditioner p;
  p.kind_ = PreconditionerKind::Fsp;
  p.mode_ = mode;
  p.n_ = n;
  p.weights_.resize(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double xi = 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(n) * h);
    p.weights_[k] = 1.0 / (1.0 + params.r * params.dt + params.sigma * params.dt * xi * xi);
  }
  return p;
}

Preconditioner make_preconditioner(const SystemOperator& op, const SolverChoice& choice) {
  switch (choice.preconditioner) {
    case PreconditionerKind::None:
      return Preconditioner::identity(op.size(), choice.mode);
    case PreconditionerKind::Wdp:
      return wdp_preconditioner(op.grid(), op.params(), choice.wavelet_order, choice.wavelet_levels, choice.mode);
    case PreconditionerKind::Fsp:
      return fsp_preconditioner(op.grid(), op.params(), choice.mode);
  }
  throw InvalidArgument("make_preconditioner: unknown kind");
}

}  // namespace pide
