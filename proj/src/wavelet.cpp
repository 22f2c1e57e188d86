#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "pide/errors.hpp"
#include "pide/transforms.hpp"

namespace pide {

namespace {

// Daubechies scaling filters, obtained by spectral factorization at 50-digit
// precision. kDbP has P vanishing moments and 2P taps.
constexpr std::array<double, 2> kDb1 = {
    0.707106781186547524401,
    0.707106781186547524401,
};
constexpr std::array<double, 4> kDb2 = {
    0.482962913144534143375,
    0.836516303737807905575,
    0.224143868042013381026,
    -0.129409522551260381174,
};
constexpr std::array<double, 6> kDb3 = {
    0.332670552950082615999,
    0.806891509311092576494,
    0.459877502118491570095,
    -0.135011020010254588696,
    -0.0854412738820266616928,
    0.0352262918857095366027,
};
constexpr std::array<double, 8> kDb4 = {
    0.230377813308896500863,
    0.71484657055291564709,
    0.630880767929858907882,
    -0.0279837694168598542114,
    -0.18703481171909308408,
    0.0308413818355607636272,
    0.0328830116668851997354,
    -0.0105974017850690321049,
};
constexpr std::array<double, 10> kDb5 = {
    0.160102397974192914481,
    0.60382926979718967054,
    0.724308528437772927728,
    0.138428145901320731505,
    -0.242294887066382031863,
    -0.0322448695846383746485,
    0.0775714938400457135231,
    -0.00624149021279827427419,
    -0.0125807519990819994685,
    0.003335725285473771278,
};
constexpr std::array<double, 12> kDb6 = {
    0.111540743350109463621,
    0.494623890398453085677,
    0.751133908021095350679,
    0.315250351709197629086,
    -0.226264693965439820076,
    -0.129766867567261935562,
    0.0975016055873230491023,
    0.0275228655303057286255,
    -0.0315820393174860295651,
    0.000553842201161496139252,
    0.00477725751094551063964,
    -0.00107730108530847956485,
};

// One analysis level on a periodic signal.
void analyze(std::span<const double> x, std::span<const double> h, std::vector<double>& approx,
             std::vector<double>& detail) {
  const std::size_t n = x.size();
  const std::size_t half = n / 2;
  const std::size_t taps = h.size();
  approx.assign(half, 0.0);
  detail.assign(half, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t k = 0; k < taps; ++k) {
      const double v = x[(2 * i + k) % n];
      const double hk = h[k];
      const double gk = (k % 2 == 0 ? 1.0 : -1.0) * h[taps - 1 - k];
      a += hk * v;
      d += gk * v;
    }
    approx[i] = a;
    detail[i] = d;
  }
}

// Adjoint (= inverse, the filter bank is orthogonal) of analyze.
std::vector<double> synthesize(std::span<const double> approx, std::span<const double> detail,
                               std::span<const double> h) {
  const std::size_t half = approx.size();
  const std::size_t n = 2 * half;
  const std::size_t taps = h.size();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    for (std::size_t k = 0; k < taps; ++k) {
      const double gk = (k % 2 == 0 ? 1.0 : -1.0) * h[taps - 1 - k];
      x[(2 * i + k) % n] += h[k] * approx[i] + gk * detail[i];
    }
  }
  return x;
}

}  // namespace

std::span<const double> daubechies_filter(int filter_order) {
  switch (filter_order) {
    case 2: return kDb1;
    case 4: return kDb2;
    case 6: return kDb3;
    case 8: return kDb4;
    case 10: return kDb5;
    case 12: return kDb6;
    default:
      throw InvalidArgument("daubechies_filter: filter_order must be an even number in [2, 12], got " +
                            std::to_string(filter_order));
  }
}

int max_dwt_levels(std::size_t n) noexcept {
  int levels = 0;
  while (n > 1 && n % 2 == 0) {
    n /= 2;
    ++levels;
  }
  return levels;
}

std::size_t WaveletDecomposition::total_size() const noexcept {
  std::size_t total = approximation.size();
  for (const auto& band : detail_bands) total += band.size();
  return total;
}

WaveletDecomposition dwt(std::span<const double> values, int levels, int filter_order) {
  const auto h = daubechies_filter(filter_order);
  if (levels < 1) throw InvalidArgument("dwt: levels must be positive");
  if (values.empty() || levels > max_dwt_levels(values.size())) {
    throw InvalidArgument("dwt: length " + std::to_string(values.size()) + " is not divisible by 2^" +
                          std::to_string(levels));
  }

  WaveletDecomposition out;
  out.levels = levels;
  out.filter_order = filter_order;
  out.detail_bands.resize(static_cast<std::size_t>(levels));
  std::vector<double> current(values.begin(), values.end());
  std::vector<double> approx;
  for (int level = 0; level < levels; ++level) {
    analyze(current, h, approx, out.detail_bands[static_cast<std::size_t>(level)]);
    current.swap(approx);
  }
  out.approximation = std::move(current);
  return out;
}

std::vector<double> idwt(const WaveletDecomposition& decomp) {
  const auto h = daubechies_filter(decomp.filter_order);
  if (decomp.levels < 1 || decomp.detail_bands.size() != static_cast<std::size_t>(decomp.levels)) {
    throw InvalidArgument("idwt: detail band count does not match levels");
  }
  if (decomp.approximation.empty()) throw InvalidArgument("idwt: empty approximation band");

  std::vector<double> current = decomp.approximation;
  for (int level = decomp.levels - 1; level >= 0; --level) {
    const auto& detail = decomp.detail_bands[static_cast<std::size_t>(level)];
    if (detail.size() != current.size()) {
      throw InvalidArgument("idwt: band " + std::to_string(level) + " has length " +
                            std::to_string(detail.size()) + ", expected " + std::to_string(current.size()));
    }
    current = synthesize(current, detail, h);
  }
  return current;
}

}  // namespace pide
