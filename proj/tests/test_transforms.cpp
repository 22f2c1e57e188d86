#include <cmath>
#include <numbers>

#include <doctest.h>

#include "oracles.hpp"
#include "pide/errors.hpp"
#include "pide/transforms.hpp"

using namespace pide;

namespace {
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double energy(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double decomp_energy(const WaveletDecomposition& d) {
  double s = energy(d.approximation);
  for (const auto& band : d.detail_bands) s += energy(band);
  return s;
}
}  // namespace

TEST_CASE("dft matches the brute-force sum") {
  for (std::size_t n : {8u, 16u, 64u}) {
    const auto v = oracle::random_vector(n, 7 + static_cast<unsigned>(n));
    const double h = 0.37;
    const auto fast = dft(v, h);
    const auto slow = oracle::naive_dft(v, h);
    REQUIRE(fast.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(fast.coefficients[i] - slow[i]) < 1e-13);
  }
}

TEST_CASE("dft of a delta is flat, of a constant is a single spike") {
  std::vector<double> delta(16, 0.0);
  delta[0] = 1.0;
  const auto d = dft(delta, 1.0);
  for (const auto& c : d.coefficients) CHECK(std::abs(c - kInvSqrt2Pi) < 1e-15);

  const std::vector<double> constant(16, 2.5);
  const auto c = dft(constant, 0.25);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.frequency_index(i) == 0) {
      CHECK(std::abs(c.coefficients[i] - 0.25 * kInvSqrt2Pi * 2.5 * 16.0) < 1e-13);
    } else {
      CHECK(std::abs(c.coefficients[i]) < 1e-14);
    }
  }
}

TEST_CASE("frequency indexing is centered") {
  const auto s = dft(std::vector<double>(8, 1.0), 0.5);
  CHECK(s.frequency_index(0) == -4);
  CHECK(s.frequency_index(4) == 0);
  CHECK(s.slot(-4) == 0);
  CHECK(s.slot(3) == 7);
  CHECK(s.xi(0) == doctest::Approx(-std::numbers::pi / 0.5));
  CHECK(s.xi(5) == doctest::Approx(2.0 * std::numbers::pi / (8 * 0.5)));
}

TEST_CASE("dft round trip, linearity and real spectrum of symmetric data") {
  const auto u = oracle::random_vector(8, 1);
  CHECK(oracle::rel_diff(idft(dft(u, 0.1)), u) < 1e-12);
  const auto big = oracle::random_vector(1024, 2);
  CHECK(oracle::rel_diff(idft(dft(big, 1.0 / 1024)), big) < 1e-12);

  const auto v = oracle::random_vector(32, 3);
  const auto w = oracle::random_vector(32, 4);
  const double a = 0.7, b = -1.3;
  std::vector<double> mix(32);
  for (std::size_t i = 0; i < 32; ++i) mix[i] = a * v[i] + b * w[i];
  const auto fv = dft(v, 0.2), fw = dft(w, 0.2), fm = dft(mix, 0.2);
  for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(fm.coefficients[i] - (a * fv.coefficients[i] + b * fw.coefficients[i])) < 1e-12);

  std::vector<double> sym(32);
  for (std::size_t j = 0; j < 32; ++j) sym[j] = std::cos(0.3 * std::min(j, 32 - j));
  for (const auto& c : dft(sym, 0.1).coefficients) CHECK(std::abs(c.imag()) < 1e-12);
}

TEST_CASE("idft of zero and of a hand-computed 4-point spectrum") {
  SpectralVector zero{std::vector<std::complex<double>>(8), 0.5};
  for (double x : idft(zero)) CHECK(x == 0.0);

  // A flat spectrum of height 1/sqrt(2 pi) at h = 1 is the transform of the 4-point delta.
  SpectralVector flat{std::vector<std::complex<double>>(8, kInvSqrt2Pi), 1.0};
  const auto v = idft(flat);
  CHECK(v[0] == doctest::Approx(1.0));
  for (std::size_t j = 1; j < v.size(); ++j) CHECK(std::abs(v[j]) < 1e-15);
}

TEST_CASE("idft rejects spectra of non-real data") {
  SpectralVector s{std::vector<std::complex<double>>(8), 1.0};
  s.coefficients[5] = {0.0, 1.0};
  CHECK_THROWS_AS(idft(s), NumericalConsistencyError);
}

TEST_CASE("non power-of-two lengths are rejected") {
  CHECK_THROWS_AS(dft(std::vector<double>(12, 1.0), 1.0), InvalidArgument);
  SpectralVector s{std::vector<std::complex<double>>(6), 1.0};
  CHECK_THROWS_AS(idft(s), InvalidArgument);
}

TEST_CASE("parseval gap") {
  CHECK(parseval_gap(std::vector<double>(16, 0.0), 0.1) == 0.0);
  std::vector<double> delta(16, 0.0);
  delta[0] = 1.0;
  CHECK(parseval_gap(delta, 1.0) <= 1e-12);
  const auto v = oracle::random_vector(64, 11);
  const double h = 1.0 / 64;
  // Brute force both sides of the identity.
  const auto spec = oracle::naive_dft(v, h);
  double lhs = 0.0;
  for (const auto& c : spec) lhs += std::norm(c) * 2.0 * std::numbers::pi / (64 * h);
  CHECK(lhs == doctest::Approx(h * energy(v)).epsilon(1e-12));
  CHECK(parseval_gap(v, h) <= 1e-10 * energy(v));
}

TEST_CASE("Daubechies filters") {
  const double s3 = std::sqrt(3.0), d = 4.0 * std::sqrt(2.0);
  const std::vector<double> db4{(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d};
  const auto f4 = daubechies_filter(4);
  REQUIRE(f4.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(f4[k] == doctest::Approx(db4[k]).epsilon(1e-14));

  for (int order = 2; order <= 12; order += 2) {
    const auto f = daubechies_filter(order);
    REQUIRE(static_cast<int>(f.size()) == order);
    double sum = 0.0;
    for (double x : f) sum += x;
    CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    // Orthonormality of even shifts.
    for (int shift = 0; shift < order; shift += 2) {
      double dot = 0.0;
      for (int k = 0; k + shift < order; ++k) dot += f[k] * f[k + shift];
      CHECK(std::abs(dot - (shift == 0 ? 1.0 : 0.0)) < 1e-13);
    }
    // order/2 vanishing moments of the high-pass filter.
    for (int p = 0; p < order / 2; ++p) {
      double moment = 0.0;
      for (int k = 0; k < order; ++k) moment += (k % 2 == 0 ? 1.0 : -1.0) * std::pow(k, p) * f[k];
      CHECK(std::abs(moment) < 1e-9 * std::pow(order, p));
    }
  }
  CHECK_THROWS_AS(daubechies_filter(3), InvalidArgument);
  CHECK_THROWS_AS(daubechies_filter(14), InvalidArgument);
}

TEST_CASE("Haar arithmetic") {
  const auto c = dwt(std::vector<double>(16, 3.0), 3, 2);
  for (const auto& band : c.detail_bands) {
    for (double x : band) CHECK(std::abs(x) < 1e-14);
  }
  for (double x : c.approximation) CHECK(x == doctest::Approx(3.0 * std::pow(std::sqrt(2.0), 3)));

  const double a = 1.7;
  const auto one = dwt(std::vector<double>{a, a, a, a}, 1, 2);
  CHECK(one.approximation[0] == doctest::Approx(a * std::sqrt(2.0)));
  CHECK(std::abs(one.detail_bands[0][0]) < 1e-15);
}

TEST_CASE("dwt perfect reconstruction and energy") {
  for (int order = 2; order <= 12; order += 2) {
    const auto v = oracle::random_vector(128, static_cast<unsigned>(order));
    const auto d = dwt(v, 4, order);
    CHECK(d.total_size() == 128);
    CHECK(d.detail_bands[0].size() == 64);
    CHECK(d.approximation.size() == 8);
    CHECK(oracle::rel_diff(idwt(d), v) < 1e-10);
    CHECK(decomp_energy(d) == doctest::Approx(energy(v)).epsilon(1e-10));
  }
  const auto v = oracle::random_vector(64, 5);
  CHECK(oracle::rel_diff(idwt(dwt(v, 4, 12)), v) < 1e-10);
}

TEST_CASE("dwt preserves inner products") {
  const auto u = oracle::random_vector(64, 21), v = oracle::random_vector(64, 22);
  const auto du = dwt(u, 3, 8), dv = dwt(v, 3, 8);
  double direct = 0.0, coeff = 0.0;
  for (std::size_t i = 0; i < 64; ++i) direct += u[i] * v[i];
  for (std::size_t i = 0; i < du.approximation.size(); ++i) coeff += du.approximation[i] * dv.approximation[i];
  for (std::size_t b = 0; b < du.detail_bands.size(); ++b) {
    for (std::size_t i = 0; i < du.detail_bands[b].size(); ++i) coeff += du.detail_bands[b][i] * dv.detail_bands[b][i];
  }
  CHECK(coeff == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("idwt of zero and of a single scaling coefficient") {
  auto d = dwt(std::vector<double>(32, 0.0), 2, 6);
  for (double x : idwt(d)) CHECK(x == 0.0);
  d.approximation[3] = 1.0;
  const auto basis = idwt(d);
  CHECK(energy(basis) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dwt and idwt argument checks") {
  CHECK_THROWS_AS(dwt(std::vector<double>(24, 1.0), 4, 2), InvalidArgument);
  CHECK_THROWS_AS(dwt(std::vector<double>(16, 1.0), 0, 2), InvalidArgument);
  CHECK_THROWS_AS(dwt(std::vector<double>(16, 1.0), 2, 5), InvalidArgument);
  auto d = dwt(std::vector<double>(16, 1.0), 2, 4);
  d.detail_bands[1].pop_back();
  CHECK_THROWS_AS(idwt(d), InvalidArgument);
}
