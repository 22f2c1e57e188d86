#include <cmath>
#include <numbers>

#include <doctest.h>

#include "oracles.hpp"
#include "pide/errors.hpp"
#include "pide/grid_kernel.hpp"

using namespace pide;

TEST_CASE("make_grid") {
  const Grid g = make_grid(8, 0.0, 1.0);
  CHECK(g.spacing() == 0.125);
  const auto x = g.nodes();
  REQUIRE(x.size() == 8);
  for (std::size_t j = 0; j < 8; ++j) CHECK(x[j] == doctest::Approx(0.125 * j));
  const Grid big = make_grid(1024, 0.0, 1.0);
  CHECK(big.spacing() == 1.0 / 1024);
  CHECK(big.node(512) == 0.5);

  CHECK_THROWS_AS(make_grid(4, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(100, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(16, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_WITH_AS(make_grid(12, 0.0, 1.0), doctest::Contains("power of two"), InvalidArgument);
}

TEST_CASE("coarsening halves down to four points") {
  Grid g = make_grid(16, -1.0, 3.0);
  g = g.coarsened();
  CHECK(g.n_points() == 8);
  g = g.coarsened();
  CHECK(g.n_points() == 4);
  CHECK(g.spacing() == 1.0);
  CHECK(g.left() == -1.0);
  CHECK_THROWS_AS(g.coarsened(), InvalidArgument);
}

TEST_CASE("kernel values") {
  CHECK(kernel_value(GaussianKernel{100.0}, 0.0) == doctest::Approx(5.641895835).epsilon(1e-9));
  CHECK(kernel_value(ExponentialKernel{}, 0.0) == 0.5);
  CHECK(kernel_value(ExponentialKernel{}, -2.0) == doctest::Approx(0.5 * std::exp(-2.0)));
  const PeriodizedGaussianKernel p{100.0, 1.0, 3};
  double images = 0.0;
  for (int r = -3; r <= 3; ++r) images += kernel_value(GaussianKernel{100.0}, 0.3 - r);
  CHECK(kernel_value(p, 0.3) == doctest::Approx(images).epsilon(1e-14));
  CHECK_THROWS_AS(kernel_value(GaussianKernel{-1.0}, 0.0), InvalidArgument);
}

TEST_CASE("closed-form continuous transforms match quadrature") {
  for (const KernelKind& kind : {KernelKind{GaussianKernel{3.0}}, KernelKind{ExponentialKernel{}}}) {
    for (double xi : {0.0, 0.7, 2.5}) {
      // Trapezoid rule on [-40, 40] of J(x) cos(x xi) / sqrt(2 pi).
      const int m = 400000;
      const double a = 40.0, dx = 2.0 * a / m;
      double s = 0.0;
      for (int i = 0; i <= m; ++i) {
        const double x = -a + i * dx;
        s += (i == 0 || i == m ? 0.5 : 1.0) * kernel_value(kind, x) * std::cos(x * xi);
      }
      s *= dx / std::sqrt(2.0 * std::numbers::pi);
      CHECK(*kernel_fourier(kind, xi) == doctest::Approx(s).epsilon(1e-6));
    }
  }
  CHECK_FALSE(kernel_fourier(PeriodizedGaussianKernel{}, 0.0).has_value());
}

TEST_CASE("kernel samples, mass and transform") {
  const Grid g = make_grid(512, 0.0, 1.0);
  const Kernel k = make_kernel(PeriodizedGaussianKernel{100.0, 1.0, 3}, g);
  double brute = 0.0;
  for (std::size_t j = 0; j < 512; ++j) brute += g.spacing() * kernel_value(k.kind, std::min(j, 512 - j) * g.spacing());
  CHECK(k.mass() == doctest::Approx(brute).epsilon(1e-14));
  CHECK(std::abs(k.mass() - 1.0) <= 1e-6);
  for (std::size_t j = 1; j < 512; ++j) CHECK(k.samples[j] == k.samples[512 - j]);
  for (const auto& c : k.dft.coefficients) CHECK(std::abs(c.imag()) <= 1e-12);

  const auto slow = oracle::naive_dft(k.samples, g.spacing());
  for (std::size_t i = 0; i < 512; i += 37) CHECK(std::abs(k.dft.coefficients[i] - slow[i]) < 1e-12);

  for (double omega : {50.0, 400.0}) {
    const Kernel gk = make_kernel(GaussianKernel{omega}, make_grid(256, 0.0, 1.0));
    CHECK(std::abs(gk.mass() - 1.0) <= 1e-6);
  }
}

TEST_CASE("make_kernel argument checks") {
  const Grid g = make_grid(64, 0.0, 2.0);
  CHECK_THROWS_AS(make_kernel(PeriodizedGaussianKernel{100.0, 1.0, 3}, g), InvalidArgument);
  CHECK_THROWS_AS(make_kernel(PeriodizedGaussianKernel{100.0, 2.0, 0}, g), InvalidArgument);
  CHECK_THROWS_AS(make_kernel(GaussianKernel{0.0}, g), InvalidArgument);
}

TEST_CASE("hypotheses") {
  const Grid g = make_grid(512, 0.0, 1.0);
  const auto report = check_hypotheses(make_kernel(PeriodizedGaussianKernel{100.0, 1.0, 3}, g));
  CHECK(report.h1_nonnegative);
  CHECK(report.h2_unit_mass);
  CHECK(report.h3_symmetric);
  CHECK(report.h4_monotone);
  CHECK(report.h5_nonnegative_transform);
  CHECK(report.h6_transform_decreasing);
  CHECK(report.dft_bounds);
  CHECK(report.all());

  const auto e = check_hypotheses(make_kernel(ExponentialKernel{}, make_grid(256, 0.0, 1.0)));
  CHECK(e.h1_nonnegative);
  CHECK(e.h3_symmetric);
  CHECK(e.h4_monotone);
  CHECK_FALSE(e.h2_unit_mass);  // one unit of length holds far less than the full mass

  Kernel broken = make_kernel(GaussianKernel{100.0}, g);
  broken.samples[3] = -broken.samples[3];
  refresh_dft(broken);
  const auto b = check_hypotheses(broken);
  CHECK_FALSE(b.h1_nonnegative);
  CHECK_FALSE(b.h3_symmetric);

  // Pure and repeatable.
  const auto again = check_hypotheses(broken);
  CHECK(again.mass == b.mass);
  CHECK(again.all() == b.all());
}

TEST_CASE("truncation bounds") {
  const auto t = truncation_bounds(0.1, 0.01);
  CHECK(t.a_bound == doctest::Approx(0.34608).epsilon(1e-4));
  CHECK(t.b_bound == -t.a_bound);
  CHECK_THROWS_AS(truncation_bounds(1.0, 1.0), DomainError);
  const double delta = 0.3;
  const double eps = std::exp(-1.0) / (delta * std::sqrt(2.0 * std::numbers::pi));
  CHECK(truncation_bounds(delta, eps).a_bound == doctest::Approx(std::sqrt(2.0) * delta).epsilon(1e-12));
  CHECK(truncation_bounds(0.2).epsilon == 1e-8);
}
