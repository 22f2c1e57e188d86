#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace oracle {

std::vector<cplx> naive_dft(std::span<const double> v, double h) {
  const int n = static_cast<int>(v.size());
  std::vector<cplx> out(v.size());
  for (int m = -n / 2; m < n / 2; ++m) {
    const double xi = 2.0 * std::numbers::pi * m / (n * h);
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) s += std::polar(v[j], -h * j * xi);
    out[m + n / 2] = h / std::sqrt(2.0 * std::numbers::pi) * s;
  }
  return out;
}

Eigen::MatrixXd dense_operator(const pide::Grid& grid, const pide::ModelParams& p, const pide::KernelKind& kind,
                               pide::Scheme scheme, bool one_sided) {
  const int n = static_cast<int>(grid.n_points());
  const double h = grid.spacing();
  const double dt = p.dt;
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n), d1 = d2, k = d2, id = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    const int up = (i + 1) % n, down = (i + n - 1) % n;
    d2(i, up) += 1.0 / (h * h);
    d2(i, down) += 1.0 / (h * h);
    d2(i, i) -= 2.0 / (h * h);
    if (one_sided) {
      d1(i, up) += 1.0 / h;
      d1(i, i) -= 1.0 / h;
    } else {
      d1(i, up) += 0.5 / h;
      d1(i, down) -= 0.5 / h;
    }
    for (int j = 0; j < n; ++j) {
      const int gap = std::abs(i - j);
      const double dist = std::min(gap, n - gap) * h;
      const double w = h * pide::kernel_value(kind, dist);
      k(i, j) += w;
      k(i, i) -= w;
    }
  }
  switch (scheme) {
    case pide::Scheme::Implicit:
      return (1.0 + p.r * dt) * id - dt * p.sigma * d2 - dt * p.mu * d1 - dt * p.lambda * k;
    case pide::Scheme::Explicit:
      return (1.0 - p.r * dt) * id + dt * p.sigma * d2 + dt * p.mu * d1 + dt * p.lambda * k;
    case pide::Scheme::ImexImplicitPart:
      return (1.0 + p.r * dt) * id - dt * p.sigma * d2;
    case pide::Scheme::ImexExplicitPart:
      return id + dt * p.mu * d1 + dt * p.lambda * k;
  }
  return id;
}

cplx mode_eigenvalue(const Eigen::MatrixXd& a, int m, double* residual) {
  const int n = static_cast<int>(a.rows());
  Eigen::VectorXcd f(n);
  for (int j = 0; j < n; ++j) f(j) = std::polar(1.0, 2.0 * std::numbers::pi * m * j / n);
  const Eigen::VectorXcd af = a.cast<cplx>() * f;
  const cplx lambda = af(0) / f(0);
  if (residual) *residual = (af - lambda * f).cwiseAbs().maxCoeff();
  return lambda;
}

void sor_sweep(const Eigen::MatrixXd& a, std::vector<double>& u, std::span<const double> b, double omega) {
  const int n = static_cast<int>(a.rows());
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int j = 0; j < n; ++j) {
      if (j != i) s -= a(i, j) * u[j];
    }
    u[i] = (1.0 - omega) * u[i] + omega * s / a(i, i);
  }
}

std::vector<double> dense_solve(const Eigen::MatrixXd& a, std::span<const double> b) {
  const Eigen::VectorXd x =
      a.fullPivLu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
  return {x.data(), x.data() + x.size()};
}

std::vector<double> matvec(const Eigen::MatrixXd& a, std::span<const double> x) {
  const Eigen::VectorXd y = a * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  return {y.data(), y.data() + y.size()};
}

double rel_diff(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace oracle
