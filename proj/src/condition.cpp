#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "pide/errors.hpp"
#include "pide/solvers.hpp"

namespace pide {

namespace {

double ratio(double largest, double smallest) {
  if (!(smallest > 0.0) || smallest <= largest * std::numeric_limits<double>::epsilon()) {
    throw SingularityError("condition_estimate: operator is singular");
  }
  return largest / smallest;
}

// x -> D A D x with D = M^{-1/2}.
void sandwich(const SystemOperator& op, const Preconditioner& pre, std::span<const double> x, std::span<double> out) {
  std::vector<double> a(x.size()), b(x.size());
  pre.apply_sqrt(x, a);
  op.apply(a, b);
  pre.apply_sqrt(b, out);
}

double dense_sandwich_condition(const SystemOperator& op, const Preconditioner& pre) {
  const std::size_t n = op.size();
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd b(ni, ni);
  std::vector<double> e(n, 0.0), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    sandwich(op, pre, e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  const Eigen::MatrixXd sym = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  const auto ev = solver.eigenvalues().cwiseAbs();
  return ratio(ev.maxCoeff(), ev.minCoeff());
}

// Lanczos with full reorthogonalization (two passes); extremal Ritz values of the sandwich.
double lanczos_sandwich_condition(const SystemOperator& op, const Preconditioner& pre) {
  const std::size_t n = op.size();
  const int steps = static_cast<int>(std::min<std::size_t>(n, 300));
  std::mt19937_64 rng(20240607);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  std::vector<double> q(n), w(n);
  for (double& v : q) v = normal(rng);
  double nq = std::sqrt(std::inner_product(q.begin(), q.end(), q.begin(), 0.0));
  for (double& v : q) v /= nq;
  for (int k = 0; k < steps; ++k) {
    basis.push_back(q);
    sandwich(op, pre, q, w);
    const double a = std::inner_product(w.begin(), w.end(), q.begin(), 0.0);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& v : basis) {
        const double c = std::inner_product(w.begin(), w.end(), v.begin(), 0.0);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * v[i];
      }
    }
    const double b = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (b < 1e-12 * std::abs(a)) break;
    beta.push_back(b);
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / b;
  }
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXd diag(m), sub(std::max<Eigen::Index>(m - 1, 1));
  for (Eigen::Index i = 0; i < m; ++i) diag(i) = alpha[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(std::max<Eigen::Index>(m - 1, 0)), Eigen::EigenvaluesOnly);
  const auto ev = solver.eigenvalues().cwiseAbs();
  return ratio(ev.maxCoeff(), ev.minCoeff());
}

}  // namespace

double condition_estimate(const SystemOperator& op, const Preconditioner* pre) {
  const auto& spectrum = op.spectrum();
  const std::size_t n = spectrum.size();
  if (pre == nullptr || pre->kind() == PreconditionerKind::None) {
    double largest = 0.0, smallest = std::numeric_limits<double>::infinity();
    for (const auto& ev : spectrum) {
      largest = std::max(largest, std::abs(ev));
      smallest = std::min(smallest, std::abs(ev));
    }
    return ratio(largest, smallest);
  }
  if (pre->size() != n) throw InvalidArgument("condition_estimate: preconditioner size does not match");
  if (!op.is_symmetric()) throw InvalidArgument("condition_estimate: preconditioned estimate needs a symmetric operator");

  if (pre->kind() == PreconditionerKind::Fsp) {
    const auto& w = pre->diagonal_weights();
    double largest = 0.0, smallest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      const double v = std::abs(spectrum[k]) * w[std::min(k, n - k)];
      largest = std::max(largest, v);
      smallest = std::min(smallest, v);
    }
    return ratio(largest, smallest);
  }
  return n <= 1024 ? dense_sandwich_condition(op, *pre) : lanczos_sandwich_condition(op, *pre);
}

}  // namespace pide
