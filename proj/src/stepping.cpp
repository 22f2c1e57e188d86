#include <chrono>
#include <cmath>

#include "pide/errors.hpp"
#include "pide/solvers.hpp"

namespace pide {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double relative_residual(const SystemOperator& op, std::span<const double> x, std::span<const double> rhs) {
  std::vector<double> ax(op.size());
  op.apply(x, ax);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    num += (rhs[i] - ax[i]) * (rhs[i] - ax[i]);
    den += rhs[i] * rhs[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::pair<std::vector<double>, SolveReport> solve_system(const SystemOperator& op, std::span<const double> rhs,
                                                         const SolverChoice& method) {
  if (rhs.size() != op.size()) throw InvalidArgument("solve: rhs length does not match operator");
  switch (method.solver) {
    case SolverKind::Direct: {
      const auto start = Clock::now();
      auto x = direct_solve(op, rhs);
      SolveReport report;
      report.wall_time = seconds_since(start);
      report.iterations = 1;
      report.residual_history = {1.0, relative_residual(op, x, rhs)};
      report.converged = true;
      return {std::move(x), report};
    }
    case SolverKind::Cg:
    case SolverKind::Bicg: {
      const auto setup = Clock::now();
      const Preconditioner pre = make_preconditioner(op, method);
      const double setup_time = seconds_since(setup);
      auto result = method.solver == SolverKind::Cg ? cg(op, rhs, pre, method.tol, method.max_iter)
                                                    : bicg(op, rhs, pre, method.tol, method.max_iter);
      result.second.setup_time = setup_time;
      return result;
    }
    case SolverKind::Mg: {
      const auto setup = Clock::now();
      const MgHierarchy hierarchy = build_hierarchy(op, method.mg);
      const double setup_time = seconds_since(setup);
      const std::vector<double> zero(op.size(), 0.0);
      auto result = mg_solve(hierarchy, rhs, zero, method.tol, method.max_iter);
      result.second.setup_time = setup_time;
      return result;
    }
  }
  throw InvalidArgument("solve: unknown solver");
}

}  // namespace

std::pair<std::vector<double>, SolveReport> solve_implicit_step(const SystemOperator& op, std::span<const double> rhs,
                                                                const SolverChoice& method) {
  if (op.scheme() != Scheme::Implicit) throw InvalidArgument("solve_implicit_step: operator is not the implicit scheme");
  return solve_system(op, rhs, method);
}

std::pair<std::vector<double>, SolveReport> step_imex(const SystemOperator& implicit_part,
                                                      const SystemOperator& explicit_part,
                                                      std::span<const double> u_prev, const SolverChoice& method) {
  if (implicit_part.scheme() != Scheme::ImexImplicitPart || explicit_part.scheme() != Scheme::ImexExplicitPart) {
    throw InvalidArgument("step_imex: expected the implicit and explicit IMEX parts");
  }
  if (!(implicit_part.grid() == explicit_part.grid()) || !(implicit_part.params() == explicit_part.params())) {
    throw InvalidArgument("step_imex: IMEX parts were assembled on different grids or parameters");
  }
  const auto rhs = pide::apply(explicit_part, u_prev);
  return solve_system(implicit_part, rhs, method);
}

}  // namespace pide
