#include "jrs/primal_dual.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace jrs {

PrimalDualResult primal_dual(const PrimalDualProblem& problem, const Matrix& x0,
                             const PrimalDualOptions& options, const std::optional<Matrix>& p0) {
  if (!(problem.op_norm > 0.0)) throw std::invalid_argument("primal_dual: operator norm must be positive");
  if (problem.gamma < 0.0) throw std::invalid_argument("primal_dual: gamma must be non-negative");

  double dt1 = options.dual_step.value_or(1.0 / problem.op_norm);
  double dt2 = options.primal_step.value_or(0.99 / problem.op_norm);

  PrimalDualResult res;
  res.x = x0;
  res.p = p0 ? *p0 : problem.op(x0);
  Matrix x_bar = x0;
  int calm = 0;
  for (int it = 1; it <= options.max_iters; ++it) {
    res.p = problem.prox_dual(res.p + dt1 * problem.op(x_bar), dt1);
    Matrix x_new = problem.prox_primal(res.x - dt2 * problem.op_adjoint(res.p), dt2);
    const double theta = 1.0 / std::sqrt(1.0 + 2.0 * problem.gamma * dt2);
    dt1 /= theta;
    dt2 *= theta;

    const double change = (x_new - res.x).norm();
    const double size = x_new.norm();
    x_bar = x_new + theta * (x_new - res.x);
    res.x = std::move(x_new);
    res.iterations = it;
    if (options.observer) options.observer(it, res.x);

    const bool small = size > 0.0 ? change <= options.tolerance * size : change == 0.0;
    calm = small ? calm + 1 : 0;
    if (calm >= options.patience) {
      res.converged = true;
      break;
    }
  }
  res.dual_step = dt1;
  res.primal_step = dt2;
  return res;
}

QuadraticFidelityProx::QuadraticFidelityProx(ForwardModel model, ImageField observed, double alpha,
                                             double eta, ImageField anchor, double tolerance,
                                             int max_iters)
    : model_(model),
      observed_(std::move(observed)),
      adjoint_observed_(model_.adjoint(observed_)),
      alpha_(alpha),
      eta_(eta),
      anchor_(std::move(anchor)),
      tolerance_(tolerance),
      max_iters_(max_iters) {
  if (alpha < 0.0 || eta < 0.0) {
    throw std::invalid_argument("QuadraticFidelityProx: alpha and eta must be non-negative");
  }
  require_same_shape(observed_, anchor_, "QuadraticFidelityProx");
}

double QuadraticFidelityProx::contraction(double dt) const {
  const double norm = model_.operator_norm_bound();
  return 2.0 * alpha_ * norm * norm / (2.0 * eta_ + 1.0 / dt);
}

void QuadraticFidelityProx::check_step(double dt) const {
  if (model_.kind() == ModelKind::identity || alpha_ == 0.0) return;
  const double zeta = contraction(dt);
  if (zeta >= 1.0) {
    std::ostringstream msg;
    msg << "fixed-point prox does not contract: need alpha < eta + 1/(2 dt), got alpha = "
        << alpha_ << ", eta = " << eta_ << ", dt = " << dt << " (zeta = " << zeta << ")";
    throw std::invalid_argument(msg.str());
  }
}

ImageField QuadraticFidelityProx::operator()(const ImageField& x, double dt) const {
  require_same_shape(x, anchor_, "QuadraticFidelityProx");
  const double a = 2.0 * eta_ + 1.0 / dt;
  const Matrix rhs =
      2.0 * alpha_ * adjoint_observed_.values + 2.0 * eta_ * anchor_.values + x.values / dt;
  if (model_.kind() == ModelKind::identity || alpha_ == 0.0) {
    const double diag = model_.kind() == ModelKind::identity ? a + 2.0 * alpha_ : a;
    return ImageField(x.grid, rhs / diag);
  }
  check_step(dt);
  ImageField cur(x.grid, rhs);
  for (int m = 0; m < max_iters_; ++m) {
    ImageField next(x.grid, (rhs - 2.0 * alpha_ * model_.normal(cur).values) / a);
    const double diff = (next.values - cur.values).norm();
    const double size = cur.values.norm();
    if (trace_) trace_->push_back(diff);
    cur = std::move(next);
    if (diff <= tolerance_ * size) break;
  }
  return cur;
}

double QuadraticFidelityProx::value(const ImageField& x) const {
  const double fit = (model_.apply(x).values - observed_.values).squaredNorm();
  const double anchor = (x.values - anchor_.values).squaredNorm();
  return alpha_ * fit + eta_ * anchor;
}

double huber_tv_objective(const ImageField& x, const HuberTV& huber,
                          const QuadraticFidelityProx& prox) {
  return huber_value(grad(x), huber) + prox.value(x);
}

TVSolveResult solve_huber_tv(const ImageField& x0, const HuberTV& huber,
                             const QuadraticFidelityProx& prox, PrimalDualOptions options,
                             std::optional<double> gamma) {
  huber.validate();
  const PixelGrid grid = x0.grid;
  const double norm = gradient_norm_bound();
  if (!options.primal_step && prox.model().kind() != ModelKind::identity) {
    const double dt2 = 0.99 / norm;
    if (prox.contraction(dt2) > 0.5) {
      // zeta(dt) = 1/2 solved for dt; keep dt1 dt2 |K|^2 = 1
      const double t = prox.model().operator_norm_bound();
      const double shrunk = 1.0 / (4.0 * prox.alpha() * t * t - 2.0 * prox.eta());
      options.primal_step = shrunk;
      options.dual_step = 1.0 / (norm * norm * shrunk);
    }
  }

  PrimalDualProblem problem;
  problem.op = [grid](const Matrix& x) { return grad(ImageField(grid, x)).values; };
  problem.op_adjoint = [grid](const Matrix& p) {
    return Matrix(-div(GradientField(grid, p)).values);
  };
  problem.prox_dual = [grid, huber](const Matrix& p, double dt) {
    return prox_R_star(GradientField(grid, p), dt, huber).values;
  };
  problem.prox_primal = [grid, &prox](const Matrix& x, double dt) {
    return prox(ImageField(grid, x), dt).values;
  };
  problem.op_norm = norm;
  problem.gamma = gamma.value_or(2.0 * prox.eta());

  PrimalDualResult pd = primal_dual(problem, x0.values, options);
  return {ImageField(grid, std::move(pd.x)), pd.iterations, pd.converged};
}

}  // namespace jrs
