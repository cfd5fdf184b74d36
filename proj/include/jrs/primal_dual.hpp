#pragma once

#include "jrs/forward_model.hpp"
#include "jrs/huber_tv.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace jrs {

/// min_x R(K x) + G(x), given through K, K^*, prox_{dt R^*} and prox_{dt G}.
struct PrimalDualProblem {
  using LinearMap = std::function<Matrix(const Matrix&)>;
  using Prox = std::function<Matrix(const Matrix&, double)>;

  LinearMap op;
  LinearMap op_adjoint;
  Prox prox_dual;
  Prox prox_primal;
  double op_norm = 1.0;
  double gamma = 0.0;  // strong convexity modulus of G; 0 disables acceleration
};

struct PrimalDualOptions {
  int max_iters = 500;
  double tolerance = 1e-6;  // relative primal change
  int patience = 3;         // consecutive iterations below tolerance
  /// Initial steps; default to 1/|K| and 0.99/|K|.
  std::optional<double> dual_step;
  std::optional<double> primal_step;
  /// Called after each iteration with the new primal iterate.
  std::function<void(int, const Matrix&)> observer;
};

struct PrimalDualResult {
  Matrix x;
  Matrix p;
  int iterations = 0;
  bool converged = false;
  double dual_step = 0.0;
  double primal_step = 0.0;
};

/// Accelerated primal-dual iteration with theta = (1 + 2 gamma dt2)^-1/2.
/// The dual variable starts at p0 = K x0 unless `p0` is given.
PrimalDualResult primal_dual(const PrimalDualProblem& problem, const Matrix& x0,
                             const PrimalDualOptions& options = {},
                             const std::optional<Matrix>& p0 = std::nullopt);

/// Resolvent of G(x) = alpha |T x - y|^2 + eta |x - x_tilde|^2, i.e. the solution of
///   ((1/dt + 2 eta) I + 2 alpha T^*T) x' = 2 alpha T^* y + 2 eta x_tilde + x / dt.
/// The identity model is solved in closed form; otherwise a fixed-point
/// iteration is used, which needs the contraction factor below to be < 1.
class QuadraticFidelityProx {
 public:
  QuadraticFidelityProx(ForwardModel model, ImageField observed, double alpha, double eta,
                        ImageField anchor, double tolerance = 1e-8, int max_iters = 100);

  ImageField operator()(const ImageField& x, double dt) const;

  /// zeta = 2 alpha |T|^2 / (2 eta + 1/dt).
  double contraction(double dt) const;

  /// Throws std::invalid_argument if the fixed-point route would not contract at step dt.
  void check_step(double dt) const;

  /// When set, receives |x^{m+1} - x^m|_F of every fixed-point sweep.
  void record_differences(std::vector<double>* sink) const { trace_ = sink; }

  double value(const ImageField& x) const;
  const ForwardModel& model() const { return model_; }
  double alpha() const { return alpha_; }
  double eta() const { return eta_; }
  const ImageField& anchor() const { return anchor_; }

 private:
  ForwardModel model_;
  ImageField observed_;
  ImageField adjoint_observed_;  // T^* y
  double alpha_;
  double eta_;
  ImageField anchor_;
  double tolerance_;
  int max_iters_;
  mutable std::vector<double>* trace_ = nullptr;
};

struct TVSolveResult {
  ImageField x;
  int iterations = 0;
  bool converged = false;
};

/// min_x HuberTV(grad x) + alpha |T x - y|^2 + eta |x - anchor|^2 by primal-dual
/// with gamma = 2 eta unless given. Step sizes are shrunk when needed so that
/// the fixed-point prox contracts with factor <= 1/2.
TVSolveResult solve_huber_tv(const ImageField& x0, const HuberTV& huber,
                             const QuadraticFidelityProx& prox, PrimalDualOptions options = {},
                             std::optional<double> gamma = std::nullopt);

/// HuberTV(grad x) + alpha |T x - y|^2 + eta |x - anchor|^2.
double huber_tv_objective(const ImageField& x, const HuberTV& huber,
                          const QuadraticFidelityProx& prox);

}  // namespace jrs
