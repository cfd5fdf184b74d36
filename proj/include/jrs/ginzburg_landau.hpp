#pragma once

#include "jrs/nystrom.hpp"

namespace jrs {

/// 1/2 x (1 - x) on [0, 1], +infinity elsewhere.
double double_obstacle(double x);

/// G(u) = -u u^T + v 1^T + 1 v^T, kept as the pair (u, v).
struct GLRankForm {
  Vector u;
  Vector v;

  double entry(Index i, Index j) const { return -u(i) * u(j) + v(i) + v(j); }
};

/// Entries within 1e-9 of [0, 1] are clipped before W is evaluated.
inline constexpr double kLabelClipTolerance = 1e-9;

/// Returns u clipped into [0, 1]; throws std::domain_error for larger violations.
Vector clip_labels(const Vector& u);

/// v_i = u_i^2 / 2 + W(u_i) / (2 eps) + mu_i (u_i - f_i)^2 / 4.
GLRankForm gl_rank_form(const Vector& u, double epsilon, const Vector& mu, const Vector& f);

/// <G(u), omega>_F for an explicit weight matrix.
double gl_energy(const GLRankForm& g, const Matrix& omega);

/// -u^T (omega u) + 2 v^T (omega 1) using two operator products.
double gl_energy(const GLRankForm& g, const WeightOperator& omega);

/// Streams the pairwise weights of `weights` without storing them.
double gl_energy(const GLRankForm& g, const WeightFunction& weights);

}  // namespace jrs
