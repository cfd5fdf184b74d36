#pragma once

#include "jrs/config.hpp"
#include "jrs/problem.hpp"

namespace jrs {

// Non-linearised subproblem solvers on dense weights. Each accepts a new
// iterate only if its subproblem objective does not increase, so the joint
// energy is non-increasing across outer iterations by construction.

struct ExactStepResult {
  int inner_iterations = 0;
  int accepted = 0;
};

/// argmin_x HuberTV(grad x) + alpha |T x - y|^2 + beta GL(u_n, Omega(F(x), z_d)) + eta |x - x_n|^2
/// approached by majorise-minimise: the coupling term is linearised at the
/// current inner iterate x^k and a proximal term rho |x - x^k|^2 is added;
/// rho grows by 4 whenever a step fails to decrease the objective.
ImageField exact_x_update(const ImageField& x_n, const Vector& u_n, const Problem& problem,
                          const JointConfig& config, ExactStepResult* info = nullptr);

/// The x-subproblem objective above.
double x_subproblem_objective(const ImageField& x, const ImageField& x_n, const Vector& u_n,
                              const Problem& problem, const JointConfig& config);

/// argmin_u beta GL(u, Omega) + nu sum_{i in Y} d_i (u_i - u_n,i)^2 over [0, 1]^V,
/// d = Omega 1. The better of u_n and the SDIE solution is refined by projected
/// gradient steps with Armijo backtracking.
Vector exact_u_update(const Vector& u_n, const ImageField& x, const Problem& problem,
                      const JointConfig& config, ExactStepResult* info = nullptr);

double u_subproblem_objective(const Vector& u, const Vector& u_n, const Matrix& omega,
                              const Problem& problem, const JointConfig& config);

}  // namespace jrs
