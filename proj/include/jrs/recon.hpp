#pragma once

#include "jrs/config.hpp"
#include "jrs/ginzburg_landau.hpp"
#include "jrs/primal_dual.hpp"
#include "jrs/problem.hpp"

#include <cstdint>
#include <memory>

namespace jrs {

/// ((G)_{YV} .* Omega_{YV}) w for every column w of `w`, where G = -u u^T + v 1^T + 1 v^T:
///   -u|_Y .* B(u .* w) + v|_Y .* B(w) + B(v .* w),  B(w) = (Omega w)|_Y.
/// All three products go through a single batched operator application.
Matrix cprod(const WeightOperator& omega, const Vector& u, const Vector& v, const Matrix& w,
             Index reconstructed);

/// Weight operator for the graph on (F(x), z_d): dense in exact mode, otherwise
/// a Nystrom extension on K sampled vertices.
std::unique_ptr<WeightOperator> weight_operator(const ImageField& x, const Problem& problem,
                                                const JointConfig& config, std::uint64_t seed);

/// Gradient in x of beta <G(u_n), Omega(F(x), z_d)> at x = x_n:
///   4 beta / (q sigma^2) F^*( C [z; z_d] - (C 1) .* z ),  C = G_{YV} .* Omega_{YV}.
ImageField compute_g_n(const ImageField& x_n, const Vector& u_n, const Problem& problem,
                       const JointConfig& config, const WeightOperator& omega);

ImageField compute_g_n(const ImageField& x_n, const Vector& u_n, const Problem& problem,
                       const JointConfig& config, std::uint64_t seed);

struct ReconResult {
  ImageField x;
  int iterations = 0;
  bool converged = false;
};

/// Primal-dual options (budget, tolerance, patience) from the config.
PrimalDualOptions pd_options(const JointConfig& config);

/// Linearised reconstruction update: x~ = x_n - g_n / (2 eta), then
///   argmin_x HuberTV(grad x) + alpha |T x - y|^2 + eta |x - x~|^2
/// by primal-dual with gamma = 2 eta, warm-started at x_n.
ReconResult recon_update(const ImageField& x_n, const Vector& u_n, const Problem& problem,
                         const JointConfig& config, std::uint64_t seed);

/// The objective minimised by recon_update, evaluated at x.
double linearised_objective(const ImageField& x, const ImageField& x_n, const ImageField& g_n,
                            const Problem& problem, const JointConfig& config);

}  // namespace jrs
