#include "jrs/recon.hpp"

#include "jrs/sdie.hpp"

#include <stdexcept>

namespace jrs {

Matrix cprod(const WeightOperator& omega, const Vector& u, const Vector& v, const Matrix& w,
             Index ny) {
  const Index n = omega.vertices();
  if (u.size() != n || v.size() != n || w.rows() != n) {
    throw std::invalid_argument("cprod: vector length mismatch");
  }
  if (ny < 0 || ny > n) throw std::invalid_argument("cprod: bad reconstructed-vertex count");
  const Index c = w.cols();
  Matrix stacked(n, 3 * c);
  stacked.leftCols(c) = u.asDiagonal() * w;
  stacked.middleCols(c, c) = w;
  stacked.rightCols(c) = v.asDiagonal() * w;
  const Matrix prod = omega.apply(stacked).topRows(ny);
  return v.head(ny).asDiagonal() * prod.middleCols(c, c) - u.head(ny).asDiagonal() * prod.leftCols(c) +
         prod.rightCols(c);
}

std::unique_ptr<WeightOperator> weight_operator(const ImageField& x, const Problem& problem,
                                                const JointConfig& config, std::uint64_t seed) {
  const WeightFunction w = problem.weights(x, config.sigma);
  if (config.exact_mode) return std::make_unique<DenseOmega>(w);
  const auto [k1, k2] = rank_split(problem.partition(), config);
  return std::make_unique<OmegaProduct>(make_omega_product(w, problem.partition(), k1, k2, seed));
}

ImageField compute_g_n(const ImageField& x_n, const Vector& u_n, const Problem& problem,
                       const JointConfig& config, const WeightOperator& omega) {
  const Index ny = problem.partition().reconstructed;
  if (u_n.size() != problem.vertices()) throw std::invalid_argument("compute_g_n: bad u length");
  if (config.beta == 0.0) return ImageField(x_n.grid);

  const FeatureMatrix z = feature_map(x_n, problem.kernel);
  const Index q = z.cols();
  const GLRankForm g =
      gl_rank_form(u_n, config.epsilon, problem.fidelity(config.mu), problem.labels());

  Matrix w(problem.vertices(), q + 1);
  w.topLeftCorner(ny, q) = z;
  if (problem.reference.size() > 0) w.bottomLeftCorner(problem.reference.size(), q) = problem.reference.features;
  w.col(q).setOnes();
  const Matrix c = cprod(omega, g.u, g.v, w, ny);

  FeatureMatrix dz = c.leftCols(q) - c.col(q).asDiagonal() * z;
  dz *= 4.0 * config.beta / (static_cast<double>(q) * config.sigma * config.sigma);
  return feature_map_adjoint(dz, problem.kernel);
}

ImageField compute_g_n(const ImageField& x_n, const Vector& u_n, const Problem& problem,
                       const JointConfig& config, std::uint64_t seed) {
  if (config.beta == 0.0) return ImageField(x_n.grid);
  const auto omega = weight_operator(x_n, problem, config, seed);
  return compute_g_n(x_n, u_n, problem, config, *omega);
}

PrimalDualOptions pd_options(const JointConfig& config) {
  PrimalDualOptions o;
  o.max_iters = config.pd_max_iters;
  o.tolerance = config.pd_tolerance;
  o.patience = config.pd_patience;
  return o;
}

namespace {

QuadraticFidelityProx linearised_prox(const ImageField& x_n, const ImageField& g_n,
                                      const Problem& problem, const JointConfig& config) {
  ImageField anchor = x_n;
  if (config.eta > 0.0) anchor.values -= g_n.values / (2.0 * config.eta);
  return QuadraticFidelityProx(problem.model, problem.observed, config.alpha, config.eta,
                               std::move(anchor), config.prox_tolerance, config.prox_max_iters);
}

}  // namespace

ReconResult recon_update(const ImageField& x_n, const Vector& u_n, const Problem& problem,
                         const JointConfig& config, std::uint64_t seed) {
  if (config.beta > 0.0 && !(config.eta > 0.0)) {
    throw std::invalid_argument("recon_update: eta must be positive when beta > 0");
  }
  const ImageField g = compute_g_n(x_n, u_n, problem, config, seed);
  const QuadraticFidelityProx prox = linearised_prox(x_n, g, problem, config);
  TVSolveResult tv = solve_huber_tv(x_n, config.huber(), prox, pd_options(config));
  return {std::move(tv.x), tv.iterations, tv.converged};
}

double linearised_objective(const ImageField& x, const ImageField& x_n, const ImageField& g_n,
                            const Problem& problem, const JointConfig& config) {
  const double tv = huber_value(grad(x), config.huber());
  const double fit = (problem.model.apply(x).values - problem.observed.values).squaredNorm();
  const Matrix step = x.values - x_n.values;
  return tv + config.alpha * fit + (g_n.values.array() * step.array()).sum() +
         config.eta * step.squaredNorm();
}

}  // namespace jrs
