#include "jrs/joint_energy.hpp"

#include "jrs/ginzburg_landau.hpp"

#include <limits>
#include <stdexcept>

namespace jrs {

namespace {

bool feasible(const Vector& u) {
  for (Index i = 0; i < u.size(); ++i) {
    if (!(u(i) >= -kLabelClipTolerance && u(i) <= 1.0 + kLabelClipTolerance)) return false;
  }
  return true;
}

}  // namespace

double coupling_energy(const Vector& u, const ImageField& x, const Problem& problem,
                       const JointConfig& config) {
  if (u.size() != problem.vertices()) throw std::invalid_argument("coupling_energy: bad u length");
  if (!feasible(u)) return std::numeric_limits<double>::infinity();
  const GLRankForm g =
      gl_rank_form(u, config.epsilon, problem.fidelity(config.mu), problem.labels());
  return gl_energy(g, problem.weights(x, config.sigma));
}

double reconstruction_energy(const ImageField& x, const Problem& problem,
                             const JointConfig& config) {
  const double fit = (problem.model.apply(x).values - problem.observed.values).squaredNorm();
  return huber_value(grad(x), config.huber()) + config.alpha * fit;
}

double joint_energy(const Vector& u, const ImageField& x, const Problem& problem,
                    const JointConfig& config) {
  if (x.grid.pixels() > kDenseEnergyLimit) {
    throw std::invalid_argument("joint_energy: dense evaluation is limited to 64x64 images");
  }
  if (u.size() != problem.vertices()) throw std::invalid_argument("joint_energy: bad u length");
  if (!feasible(u)) return std::numeric_limits<double>::infinity();
  const double rec = reconstruction_energy(x, problem, config);
  if (config.beta == 0.0) return rec;
  return rec + config.beta * coupling_energy(u, x, problem, config);
}

}  // namespace jrs
