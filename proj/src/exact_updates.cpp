#include "jrs/exact_updates.hpp"

#include "jrs/ginzburg_landau.hpp"
#include "jrs/joint_energy.hpp"
#include "jrs/recon.hpp"
#include "jrs/sdie.hpp"

#include <cmath>
#include <stdexcept>

namespace jrs {

double x_subproblem_objective(const ImageField& x, const ImageField& x_n, const Vector& u_n,
                              const Problem& problem, const JointConfig& config) {
  double phi = reconstruction_energy(x, problem, config) +
               config.eta * (x.values - x_n.values).squaredNorm();
  if (config.beta > 0.0) phi += config.beta * coupling_energy(u_n, x, problem, config);
  return phi;
}

ImageField exact_x_update(const ImageField& x_n, const Vector& u_n, const Problem& problem,
                          const JointConfig& config, ExactStepResult* info) {
  constexpr double kMaxRho = 1e8;
  ImageField x = x_n;
  double phi = x_subproblem_objective(x, x_n, u_n, problem, config);
  double rho = 0.0;
  ExactStepResult stats;
  for (int k = 0; k < config.exact_inner_iters; ++k) {
    stats.inner_iterations = k + 1;
    const DenseOmega omega(problem.weights(x, config.sigma));
    const ImageField g = compute_g_n(x, u_n, problem, config, omega);
    bool accepted = false;
    ImageField trial = x;
    while (rho <= kMaxRho) {
      const double weight = config.eta + rho;
      ImageField anchor = x;
      if (weight > 0.0) {
        anchor.values = (config.eta * x_n.values + rho * x.values - 0.5 * g.values) / weight;
      }
      const QuadraticFidelityProx prox(problem.model, problem.observed, config.alpha, weight,
                                       std::move(anchor), config.prox_tolerance,
                                       config.prox_max_iters);
      trial = solve_huber_tv(x, config.huber(), prox, pd_options(config)).x;
      const double phi_trial = x_subproblem_objective(trial, x_n, u_n, problem, config);
      if (phi_trial <= phi) {
        accepted = true;
        phi = phi_trial;
        break;
      }
      rho = rho == 0.0 ? std::max(config.eta, 1.0) : 4.0 * rho;
    }
    if (!accepted) break;
    ++stats.accepted;
    const double change = (trial.values - x.values).norm();
    const double size = trial.values.norm();
    x = std::move(trial);
    if (change <= config.pd_tolerance * std::max(size, 1e-300)) break;
  }
  if (info) *info = stats;
  return x;
}

namespace {

struct UObjective {
  const Matrix& omega;
  const Vector& degrees;
  const Vector& u_n;
  const Vector& mu;
  const Vector& f;
  Index ny;
  double beta, nu, epsilon;

  double value(const Vector& u) const {
    const GLRankForm g = gl_rank_form(u, epsilon, mu, f);
    const Vector du = u.head(ny) - u_n.head(ny);
    return beta * gl_energy(g, omega) + nu * degrees.head(ny).dot(du.cwiseProduct(du));
  }

  Vector gradient(const Vector& u) const {
    const Vector ones = Vector::Ones(u.size());
    const Vector dv = u + (ones - 2.0 * u) / (4.0 * epsilon) + 0.5 * mu.cwiseProduct(u - f);
    Vector grad = beta * (-2.0 * (omega * u) + 2.0 * degrees.cwiseProduct(dv));
    grad.head(ny) += 2.0 * nu * degrees.head(ny).cwiseProduct(u.head(ny) - u_n.head(ny));
    return grad;
  }
};

}  // namespace

double u_subproblem_objective(const Vector& u, const Vector& u_n, const Matrix& omega,
                              const Problem& problem, const JointConfig& config) {
  const Vector degrees = omega * Vector::Ones(omega.cols());
  const Vector mu = problem.fidelity(config.mu);
  const Vector f = problem.labels();
  const UObjective obj{omega,  degrees,     u_n,     mu, f, problem.partition().reconstructed,
                       config.beta, config.nu, config.epsilon};
  return obj.value(u);
}

Vector exact_u_update(const Vector& u_n, const ImageField& x, const Problem& problem,
                      const JointConfig& config, ExactStepResult* info) {
  ExactStepResult stats;
  if (config.beta == 0.0) {
    if (info) *info = stats;
    return u_n;
  }
  const Matrix omega = problem.weights(x, config.sigma).dense();
  const Vector degrees = omega * Vector::Ones(omega.cols());
  const Vector mu = problem.fidelity(config.mu);
  const Vector f = problem.labels();
  const UObjective obj{omega,  degrees,     u_n,     mu, f, problem.partition().reconstructed,
                       config.beta, config.nu, config.epsilon};

  JointConfig full = config;
  full.exact_mode = true;
  const Vector sdie = seg_update(u_n, x, problem, full, config.seed).u;
  Vector u = clip_labels(u_n);
  double psi = obj.value(u);
  const double psi_sdie = obj.value(sdie);
  if (psi_sdie <= psi) {
    u = sdie;
    psi = psi_sdie;
  }

  // Lipschitz-type scale of the smooth part for the initial trial step.
  const double lip = config.beta * (2.0 * omega.cwiseAbs().rowwise().sum().maxCoeff() +
                                    2.0 * degrees.maxCoeff() * (1.0 + 0.5 * mu.maxCoeff())) +
                     2.0 * config.nu * degrees.maxCoeff();
  double step = 1.0 / std::max(lip, 1e-300);
  for (int k = 0; k < config.exact_inner_iters; ++k) {
    stats.inner_iterations = k + 1;
    const Vector grad = obj.gradient(u);
    bool accepted = false;
    double s = 2.0 * step;
    for (int halving = 0; halving < 40; ++halving, s *= 0.5) {
      const Vector trial = (u - s * grad).cwiseMax(0.0).cwiseMin(1.0);
      const double moved = (trial - u).squaredNorm();
      if (moved == 0.0) break;
      const double psi_trial = obj.value(trial);
      if (psi_trial <= psi - 1e-4 * moved / s) {
        u = trial;
        psi = psi_trial;
        step = s;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ++stats.accepted;
  }
  if (info) *info = stats;
  return u;
}

}  // namespace jrs
