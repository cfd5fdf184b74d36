#include "jrs/sdie.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jrs {

DiffusionPropagator::DiffusionPropagator(const NystromFactors& factors, const Vector& mu_prime,
                                         double tau, int k_s)
    : factors_(factors), dt_(tau / k_s), k_s_(k_s) {
  if (!(tau > 0.0) || k_s < 1) throw std::invalid_argument("DiffusionPropagator: bad time step");
  if (mu_prime.size() != factors.vertices()) {
    throw std::invalid_argument("DiffusionPropagator: fidelity length mismatch");
  }
  a1_ = (-dt_ * (mu_prime.array() + 1.0)).exp().matrix();
  a3_ = a1_.cwiseSqrt();
  a2_ = ((dt_ * factors.sigma().array()).exp() - 1.0).matrix();
}

Vector DiffusionPropagator::step(const Vector& v) const {
  const Vector w = a3_.cwiseProduct(v);
  const Vector core = a2_.cwiseProduct(factors_.u2.transpose() * w);
  return a1_.cwiseProduct(v) + a3_.cwiseProduct(factors_.u1 * core);
}

Vector DiffusionPropagator::propagate(const Vector& v) const {
  Vector out = v;
  for (int k = 0; k < k_s_; ++k) out = step(out);
  return out;
}

Vector compute_b(const NystromFactors& factors, const Vector& mu_prime, const Vector& f_prime,
                 double tau, int n_b) {
  if (!(tau > 0.0) || n_b < 1) throw std::invalid_argument("compute_b: bad time step");
  const Index n = factors.vertices();
  if (mu_prime.size() != n || f_prime.size() != n) {
    throw std::invalid_argument("compute_b: vector length mismatch");
  }
  // explicit fidelity needs h mu' <= 1 to stay monotone
  const double mu_max = mu_prime.size() > 0 ? mu_prime.maxCoeff() : 0.0;
  const int steps = std::max(n_b, static_cast<int>(std::ceil(tau * mu_max)));
  const double h = tau / steps;
  const Vector hl = h * factors.lambda;
  const Vector shrink = hl.cwiseQuotient((Vector::Ones(hl.size()) + hl));
  const Vector forcing = mu_prime.cwiseProduct(f_prime);
  Vector u = Vector::Zero(n);
  for (int k = 0; k < steps; ++k) {
    const Vector rhs = u + h * (forcing - mu_prime.cwiseProduct(u));
    u = rhs - factors.u1 * shrink.cwiseProduct(factors.u2.transpose() * rhs);
  }
  return u;
}

double sdie_threshold(double v, double tau, double epsilon) {
  if (!(tau > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("sdie_threshold: tau and eps must be positive");
  if (tau > epsilon) throw std::invalid_argument("sdie_threshold: tau must not exceed eps");
  if (tau == epsilon) return v >= 0.5 ? 1.0 : 0.0;
  const double r = tau / epsilon;
  if (v < 0.5 * r) return 0.0;
  if (v >= 1.0 - 0.5 * r) return 1.0;
  return (v - 0.5 * r) / (1.0 - r);
}

Vector sdie_threshold(const Vector& v, double tau, double epsilon) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = sdie_threshold(v(i), tau, epsilon);
  return out;
}

SdieParams SdieParams::from(const JointConfig& c) {
  return {c.tau, c.epsilon, c.k_s, c.n_b, c.delta, c.max_sdie_iters};
}

SegResult sdie_iterate(const NystromFactors& factors, const Vector& mu_prime,
                       const Vector& f_prime, const Vector& start, const SdieParams& p) {
  if (start.size() != factors.vertices()) {
    throw std::invalid_argument("sdie_iterate: start vector length mismatch");
  }
  sdie_threshold(0.5, p.tau, p.epsilon);  // validates tau and eps
  const DiffusionPropagator prop(factors, mu_prime, p.tau, p.k_s);
  const Vector b = compute_b(factors, mu_prime, f_prime, p.tau, p.n_b);

  SegResult res;
  res.rank_deficient = factors.rank_deficient;
  res.u = start;
  for (int m = 1; m <= p.max_iters; ++m) {
    Vector next = sdie_threshold(Vector(prop.propagate(res.u) + b), p.tau, p.epsilon);
    const double change = (next - res.u).squaredNorm();
    const double size = next.squaredNorm();
    res.u = std::move(next);
    res.iterations = m;
    if (size == 0.0 ? change == 0.0 : change < p.delta * size) {
      res.converged = true;
      break;
    }
  }
  return res;
}

std::pair<Index, Index> rank_split(const VertexPartition& partition, const JointConfig& config) {
  if (config.k1 > 0 || config.k2 > 0) return {config.k1, config.k2};
  return split_rank(partition, config.rank);
}

NystromFactors graph_factors(const ImageField& x, const Problem& problem,
                             const JointConfig& config, std::uint64_t seed) {
  const WeightFunction w = problem.weights(x, config.sigma);
  if (config.exact_mode) return nystrom_qr(w, full_interpolation_set(w.vertices()));
  const auto [k1, k2] = rank_split(problem.partition(), config);
  return nystrom_qr(w, problem.partition(), k1, k2, seed);
}

SegResult seg_update(const Vector& u_n, const Vector& start, const ImageField& x,
                     const Problem& problem, const JointConfig& config, SegWeights weights,
                     std::uint64_t seed) {
  const Index n = problem.vertices();
  if (u_n.size() != n || start.size() != n) {
    throw std::invalid_argument("seg_update: label vector length mismatch");
  }
  if (weights.beta == 0.0) {
    SegResult res;
    res.u = u_n;
    res.converged = true;
    return res;
  }
  const Index ny = problem.partition().reconstructed;
  Vector mu_prime = problem.fidelity(config.mu);
  mu_prime.head(ny).setConstant(2.0 * weights.nu / weights.beta);
  Vector f_prime = problem.labels();
  f_prime.head(ny) = u_n.head(ny);

  const NystromFactors factors = graph_factors(x, problem, config, seed);
  return sdie_iterate(factors, mu_prime, f_prime, start, SdieParams::from(config));
}

SegResult seg_update(const Vector& u_n, const ImageField& x, const Problem& problem,
                     const JointConfig& config, std::uint64_t seed) {
  Vector start = problem.labels();
  start.head(problem.partition().reconstructed).setConstant(config.u0);
  return seg_update(u_n, start, x, problem, config, {config.beta, config.nu}, seed);
}

}  // namespace jrs
