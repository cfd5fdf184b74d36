#pragma once

#include "jrs/config.hpp"
#include "jrs/nystrom.hpp"
#include "jrs/problem.hpp"

#include <cstdint>

namespace jrs {

/// Strang splitting of exp(-dt (Delta + M')) around the low-rank Laplacian:
///   v -> a1 .* v + a3 .* U1 (a2 .* (U2^T (a3 .* v)))
/// with a1 = exp(-dt (mu' + 1)), a3 = sqrt(a1), a2 = exp(dt Sigma) - 1 and dt = tau / k_s.
class DiffusionPropagator {
 public:
  DiffusionPropagator(const NystromFactors& factors, const Vector& mu_prime, double tau, int k_s);

  Vector step(const Vector& v) const;
  /// k_s steps, i.e. an approximation of exp(-tau (Delta + M')) v.
  Vector propagate(const Vector& v) const;

  const Vector& a1() const { return a1_; }
  const Vector& a2() const { return a2_; }
  const Vector& a3() const { return a3_; }
  double dt() const { return dt_; }
  int steps() const { return k_s_; }

 private:
  const NystromFactors& factors_;
  Vector a1_, a2_, a3_;
  double dt_;
  int k_s_;
};

/// Solution at time tau of u' = -Delta u - M'(u - f'), u(0) = 0, by n_b
/// semi-implicit Euler substeps (I + h Delta) u+ = u + h M'(f' - u), raised to
/// ceil(tau max mu') when needed so that the explicit part stays monotone. The
/// implicit solve uses U2^T U1 = I, so (I + h U1 Lambda U2^T)^-1 = I - U1 diag(h lambda / (1 + h lambda)) U2^T.
Vector compute_b(const NystromFactors& factors, const Vector& mu_prime, const Vector& f_prime,
                 double tau, int n_b);

/// Piecewise-affine SDIE map for tau < eps. For tau == eps this is the MBO
/// threshold at 1/2, with ties sent to 1. Throws if tau > eps or tau <= 0.
double sdie_threshold(double v, double tau, double epsilon);
Vector sdie_threshold(const Vector& v, double tau, double epsilon);

struct SdieParams {
  double tau = 0.00285;
  double epsilon = 0.00285;
  int k_s = 5;
  int n_b = 200;
  double delta = 1e-10;
  int max_iters = 300;

  static SdieParams from(const JointConfig& config);
};

struct SegResult {
  Vector u;
  int iterations = 0;
  bool converged = false;
  bool rank_deficient = false;
};

/// Iterates u <- threshold(propagate(u) + b) from `start` until
/// |u^m - u^{m-1}|^2 / |u^m|^2 < delta.
SegResult sdie_iterate(const NystromFactors& factors, const Vector& mu_prime,
                       const Vector& f_prime, const Vector& start, const SdieParams& params);

/// Segmentation weights of one update; the initial segmentation uses {1, 0}.
struct SegWeights {
  double beta;
  double nu;
};

/// Minimises beta GL(u, Omega(F(x), z_d)) + nu |u|_Y - u_n|_Y|^2 by SDIE, starting
/// from `start`. Returns u_n unchanged when beta == 0.
SegResult seg_update(const Vector& u_n, const Vector& start, const ImageField& x,
                     const Problem& problem, const JointConfig& config, SegWeights weights,
                     std::uint64_t seed);

/// The update of the joint scheme: config weights, SDIE started from u0 chi_Y + f;
/// u_n enters only through the fidelity on Y.
SegResult seg_update(const Vector& u_n, const ImageField& x, const Problem& problem,
                     const JointConfig& config, std::uint64_t seed);

/// Nystrom factors of the graph built on (F(x), z_d): full rank in exact mode,
/// otherwise K (or K1 + K2) sampled vertices.
NystromFactors graph_factors(const ImageField& x, const Problem& problem,
                             const JointConfig& config, std::uint64_t seed);

/// Resolves the configured K1, K2 split.
std::pair<Index, Index> rank_split(const VertexPartition& partition, const JointConfig& config);

}  // namespace jrs
