#include "jrs/sdie.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace jrs;

namespace {

struct SmallGraph {
  FeatureMatrix z;
  Matrix omega;
  NystromFactors factors;
};

SmallGraph small_graph(Index n, std::mt19937_64& rng, double sigma = 0.8) {
  FeatureMatrix z = oracle::random_matrix(n, 3, rng);
  const WeightFunction w(z, sigma);
  return {z, oracle::gaussian_weights(z, sigma), nystrom_qr(w, full_interpolation_set(n))};
}

// Thresholding written with the V1 / V2 vertex sets instead of a formula.
double threshold_by_sets(double v, double tau, double eps) {
  const double lo = tau / (2 * eps);
  if (v >= lo && v < 1 - lo) return (v - lo) / (1 - tau / eps);
  if (v >= 1 - lo) return 1.0;
  return 0.0;
}

// Minimum cut labelling of the first n_free vertices with the rest fixed.
Vector brute_force_min_cut(const Matrix& w, const Vector& fixed, Index n_free) {
  const Index n = w.rows();
  double best = std::numeric_limits<double>::infinity();
  Vector best_u;
  for (Index mask = 0; mask < (Index{1} << n_free); ++mask) {
    Vector u = fixed;
    for (Index i = 0; i < n_free; ++i) u(i) = (mask >> i) & 1;
    double cut = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) cut += w(i, j) * std::abs(u(i) - u(j));
    if (cut < best) {
      best = cut;
      best_u = u;
    }
  }
  return best_u;
}

}  // namespace

TEST_CASE("threshold examples") {
  CHECK(sdie_threshold(0.6, 0.1, 0.1) == 1.0);
  CHECK(sdie_threshold(0.4, 0.1, 0.1) == 0.0);
  CHECK(sdie_threshold(0.5, 0.1, 0.1) == 1.0);  // ties go to 1
  CHECK(sdie_threshold(0.25, 0.5, 1.0) == 0.0);
  for (double r : {0.1, 0.5, 0.9}) CHECK(sdie_threshold(0.5, r, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(sdie_threshold(0.5, 0.2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(sdie_threshold(0.5, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("threshold equals the set-based formula, is monotone and maps into [0, 1]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> val(-0.5, 1.5), ratio(0.01, 0.99);
  for (int t = 0; t < 10000; ++t) {
    const double v = val(rng), r = ratio(rng), w = v + std::abs(val(rng)) * 0.1;
    const double a = sdie_threshold(v, r, 1.0);
    CHECK(a == threshold_by_sets(v, r, 1.0));
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    CHECK(sdie_threshold(w, r, 1.0) >= a);
  }
}

TEST_CASE("threshold is continuous at both breakpoints") {
  for (double r : {0.05, 0.3, 0.5, 0.8}) {
    const double lo = 0.5 * r, hi = 1 - 0.5 * r;
    CHECK(std::abs(sdie_threshold(lo, r, 1.0) - 0.0) < 1e-12);
    CHECK(std::abs(sdie_threshold(std::nextafter(lo, 0.0), r, 1.0) - 0.0) < 1e-12);
    CHECK(std::abs(sdie_threshold(std::nextafter(hi, 0.0), r, 1.0) - 1.0) < 1e-12);
    CHECK(sdie_threshold(hi, r, 1.0) == 1.0);
  }
}

TEST_CASE("diffusion without fidelity preserves constants") {
  std::mt19937_64 rng(32);
  const SmallGraph g = small_graph(30, rng);
  const DiffusionPropagator p(g.factors, Vector::Zero(30), 0.00285, 5);
  const Vector out = p.propagate(Vector::Ones(30));
  CHECK((out.array() - 1.0).abs().maxCoeff() <= 1e-6);
}

TEST_CASE("Strang propagation converges to the matrix exponential at second order") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 3; ++t) {
    const SmallGraph g = small_graph(25 + 5 * t, rng);
    const Index n = g.z.rows();
    const Vector mu = oracle::random_vector(n, rng, 0.0, 4.0);
    const Vector v = oracle::random_vector(n, rng);
    const oracle::SymmetrisedGenerator gen(g.omega, mu);
    const double tau = 1.0;
    const Vector exact = gen.expm(tau, v);
    double prev = 0.0;
    for (int k : {4, 8, 16, 32}) {
      const double err = (DiffusionPropagator(g.factors, mu, tau, k).propagate(v) - exact).norm();
      if (prev > 0.0) {
        const double order = std::log2(prev / err);
        CHECK(order >= 1.7);
        CHECK(order <= 2.3);
      }
      prev = err;
    }
  }
}

TEST_CASE("propagation keeps non-negative vectors non-negative in full rank") {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 20; ++t) {
    const SmallGraph g = small_graph(20, rng);
    const Vector mu = oracle::random_vector(20, rng, 0.0, 50.0);
    const DiffusionPropagator p(g.factors, mu, 0.00285, 5);
    CHECK(p.propagate(oracle::random_vector(20, rng)).minCoeff() >= -1e-10);
  }
}

TEST_CASE("forcing term vanishes without fidelity") {
  std::mt19937_64 rng(35);
  const SmallGraph g = small_graph(15, rng);
  CHECK(compute_b(g.factors, Vector::Zero(15), Vector::Ones(15), 0.00285, 200).norm() == 0.0);
}

TEST_CASE("forcing term matches the dense formula") {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 5; ++t) {
    const SmallGraph g = small_graph(30, rng);
    const Index n = 30;
    SUBCASE("M' = m I, f' = 1") {
      const double m = 50.0;
      const Vector mu = Vector::Constant(n, m);
      const Vector b = compute_b(g.factors, mu, Vector::Ones(n), 0.00285, 200);
      const oracle::SymmetrisedGenerator gen(g.omega, mu);
      // Delta 1 = 0, so the exact value is (1 - e^{-tau m}) on every vertex
      CHECK((b - gen.phi(0.00285, mu)).cwiseAbs().maxCoeff() <= 1e-4);
      CHECK((b.array() + std::expm1(-0.00285 * m)).abs().maxCoeff() <= 1e-4);
    }
    SUBCASE("fidelity on half of the vertices") {
      Vector mu = Vector::Zero(n), f = Vector::Zero(n);
      for (Index i = n / 2; i < n; ++i) {
        mu(i) = 50.0;
        f(i) = static_cast<double>(rng() % 2);
      }
      const Vector b = compute_b(g.factors, mu, f, 0.00285, 200);
      const oracle::SymmetrisedGenerator gen(g.omega, mu);
      CHECK((b - gen.phi(0.00285, mu.cwiseProduct(f))).cwiseAbs().maxCoeff() <= 1e-4);
    }
  }
}

TEST_CASE("forcing term stays in [0, max f'] at large tau mu'") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 20; ++t) {
    const SmallGraph g = small_graph(20, rng);
    const Vector mu = oracle::random_vector(20, rng, 0.0, 100.0);
    const Vector f = oracle::random_vector(20, rng);
    const double tau = t < 10 ? 0.00285 : 1.0;  // the second half needs the raised substep count
    const Vector b = compute_b(g.factors, mu, f, tau, 10);
    CHECK(b.minCoeff() >= -1e-12);
    CHECK(b.maxCoeff() <= f.maxCoeff() + 1e-12);
  }
}

TEST_CASE("SDIE recovers two clusters from one label each, as the minimum cut does") {
  // 10 unlabelled vertices in two tight 1-d clusters, then one labelled vertex per cluster.
  std::mt19937_64 rng(38);
  FeatureMatrix z(12, 1);
  for (Index i = 0; i < 10; ++i) z(i, 0) = (i < 5 ? 0.0 : 1.0) + 0.05 * oracle::random_vector(1, rng)(0);
  z(10, 0) = 0.02;
  z(11, 0) = 0.98;
  const double sigma = 0.3;
  const NystromFactors f = nystrom_qr(WeightFunction(z, sigma), full_interpolation_set(12));
  Vector labels = Vector::Zero(12);
  labels(10) = 1.0;
  Vector mu = Vector::Zero(12);
  mu.tail(2).setConstant(50.0);
  Vector start = labels;
  start.head(10).setConstant(0.5);
  const SegResult res = sdie_iterate(f, mu, labels, start, SdieParams{});
  CHECK(res.converged);
  const Vector cut = brute_force_min_cut(oracle::gaussian_weights(z, sigma), labels, 10);
  for (Index i = 0; i < 10; ++i) {
    CHECK(res.u(i) == cut(i));
    CHECK(res.u(i) == (i < 5 ? 1.0 : 0.0));
  }
}

TEST_CASE("SDIE iterates with tau < eps stay in [0, 1]") {
  std::mt19937_64 rng(39);
  for (int t = 0; t < 10; ++t) {
    const SmallGraph g = small_graph(25, rng);
    Vector mu = Vector::Zero(25), f = Vector::Zero(25);
    for (Index i = 20; i < 25; ++i) {
      mu(i) = 50;
      f(i) = static_cast<double>(rng() % 2);
    }
    SdieParams p;
    p.tau = 0.002;
    p.epsilon = 0.004;
    p.max_iters = 1 + t;
    const SegResult r = sdie_iterate(g.factors, mu, f, oracle::random_vector(25, rng), p);
    CHECK(r.u.minCoeff() >= 0.0);
    CHECK(r.u.maxCoeff() <= 1.0);
  }
}

TEST_CASE("the stopping rule accepts an all-zero fixed point") {
  std::mt19937_64 rng(40);
  const SmallGraph g = small_graph(10, rng);
  const SegResult r = sdie_iterate(g.factors, Vector::Zero(10), Vector::Zero(10), Vector::Zero(10), {});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.u.norm() == 0.0);
}
