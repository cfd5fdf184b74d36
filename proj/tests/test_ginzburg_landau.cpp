#include "jrs/ginzburg_landau.hpp"
#include "jrs/nystrom.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace jrs;

namespace {

// 1/2 sum w_ij (u_i - u_j)^2 + sum_i d_i (W(u_i) / eps + mu_i (u_i - f_i)^2 / 2)
double expanded_gl(const Vector& u, const Matrix& w, double eps, const Vector& mu, const Vector& f) {
  const Index n = u.size();
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    double d = 0.0;
    for (Index j = 0; j < n; ++j) {
      total += 0.5 * w(i, j) * (u(i) - u(j)) * (u(i) - u(j));
      d += w(i, j);
    }
    const double well = 0.5 * u(i) * (1.0 - u(i));
    total += d * (well / eps + 0.5 * mu(i) * (u(i) - f(i)) * (u(i) - f(i)));
  }
  return total;
}

struct Instance {
  Matrix omega;
  Vector u, mu, f;
  WeightFunction weights;
};

Instance random_instance(Index n, std::mt19937_64& rng) {
  const FeatureMatrix z = oracle::random_matrix(n, 4, rng);
  WeightFunction w(z, 0.8);
  Vector mu = Vector::Zero(n), f = Vector::Zero(n);
  for (Index i = n / 2; i < n; ++i) {
    mu(i) = 50.0;
    f(i) = static_cast<double>(rng() % 2);
  }
  return {w.dense(), oracle::random_vector(n, rng), mu, f, w};
}

}  // namespace

TEST_CASE("double obstacle well") {
  CHECK(double_obstacle(0.0) == 0.0);
  CHECK(double_obstacle(1.0) == 0.0);
  CHECK(double_obstacle(0.5) == 0.125);
  CHECK(double_obstacle(1.5) == std::numeric_limits<double>::infinity());
  CHECK(double_obstacle(-1e-3) == std::numeric_limits<double>::infinity());
}

TEST_CASE("rank form at u = f = 0 and mu = 0 is zero") {
  const GLRankForm g = gl_rank_form(Vector::Zero(5), 0.1, Vector::Zero(5), Vector::Zero(5));
  CHECK(g.u.norm() == 0.0);
  CHECK(g.v.norm() == 0.0);
}

TEST_CASE("rank form, dense energy and the expanded oracle agree") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const Index n = 5 + static_cast<Index>(rng() % 45);
    const Instance in = random_instance(n, rng);
    const double eps = 0.01 + 0.5 * oracle::random_vector(1, rng)(0);
    const GLRankForm g = gl_rank_form(in.u, eps, in.mu, in.f);
    const double expect = expanded_gl(in.u, in.omega, eps, in.mu, in.f);
    const double tol = 1e-12 * std::max(1.0, std::abs(expect));
    CHECK(std::abs(gl_energy(g, in.omega) - expect) <= tol);
    CHECK(std::abs(gl_energy(g, DenseOmega(in.omega)) - expect) <= tol);
    CHECK(std::abs(gl_energy(g, in.weights) - expect) <= tol);
    // direct Frobenius pairing of G(u) with omega
    double frob = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) frob += g.entry(i, j) * in.omega(i, j);
    CHECK(std::abs(frob - expect) <= tol);
  }
}

TEST_CASE("GL energy is non-negative on [0, 1]^V") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const Instance in = random_instance(12, rng);
    Vector u = in.u;
    for (Index i = 0; i < u.size(); ++i)
      if (rng() % 3 == 0) u(i) = static_cast<double>(rng() % 2);  // mix in binary entries
    CHECK(gl_energy(gl_rank_form(u, 0.05, in.mu, in.f), in.omega) >= -1e-12);
  }
}

TEST_CASE("GL energy is linear in the weights") {
  std::mt19937_64 rng(14);
  const Instance a = random_instance(20, rng);
  const Matrix other = oracle::gaussian_weights(oracle::random_matrix(20, 4, rng), 1.3);
  const GLRankForm g = gl_rank_form(a.u, 0.2, a.mu, a.f);
  const double s = 1.7, r = -0.4;
  const double lhs = gl_energy(g, Matrix(s * a.omega + r * other));
  const double rhs = s * gl_energy(g, a.omega) + r * gl_energy(g, other);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
}

TEST_CASE("labels within 1e-9 of the box are clipped, larger violations throw") {
  Vector u(4);
  u << -5e-10, 1.0 + 5e-10, 0.3, 1.0;
  const Vector c = clip_labels(u);
  CHECK(c(0) == 0.0);
  CHECK(c(1) == 1.0);
  CHECK(c(2) == 0.3);
  u(2) = 1.0 + 1e-6;
  CHECK_THROWS_AS(clip_labels(u), std::domain_error);
  CHECK_THROWS_AS(gl_rank_form(u, 0.1, Vector::Zero(4), Vector::Zero(4)), std::domain_error);
  CHECK_THROWS_AS(gl_rank_form(Vector::Zero(4), 0.0, Vector::Zero(4), Vector::Zero(4)),
                  std::invalid_argument);
}
