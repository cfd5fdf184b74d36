#include "jrs/ginzburg_landau.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace jrs {

double double_obstacle(double x) {
  if (x >= 0.0 && x <= 1.0) return 0.5 * x * (1.0 - x);
  return std::numeric_limits<double>::infinity();
}

Vector clip_labels(const Vector& u) {
  Vector out(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    const double x = u(i);
    if (!(x >= -kLabelClipTolerance && x <= 1.0 + kLabelClipTolerance)) {
      std::ostringstream msg;
      msg << "label " << x << " at vertex " << i << " lies outside [0, 1]";
      throw std::domain_error(msg.str());
    }
    out(i) = std::min(1.0, std::max(0.0, x));
  }
  return out;
}

GLRankForm gl_rank_form(const Vector& u, double epsilon, const Vector& mu, const Vector& f) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("gl_rank_form: epsilon must be positive");
  if (mu.size() != u.size() || f.size() != u.size()) {
    throw std::invalid_argument("gl_rank_form: u, mu and f lengths differ");
  }
  GLRankForm g;
  g.u = clip_labels(u);
  g.v.resize(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    const double x = g.u(i);
    const double r = x - f(i);
    g.v(i) = 0.5 * x * x + double_obstacle(x) / (2.0 * epsilon) + 0.25 * mu(i) * r * r;
  }
  return g;
}

double gl_energy(const GLRankForm& g, const Matrix& omega) {
  if (omega.rows() != g.u.size() || omega.cols() != g.u.size()) {
    throw std::invalid_argument("gl_energy: weight matrix size mismatch");
  }
  const Vector ones = Vector::Ones(g.u.size());
  return -g.u.dot(omega * g.u) + 2.0 * g.v.dot(omega * ones);
}

double gl_energy(const GLRankForm& g, const WeightOperator& omega) {
  if (omega.vertices() != g.u.size()) {
    throw std::invalid_argument("gl_energy: operator size mismatch");
  }
  Matrix cols(g.u.size(), 2);
  cols.col(0) = g.u;
  cols.col(1).setOnes();
  const Matrix prod = omega.apply(cols);
  return -g.u.dot(prod.col(0)) + 2.0 * g.v.dot(prod.col(1));
}

double gl_energy(const GLRankForm& g, const WeightFunction& weights) {
  const Index n = g.u.size();
  if (weights.vertices() != n) throw std::invalid_argument("gl_energy: weight size mismatch");
  // sum_ij w_ij (v_i + v_j - u_i u_j), symmetric in (i, j)
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Index j = i + 1; j < n; ++j) row += weights(i, j) * g.entry(i, j);
    total += 2.0 * row + g.entry(i, i);
  }
  return total;
}

}  // namespace jrs
