#pragma once

#include "jrs/image.hpp"

#include <cmath>

namespace jrs {

/// Forward differences per pixel and channel. Column 2s holds the difference
/// to the pixel below, column 2s+1 the difference to the pixel on the right;
/// both vanish on the last row/column (replication padding).
struct GradientField {
  PixelGrid grid;
  Matrix values;

  GradientField() = default;
  explicit GradientField(const PixelGrid& g)
      : grid(g), values(Matrix::Zero(g.pixels(), 2 * g.channels)) {}
  GradientField(const PixelGrid& g, Matrix v);
};

GradientField grad(const ImageField& x);

/// Negative adjoint of grad: <grad x, g> = -<x, div g>.
ImageField div(const GradientField& g);

/// Upper bound on the operator norm of grad.
inline double gradient_norm_bound() { return std::sqrt(8.0); }

/// c * sum_{i,s} h(|g_{i,s}|) with h(r) = r^2 / (2 t) for r <= t and r - t/2 above.
struct HuberTV {
  double scale = 10.0;
  double threshold = 0.01;

  void validate() const;
};

double huber(double r, double threshold);

double huber_value(const GradientField& g, const HuberTV& huber);

/// Resolvent of dt R^*, where R^* is the conjugate of the Huber-TV integrand:
/// shrink each 2-vector by 1 / (1 + dt t / c), then project onto the radius-c ball.
GradientField prox_R_star(const GradientField& p, double dt, const HuberTV& huber);

}  // namespace jrs
