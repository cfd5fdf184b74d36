#include "jrs/huber_tv.hpp"

#include <stdexcept>

namespace jrs {

GradientField::GradientField(const PixelGrid& g, Matrix v) : grid(g), values(std::move(v)) {
  if (values.rows() != g.pixels() || values.cols() != 2 * g.channels) {
    throw std::invalid_argument("GradientField: shape does not match grid");
  }
}

GradientField grad(const ImageField& x) {
  const PixelGrid& g = x.grid;
  GradientField out(g);
  for (Index s = 0; s < g.channels; ++s) {
    for (Index r = 0; r < g.height; ++r) {
      for (Index c = 0; c < g.width; ++c) {
        const Index i = g.index(r, c);
        const double xi = x.values(i, s);
        if (r + 1 < g.height) out.values(i, 2 * s) = x.values(g.index(r + 1, c), s) - xi;
        if (c + 1 < g.width) out.values(i, 2 * s + 1) = x.values(g.index(r, c + 1), s) - xi;
      }
    }
  }
  return out;
}

ImageField div(const GradientField& p) {
  const PixelGrid& g = p.grid;
  ImageField out(g);
  for (Index s = 0; s < g.channels; ++s) {
    for (Index r = 0; r < g.height; ++r) {
      for (Index c = 0; c < g.width; ++c) {
        const Index i = g.index(r, c);
        if (r + 1 < g.height) {
          const double d = p.values(i, 2 * s);
          out.values(g.index(r + 1, c), s) -= d;
          out.values(i, s) += d;
        }
        if (c + 1 < g.width) {
          const double d = p.values(i, 2 * s + 1);
          out.values(g.index(r, c + 1), s) -= d;
          out.values(i, s) += d;
        }
      }
    }
  }
  return out;
}

void HuberTV::validate() const {
  if (!(scale > 0.0)) throw std::invalid_argument("HuberTV: scale must be positive");
  if (!(threshold > 0.0)) throw std::invalid_argument("HuberTV: threshold must be positive");
}

double huber(double r, double threshold) {
  return r <= threshold ? r * r / (2.0 * threshold) : r - 0.5 * threshold;
}

double huber_value(const GradientField& g, const HuberTV& h) {
  double total = 0.0;
  for (Index s = 0; s < g.grid.channels; ++s) {
    for (Index i = 0; i < g.values.rows(); ++i) {
      total += huber(std::hypot(g.values(i, 2 * s), g.values(i, 2 * s + 1)), h.threshold);
    }
  }
  return h.scale * total;
}

GradientField prox_R_star(const GradientField& p, double dt, const HuberTV& h) {
  GradientField out(p.grid);
  const double shrink = 1.0 / (1.0 + dt * h.threshold / h.scale);
  for (Index s = 0; s < p.grid.channels; ++s) {
    for (Index i = 0; i < p.values.rows(); ++i) {
      double a = shrink * p.values(i, 2 * s);
      double b = shrink * p.values(i, 2 * s + 1);
      const double norm = std::hypot(a, b);
      if (norm > h.scale) {
        a *= h.scale / norm;
        b *= h.scale / norm;
      }
      out.values(i, 2 * s) = a;
      out.values(i, 2 * s + 1) = b;
    }
  }
  return out;
}

}  // namespace jrs
