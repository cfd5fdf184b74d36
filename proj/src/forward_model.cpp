#include "jrs/forward_model.hpp"

#include <cmath>

#include <sstream>
#include <stdexcept>

namespace jrs {

namespace {

// Half-sample symmetric reflection into [0, n); valid for -n <= m < 2n.
Index reflect(Index m, Index n) {
  if (m < 0) return -m - 1;
  if (m >= n) return 2 * n - 1 - m;
  return m;
}

}  // namespace

ForwardModel ForwardModel::identity() { return ForwardModel(ModelKind::identity, 1); }

ForwardModel ForwardModel::motion_blur(Index length) {
  if (length < 1) throw std::invalid_argument("motion_blur: length must be at least 1");
  return ForwardModel(ModelKind::motion_blur, length);
}

void ForwardModel::validate(const PixelGrid& grid) const {
  if (!grid.valid()) throw std::invalid_argument("ForwardModel: invalid grid");
  if (kind_ == ModelKind::motion_blur && length_ > grid.width) {
    std::ostringstream msg;
    msg << "motion blur length " << length_ << " exceeds image width " << grid.width;
    throw std::invalid_argument(msg.str());
  }
}

ImageField ForwardModel::apply(const ImageField& x) const {
  validate(x.grid);
  if (kind_ == ModelKind::identity) return x;
  const Index h = x.grid.height, w = x.grid.width, lead = length_ / 2;
  const double len = static_cast<double>(length_);
  ImageField out(x.grid);
  for (Index s = 0; s < x.grid.channels; ++s) {
    for (Index r = 0; r < h; ++r) {
      for (Index c = 0; c < w; ++c) {
        double sum = 0.0;
        for (Index k = 0; k < length_; ++k) sum += x.at(r, reflect(c - lead + k, w), s);
        out.at(r, c, s) = sum / len;
      }
    }
  }
  return out;
}

ImageField ForwardModel::adjoint(const ImageField& y) const {
  if (self_adjoint()) return apply(y);
  validate(y.grid);
  const Index h = y.grid.height, w = y.grid.width, lead = length_ / 2;
  const double len = static_cast<double>(length_);
  ImageField out(y.grid);
  for (Index s = 0; s < y.grid.channels; ++s) {
    for (Index r = 0; r < h; ++r) {
      for (Index c = 0; c < w; ++c) {
        const double v = y.at(r, c, s) / len;
        for (Index k = 0; k < length_; ++k) out.at(r, reflect(c - lead + k, w), s) += v;
      }
    }
  }
  return out;
}

double ForwardModel::operator_norm_bound() const {
  if (self_adjoint()) return 1.0;
  return std::sqrt(static_cast<double>(length_ + 1) / static_cast<double>(length_));
}

}  // namespace jrs
