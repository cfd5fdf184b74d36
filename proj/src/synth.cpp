#include "jrs/synth.hpp"

#include <random>
#include <stdexcept>

namespace jrs {

SynthScene two_region_scene(const SceneOptions& o, std::uint64_t seed) {
  const PixelGrid grid{o.height, o.width, o.channels};
  if (!grid.valid()) throw std::invalid_argument("two_region_scene: invalid size");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h = static_cast<double>(o.height), w = static_cast<double>(o.width);
  const double cy = h * (0.4 + 0.2 * unit(rng));
  const double cx = w * (0.4 + 0.2 * unit(rng));
  const double ry = h * (0.2 + 0.1 * unit(rng));
  const double rx = w * (0.2 + 0.1 * unit(rng));

  SynthScene s{ImageField(grid), Vector::Zero(grid.pixels())};
  for (Index r = 0; r < o.height; ++r) {
    for (Index c = 0; c < o.width; ++c) {
      const double dy = (static_cast<double>(r) + 0.5 - cy) / ry;
      const double dx = (static_cast<double>(c) + 0.5 - cx) / rx;
      const bool inside = dy * dy + dx * dx <= 1.0;
      const Index i = grid.index(r, c);
      s.mask(i) = inside ? 1.0 : 0.0;
      s.image.values.row(i).setConstant(inside ? o.foreground : o.background);
    }
  }
  return s;
}

}  // namespace jrs
