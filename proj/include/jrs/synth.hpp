#pragma once

#include "jrs/image.hpp"

#include <cstdint>

namespace jrs {

/// Clean piecewise-constant image and its foreground mask.
struct SynthScene {
  ImageField image;
  Vector mask;
};

struct SceneOptions {
  Index height = 64;
  Index width = 64;
  Index channels = 1;
  double background = 0.25;
  double foreground = 0.75;
};

/// A jittered ellipse on a flat background; the geometry is drawn from `seed`.
SynthScene two_region_scene(const SceneOptions& options, std::uint64_t seed);

}  // namespace jrs
