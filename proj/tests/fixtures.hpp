#pragma once

#include "jrs/metrics.hpp"
#include "jrs/problem.hpp"
#include "jrs/synth.hpp"

namespace fixture {

struct Scene {
  jrs::SynthScene truth;
  jrs::Problem problem;
};

/// Two-region scene observed through `model` plus Gaussian noise, with
/// `labelled` reference pixels taken from an independently drawn scene.
inline Scene two_region(jrs::Index size, double noise, jrs::Index labelled, std::uint64_t seed,
                        jrs::ForwardModel model = jrs::ForwardModel::identity()) {
  jrs::SceneOptions o;
  o.height = o.width = size;
  jrs::SynthScene truth = jrs::two_region_scene(o, seed);
  const jrs::SynthScene ref = jrs::two_region_scene(o, jrs::mix_seed(seed, 1));
  jrs::ImageField y = jrs::add_gaussian_noise(model.apply(truth.image), noise, jrs::mix_seed(seed, 2));
  const auto pixels = jrs::stratified_pixels(ref.mask, labelled, jrs::mix_seed(seed, 3));
  jrs::Problem p(std::move(y), model, jrs::make_reference(ref.image, ref.mask, pixels));
  return {std::move(truth), std::move(p)};
}

}  // namespace fixture
