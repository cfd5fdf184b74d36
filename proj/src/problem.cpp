#include "jrs/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace jrs {

ReferenceData make_reference(const ImageField& image, const Vector& mask,
                             std::span<const Index> pixels) {
  image.validate();
  if (mask.size() != image.grid.pixels()) {
    throw std::invalid_argument("make_reference: mask does not match reference image");
  }
  const FeatureMatrix all = feature_map(image, build_feature_kernel(image.grid));
  ReferenceData ref;
  ref.features.resize(static_cast<Index>(pixels.size()), all.cols());
  ref.labels.resize(static_cast<Index>(pixels.size()));
  for (Index k = 0; k < ref.size(); ++k) {
    const Index p = pixels[k];
    if (p < 0 || p >= image.grid.pixels()) {
      throw std::invalid_argument("make_reference: pixel index out of range");
    }
    ref.features.row(k) = all.row(p);
    ref.labels(k) = mask(p);
  }
  return ref;
}

ReferenceData make_reference(const ImageField& image, const Vector& mask) {
  std::vector<Index> all(static_cast<std::size_t>(image.grid.pixels()));
  std::iota(all.begin(), all.end(), Index{0});
  return make_reference(image, mask, all);
}

std::vector<Index> stratified_pixels(const Vector& mask, Index count, std::uint64_t seed) {
  std::vector<Index> fg, bg;
  for (Index i = 0; i < mask.size(); ++i) (mask(i) >= 0.5 ? fg : bg).push_back(i);
  if (count < 0 || count > mask.size()) {
    throw std::invalid_argument("stratified_pixels: sample count out of range");
  }
  if (count == 0) return {};
  Index n_fg = static_cast<Index>(std::llround(static_cast<double>(count) *
                                               static_cast<double>(fg.size()) /
                                               static_cast<double>(mask.size())));
  if (!fg.empty() && !bg.empty() && count >= 2) n_fg = std::clamp<Index>(n_fg, 1, count - 1);
  n_fg = std::min<Index>(n_fg, static_cast<Index>(fg.size()));
  const Index n_bg = std::min<Index>(count - n_fg, static_cast<Index>(bg.size()));
  n_fg = count - n_bg;

  std::mt19937_64 rng(seed);
  std::vector<Index> out;
  auto take = [&](std::vector<Index>& pool, Index k) {
    std::shuffle(pool.begin(), pool.end(), rng);
    out.insert(out.end(), pool.begin(), pool.begin() + k);
  };
  take(fg, n_fg);
  take(bg, n_bg);
  std::sort(out.begin(), out.end());
  return out;
}

Problem::Problem(ImageField y, ForwardModel t, ReferenceData ref)
    : observed(std::move(y)),
      model(t),
      kernel(build_feature_kernel(observed.grid)),
      reference(std::move(ref)) {
  observed.validate();
  model.validate(observed.grid);
  if (reference.size() > 0 && reference.features.cols() != kernel.features()) {
    throw std::invalid_argument("Problem: reference features have the wrong dimension");
  }
  if (reference.labels.size() != reference.size()) {
    throw std::invalid_argument("Problem: reference labels and features disagree in count");
  }
}

Vector Problem::labels() const {
  Vector f = Vector::Zero(vertices());
  f.tail(reference.size()) = reference.labels;
  return f;
}

Vector Problem::fidelity(double mu) const {
  Vector m = Vector::Zero(vertices());
  m.tail(reference.size()).setConstant(mu);
  return m;
}

WeightFunction Problem::weights(const ImageField& x, double sigma) const {
  return WeightFunction(stack_features(feature_map(x, kernel), reference.features), sigma);
}

}  // namespace jrs
