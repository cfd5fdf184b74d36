#pragma once

#include "jrs/features.hpp"
#include "jrs/forward_model.hpp"
#include "jrs/nystrom.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace jrs {

/// Labelled reference vertices Z: their features z_d and labels f|_Z.
struct ReferenceData {
  FeatureMatrix features;
  Vector labels;

  Index size() const { return features.rows(); }
};

/// Features of the listed pixels of a reference image, computed with the
/// stencil of the reference grid, and their mask values as labels.
ReferenceData make_reference(const ImageField& image, const Vector& mask,
                             std::span<const Index> pixels);

/// Every pixel of the reference image.
ReferenceData make_reference(const ImageField& image, const Vector& mask);

/// `count` pixels drawn without replacement, split between mask classes in
/// proportion to their size with at least one from each non-empty class.
std::vector<Index> stratified_pixels(const Vector& mask, Index count, std::uint64_t seed);

/// Observation y with its forward model and the fixed reference data.
/// Vertices are the pixels of y (set Y) followed by the reference vertices Z.
struct Problem {
  ImageField observed;
  ForwardModel model;
  FeatureKernel kernel;
  ReferenceData reference;

  Problem(ImageField y, ForwardModel t, ReferenceData ref);

  const PixelGrid& grid() const { return observed.grid; }
  VertexPartition partition() const { return {observed.grid.pixels(), reference.size()}; }
  Index vertices() const { return partition().vertices(); }

  /// f over V: zero on Y, the reference labels on Z.
  Vector labels() const;
  /// mu chi_Z.
  Vector fidelity(double mu) const;
  /// Weight function over V for a candidate reconstruction x.
  WeightFunction weights(const ImageField& x, double sigma) const;
};

}  // namespace jrs
