#pragma once

#include "jrs/image.hpp"

#include <array>
#include <vector>

namespace jrs {

/// Per-vertex feature vectors, one contiguous row per vertex. Columns are
/// grouped by channel: block s holds the k stencil samples of channel s.
using FeatureMatrix = RowMatrix;

/// Stencil of k image-neighbours with kernel weights. Neighbours outside the
/// grid are replaced by the nearest edge pixel (replication padding).
struct FeatureKernel {
  PixelGrid grid;
  std::vector<std::array<int, 2>> offsets;  // (row, col) displacement per stencil entry
  std::vector<double> weights;

  Index size() const { return static_cast<Index>(weights.size()); }
  Index features() const { return size() * grid.channels; }
  Index neighbour(Index pixel, Index p) const;
};

/// 3x3 stencil; weights are 9 times the normalised sigma = 1 Gaussian.
FeatureKernel build_feature_kernel(const PixelGrid& grid);

FeatureMatrix feature_map(const ImageField& x, const FeatureKernel& kernel);

ImageField feature_map_adjoint(const FeatureMatrix& w, const FeatureKernel& kernel);

/// exp(-|zi - zj|^2 / (q sigma^2)).
double edge_weight(const Eigen::Ref<const Eigen::RowVectorXd>& zi,
                   const Eigen::Ref<const Eigen::RowVectorXd>& zj, Index q, double sigma);

}  // namespace jrs
