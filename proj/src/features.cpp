#include "jrs/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jrs {

Index FeatureKernel::neighbour(Index pixel, Index p) const {
  const Index row = pixel / grid.width;
  const Index col = pixel % grid.width;
  const Index r = std::clamp<Index>(row + offsets[p][0], 0, grid.height - 1);
  const Index c = std::clamp<Index>(col + offsets[p][1], 0, grid.width - 1);
  return grid.index(r, c);
}

FeatureKernel build_feature_kernel(const PixelGrid& grid) {
  if (!grid.valid()) throw std::invalid_argument("build_feature_kernel: invalid grid");
  FeatureKernel kernel;
  kernel.grid = grid;
  double total = 0.0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      kernel.offsets.push_back({dr, dc});
      const double g = std::exp(-0.5 * (dr * dr + dc * dc));
      kernel.weights.push_back(g);
      total += g;
    }
  }
  for (double& w : kernel.weights) w *= 9.0 / total;
  return kernel;
}

FeatureMatrix feature_map(const ImageField& x, const FeatureKernel& kernel) {
  if (!(x.grid == kernel.grid) || x.values.rows() != x.grid.pixels() ||
      x.values.cols() != x.grid.channels) {
    throw std::invalid_argument("feature_map: image does not match kernel grid");
  }
  const Index n = x.grid.pixels();
  const Index k = kernel.size();
  FeatureMatrix z(n, k * x.grid.channels);
  for (Index i = 0; i < n; ++i) {
    for (Index p = 0; p < k; ++p) {
      const Index j = kernel.neighbour(i, p);
      for (Index s = 0; s < x.grid.channels; ++s) {
        z(i, s * k + p) = kernel.weights[p] * x.values(j, s);
      }
    }
  }
  return z;
}

ImageField feature_map_adjoint(const FeatureMatrix& w, const FeatureKernel& kernel) {
  const Index n = kernel.grid.pixels();
  const Index k = kernel.size();
  if (w.rows() != n || w.cols() != kernel.features()) {
    throw std::invalid_argument("feature_map_adjoint: feature matrix has wrong shape");
  }
  ImageField out(kernel.grid);
  for (Index i = 0; i < n; ++i) {
    for (Index p = 0; p < k; ++p) {
      const Index j = kernel.neighbour(i, p);
      for (Index s = 0; s < kernel.grid.channels; ++s) {
        out.values(j, s) += kernel.weights[p] * w(i, s * k + p);
      }
    }
  }
  return out;
}

double edge_weight(const Eigen::Ref<const Eigen::RowVectorXd>& zi,
                   const Eigen::Ref<const Eigen::RowVectorXd>& zj, Index q, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("edge_weight: sigma must be positive");
  if (q < 1) throw std::invalid_argument("edge_weight: q must be at least 1");
  return std::exp(-(zi - zj).squaredNorm() / (static_cast<double>(q) * sigma * sigma));
}

}  // namespace jrs
