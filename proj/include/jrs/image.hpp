#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace jrs {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Rectangular pixel grid; vertex index is the row-major pixel index.
struct PixelGrid {
  Index height = 0;
  Index width = 0;
  Index channels = 1;

  Index pixels() const { return height * width; }
  Index index(Index row, Index col) const { return row * width + col; }
  bool valid() const { return height > 0 && width > 0 && channels >= 1; }
  friend bool operator==(const PixelGrid&, const PixelGrid&) = default;
};

/// Image values stored as an N x channels matrix (one row per pixel).
struct ImageField {
  PixelGrid grid;
  Matrix values;

  ImageField() = default;
  explicit ImageField(const PixelGrid& g);
  ImageField(const PixelGrid& g, Matrix v);

  static ImageField constant(const PixelGrid& g, double value);

  double& at(Index row, Index col, Index channel = 0) {
    return values(grid.index(row, col), channel);
  }
  double at(Index row, Index col, Index channel = 0) const {
    return values(grid.index(row, col), channel);
  }

  /// Throws std::invalid_argument if the shape disagrees with the grid or an entry is non-finite.
  void validate() const;
};

void require_same_shape(const ImageField& a, const ImageField& b, const char* what);

/// splitmix64 finaliser; used to derive independent per-phase seeds from one run seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace jrs
