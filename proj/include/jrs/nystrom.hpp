#pragma once

#include "jrs/features.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace jrs {

/// Vertex set V = Y u Z. Vertices [0, reconstructed) form Y, the remaining
/// `reference` vertices form Z.
struct VertexPartition {
  Index reconstructed = 0;
  Index reference = 0;

  Index vertices() const { return reconstructed + reference; }
};

/// Gaussian similarity Omega_ij = exp(-|z_i - z_j|^2 / (q sigma^2)) over the
/// stacked feature rows of V. The diagonal is 1.
class WeightFunction {
 public:
  WeightFunction(FeatureMatrix features, double sigma);

  double operator()(Index i, Index j) const;
  Index vertices() const { return features_.rows(); }
  Index dimension() const { return features_.cols(); }
  double sigma() const { return sigma_; }
  const FeatureMatrix& features() const { return features_; }

  Matrix block(std::span<const Index> rows, std::span<const Index> cols) const;
  /// All of V against the given columns.
  Matrix columns(std::span<const Index> cols) const;
  Matrix dense() const;

 private:
  FeatureMatrix features_;
  double sigma_;
  double scale_;
};

/// Stacks z (over Y) above z_d (over Z).
FeatureMatrix stack_features(const FeatureMatrix& z, const FeatureMatrix& zd);

struct InterpolationSet {
  std::vector<Index> indices;
  Index from_unlabelled = 0;  // sampled from V \ Z
  Index from_reference = 0;   // sampled from Z
  std::uint64_t seed = 0;
  int attempt = 0;  // resampling round that produced this set

  Index size() const { return static_cast<Index>(indices.size()); }
};

/// Uniform sampling without replacement of K1 vertices from V \ Z and K2 from Z.
InterpolationSet sample_interpolation_set(const VertexPartition& partition, Index k1, Index k2,
                                          std::uint64_t seed);

/// X = V, which makes every Nystrom product exact.
InterpolationSet full_interpolation_set(Index vertices);

/// Splits a requested rank between Y and Z the way the segmentation and
/// reconstruction updates do: half from each, clamped to the available sizes.
std::pair<Index, Index> split_rank(const VertexPartition& partition, Index rank);

/// Pseudo-inverse of the symmetric interpolation block via its eigendecomposition.
/// Eigenvalues below `relative_tolerance * max|lambda|` are dropped.
class SymmetricInverse {
 public:
  static constexpr double kDefaultTolerance = 1e-12;

  explicit SymmetricInverse(const Matrix& a, double relative_tolerance = kDefaultTolerance);

  Matrix solve(const Matrix& rhs) const;
  Vector solve(const Vector& rhs) const;
  Index rank() const { return rank_; }
  bool singular() const { return rank_ < dimension_; }

 private:
  Matrix eigenvectors_;
  Vector inverse_eigenvalues_;
  Index rank_ = 0;
  Index dimension_ = 0;
};

/// Linear operator standing in for the (never materialised) weight matrix.
class WeightOperator {
 public:
  virtual ~WeightOperator() = default;
  virtual Index vertices() const = 0;
  virtual Matrix apply(const Matrix& v) const = 0;
  Vector apply(const Vector& v) const;
};

/// The dense weight matrix; used in exact mode and as a test oracle.
class DenseOmega final : public WeightOperator {
 public:
  explicit DenseOmega(const WeightFunction& weights);
  explicit DenseOmega(Matrix omega);

  Index vertices() const override { return omega_.rows(); }
  Matrix apply(const Matrix& v) const override;
  const Matrix& matrix() const { return omega_; }

 private:
  Matrix omega_;
};

/// Nystrom extension: Omega v ~ omega_VX (omega_XX^-1 (omega_VX^T v)).
class OmegaProduct final : public WeightOperator {
 public:
  OmegaProduct(const WeightFunction& weights, InterpolationSet set,
               double pivot_tolerance = SymmetricInverse::kDefaultTolerance);

  Index vertices() const override { return omega_vx_.rows(); }
  Matrix apply(const Matrix& v) const override;
  using WeightOperator::apply;

  const InterpolationSet& interpolation_set() const { return set_; }
  const Matrix& omega_vx() const { return omega_vx_; }
  const Matrix& omega_xx() const { return omega_xx_; }
  const SymmetricInverse& inverse() const { return inverse_; }
  bool rank_deficient() const { return inverse_.singular(); }

 private:
  InterpolationSet set_;
  Matrix omega_vx_;
  Matrix omega_xx_;
  SymmetricInverse inverse_;
};

struct NystromOptions {
  int max_resamples = 5;
  double pivot_tolerance = SymmetricInverse::kDefaultTolerance;
};

/// Samples X and builds the extension, resampling with fresh seeds while
/// omega_XX is numerically singular. After the retry budget the best-ranked
/// sample is kept and reported through rank_deficient().
OmegaProduct make_omega_product(const WeightFunction& weights, const VertexPartition& partition,
                                Index k1, Index k2, std::uint64_t seed,
                                const NystromOptions& options = {});

/// Low-rank factorisation Delta ~ U1 diag(lambda) U2^T of the random-walk
/// Laplacian together with degree estimates d_hat = omega_VX omega_XX^-1 omega_VX^T 1.
struct NystromFactors {
  Matrix u1;
  Matrix u2;
  Vector lambda;
  Vector degrees;
  InterpolationSet set;
  bool rank_deficient = false;

  Index vertices() const { return u1.rows(); }
  Index rank() const { return u1.cols(); }
  /// Eigenvalue estimates of D^-1/2 omega D^-1/2, i.e. 1 - lambda.
  Vector sigma() const { return Vector::Ones(lambda.size()) - lambda; }
};

/// Nystrom-QR on a fixed interpolation set. Throws std::runtime_error if an
/// estimated degree is not positive.
NystromFactors nystrom_qr(const WeightFunction& weights, InterpolationSet set,
                          const NystromOptions& options = {});

/// Samples X (K1 from V \ Z, K2 from Z) with the resampling policy of make_omega_product.
NystromFactors nystrom_qr(const WeightFunction& weights, const VertexPartition& partition,
                          Index k1, Index k2, std::uint64_t seed,
                          const NystromOptions& options = {});

/// U1 (lambda .* (U2^T v)).
Vector laplacian_matvec(const NystromFactors& factors, const Vector& v);

}  // namespace jrs
