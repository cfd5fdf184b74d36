#include "jrs/nystrom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace jrs {

WeightFunction::WeightFunction(FeatureMatrix features, double sigma)
    : features_(std::move(features)), sigma_(sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("WeightFunction: sigma must be positive");
  if (features_.cols() < 1) throw std::invalid_argument("WeightFunction: empty feature rows");
  scale_ = 1.0 / (static_cast<double>(features_.cols()) * sigma * sigma);
}

double WeightFunction::operator()(Index i, Index j) const {
  return std::exp(-(features_.row(i) - features_.row(j)).squaredNorm() * scale_);
}

Matrix WeightFunction::block(std::span<const Index> rows, std::span<const Index> cols) const {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (Index c = 0; c < out.cols(); ++c) {
    for (Index r = 0; r < out.rows(); ++r) out(r, c) = (*this)(rows[r], cols[c]);
  }
  return out;
}

Matrix WeightFunction::columns(std::span<const Index> cols) const {
  Matrix out(vertices(), static_cast<Index>(cols.size()));
  for (Index c = 0; c < out.cols(); ++c) {
    for (Index r = 0; r < out.rows(); ++r) out(r, c) = (*this)(r, cols[c]);
  }
  return out;
}

Matrix WeightFunction::dense() const {
  const Index n = vertices();
  Matrix out(n, n);
  for (Index j = 0; j < n; ++j) {
    out(j, j) = 1.0;
    for (Index i = j + 1; i < n; ++i) {
      const double w = (*this)(i, j);
      out(i, j) = w;
      out(j, i) = w;
    }
  }
  return out;
}

FeatureMatrix stack_features(const FeatureMatrix& z, const FeatureMatrix& zd) {
  if (zd.rows() > 0 && z.cols() != zd.cols()) {
    throw std::invalid_argument("stack_features: feature dimensions differ");
  }
  FeatureMatrix out(z.rows() + zd.rows(), z.cols());
  out.topRows(z.rows()) = z;
  if (zd.rows() > 0) out.bottomRows(zd.rows()) = zd;
  return out;
}

InterpolationSet sample_interpolation_set(const VertexPartition& partition, Index k1, Index k2,
                                          std::uint64_t seed) {
  if (k1 < 0 || k2 < 0 || k1 > partition.reconstructed || k2 > partition.reference) {
    std::ostringstream msg;
    msg << "sample_interpolation_set: cannot draw " << k1 << " of " << partition.reconstructed
        << " and " << k2 << " of " << partition.reference << " vertices";
    throw std::invalid_argument(msg.str());
  }
  std::mt19937_64 rng(seed);
  auto draw = [&rng](Index offset, Index population, Index count, std::vector<Index>& out) {
    std::vector<Index> pool(static_cast<std::size_t>(population));
    std::iota(pool.begin(), pool.end(), offset);
    // partial Fisher-Yates
    for (Index i = 0; i < count; ++i) {
      std::uniform_int_distribution<Index> pick(i, population - 1);
      std::swap(pool[i], pool[pick(rng)]);
      out.push_back(pool[i]);
    }
  };
  InterpolationSet set;
  set.seed = seed;
  set.from_unlabelled = k1;
  set.from_reference = k2;
  set.indices.reserve(static_cast<std::size_t>(k1 + k2));
  draw(0, partition.reconstructed, k1, set.indices);
  draw(partition.reconstructed, partition.reference, k2, set.indices);
  return set;
}

InterpolationSet full_interpolation_set(Index vertices) {
  InterpolationSet set;
  set.indices.resize(static_cast<std::size_t>(vertices));
  std::iota(set.indices.begin(), set.indices.end(), Index{0});
  set.from_unlabelled = vertices;
  return set;
}

std::pair<Index, Index> split_rank(const VertexPartition& partition, Index rank) {
  rank = std::clamp<Index>(rank, 1, partition.vertices());
  Index k2 = std::min(rank / 2, partition.reference);
  Index k1 = rank - k2;
  if (k1 > partition.reconstructed) {
    k1 = partition.reconstructed;
    k2 = std::min(rank - k1, partition.reference);
  }
  return {k1, k2};
}

SymmetricInverse::SymmetricInverse(const Matrix& a, double relative_tolerance)
    : dimension_(a.rows()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SymmetricInverse: matrix not square");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("SymmetricInverse: eigendecomposition failed");
  }
  const Vector& values = eig.eigenvalues();
  const double largest = values.cwiseAbs().maxCoeff();
  const double cutoff = relative_tolerance * largest;
  std::vector<Index> kept;
  for (Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) > cutoff) kept.push_back(i);
  }
  rank_ = static_cast<Index>(kept.size());
  eigenvectors_.resize(a.rows(), rank_);
  inverse_eigenvalues_.resize(rank_);
  for (Index k = 0; k < rank_; ++k) {
    eigenvectors_.col(k) = eig.eigenvectors().col(kept[k]);
    inverse_eigenvalues_(k) = 1.0 / values(kept[k]);
  }
}

Matrix SymmetricInverse::solve(const Matrix& rhs) const {
  Matrix coeffs = eigenvectors_.transpose() * rhs;
  coeffs = inverse_eigenvalues_.asDiagonal() * coeffs;
  return eigenvectors_ * coeffs;
}

Vector SymmetricInverse::solve(const Vector& rhs) const {
  Matrix m = rhs;
  return solve(m).col(0);
}

Vector WeightOperator::apply(const Vector& v) const {
  Matrix m = v;
  return apply(m).col(0);
}

DenseOmega::DenseOmega(const WeightFunction& weights) : omega_(weights.dense()) {}

DenseOmega::DenseOmega(Matrix omega) : omega_(std::move(omega)) {
  if (omega_.rows() != omega_.cols()) throw std::invalid_argument("DenseOmega: not square");
}

Matrix DenseOmega::apply(const Matrix& v) const {
  if (v.rows() != omega_.cols()) throw std::invalid_argument("DenseOmega: vector length mismatch");
  return omega_ * v;
}

OmegaProduct::OmegaProduct(const WeightFunction& weights, InterpolationSet set,
                           double pivot_tolerance)
    : set_(std::move(set)),
      omega_vx_(weights.columns(set_.indices)),
      omega_xx_(weights.block(set_.indices, set_.indices)),
      inverse_(omega_xx_, pivot_tolerance) {
  if (set_.size() < 1) throw std::invalid_argument("OmegaProduct: empty interpolation set");
}

Matrix OmegaProduct::apply(const Matrix& v) const {
  if (v.rows() != omega_vx_.rows()) {
    throw std::invalid_argument("OmegaProduct: vector length mismatch");
  }
  return omega_vx_ * inverse_.solve(Matrix(omega_vx_.transpose() * v));
}

OmegaProduct make_omega_product(const WeightFunction& weights, const VertexPartition& partition,
                                Index k1, Index k2, std::uint64_t seed,
                                const NystromOptions& options) {
  if (k1 + k2 == partition.vertices()) {
    return OmegaProduct(weights, full_interpolation_set(partition.vertices()),
                        options.pivot_tolerance);
  }
  std::optional<OmegaProduct> best;
  for (int attempt = 0; attempt <= options.max_resamples; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : mix_seed(seed, static_cast<std::uint64_t>(attempt));
    InterpolationSet set = sample_interpolation_set(partition, k1, k2, s);
    set.attempt = attempt;
    OmegaProduct candidate(weights, std::move(set), options.pivot_tolerance);
    if (!candidate.rank_deficient()) return candidate;
    if (!best || candidate.inverse().rank() > best->inverse().rank()) best = std::move(candidate);
  }
  return std::move(*best);
}

namespace {

NystromFactors factors_from(const OmegaProduct& op) {
  const Index n = op.vertices();
  const Index k = op.interpolation_set().size();
  NystromFactors f;
  f.set = op.interpolation_set();
  f.rank_deficient = op.rank_deficient();

  f.degrees = op.apply(Vector(Vector::Ones(n)));
  for (Index i = 0; i < n; ++i) {
    if (!(f.degrees(i) > 0.0)) {
      std::ostringstream msg;
      msg << "nystrom_qr: estimated degree " << f.degrees(i) << " at vertex " << i
          << " is not positive";
      throw std::runtime_error(msg.str());
    }
  }
  const Vector inv_sqrt = f.degrees.cwiseSqrt().cwiseInverse();
  const Matrix scaled = inv_sqrt.asDiagonal() * op.omega_vx();

  Eigen::HouseholderQR<Matrix> qr(scaled);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, k);
  const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  Matrix s = r * op.inverse().solve(Matrix(r.transpose()));
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success) throw std::runtime_error("nystrom_qr: eigensolver failed");

  f.lambda = Vector::Ones(k) - eig.eigenvalues();
  const Matrix us = q * eig.eigenvectors();
  f.u1 = inv_sqrt.asDiagonal() * us;
  f.u2 = f.degrees.cwiseSqrt().asDiagonal() * us;
  return f;
}

}  // namespace

NystromFactors nystrom_qr(const WeightFunction& weights, InterpolationSet set,
                          const NystromOptions& options) {
  OmegaProduct op(weights, std::move(set), options.pivot_tolerance);
  return factors_from(op);
}

NystromFactors nystrom_qr(const WeightFunction& weights, const VertexPartition& partition,
                          Index k1, Index k2, std::uint64_t seed, const NystromOptions& options) {
  const OmegaProduct op = make_omega_product(weights, partition, k1, k2, seed, options);
  return factors_from(op);
}

Vector laplacian_matvec(const NystromFactors& factors, const Vector& v) {
  if (v.size() != factors.vertices()) {
    throw std::invalid_argument("laplacian_matvec: vector length mismatch");
  }
  return factors.u1 * factors.lambda.cwiseProduct(factors.u2.transpose() * v);
}

}  // namespace jrs
