#include "jrs/features.hpp"
#include "jrs/nystrom.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace jrs;

namespace {

// Feature of pixel (r, c), channel s, stencil entry (dr, dc), recomputed from scratch.
double direct_feature(const ImageField& x, Index r, Index c, Index s, int dr, int dc) {
  double total = 0.0;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) total += std::exp(-0.5 * (a * a + b * b));
  const Index rr = std::clamp<Index>(r + dr, 0, x.grid.height - 1);
  const Index cc = std::clamp<Index>(c + dc, 0, x.grid.width - 1);
  return 9.0 * std::exp(-0.5 * (dr * dr + dc * dc)) / total * x.at(rr, cc, s);
}

}  // namespace

TEST_CASE("feature kernel is the 3x3 Gaussian scaled to sum 9") {
  const FeatureKernel k = build_feature_kernel({4, 5, 1});
  REQUIRE(k.size() == 9);
  double sum = 0.0;
  for (double w : k.weights) sum += w;
  CHECK(sum == doctest::Approx(9.0).epsilon(1e-14));
  // centre weight: 9 / (1 + 4 e^-1/2 + 4 e^-1)
  CHECK(k.weights[4] == doctest::Approx(9.0 / (1 + 4 * std::exp(-0.5) + 4 * std::exp(-1.0))));
}

TEST_CASE("feature map matches a direct stencil evaluation with edge replication") {
  std::mt19937_64 rng(11);
  const PixelGrid g{5, 7, 2};
  const ImageField x = oracle::random_image(g, rng);
  const FeatureKernel k = build_feature_kernel(g);
  const FeatureMatrix z = feature_map(x, k);
  REQUIRE(z.rows() == 35);
  REQUIRE(z.cols() == 18);
  for (Index r = 0; r < g.height; ++r)
    for (Index c = 0; c < g.width; ++c)
      for (Index s = 0; s < 2; ++s)
        for (Index p = 0; p < 9; ++p) {
          const double expect = direct_feature(x, r, c, s, k.offsets[p][0], k.offsets[p][1]);
          CHECK(z(g.index(r, c), s * 9 + p) == doctest::Approx(expect).epsilon(1e-14));
        }
}

TEST_CASE("constant image gives identical feature rows") {
  const PixelGrid g{6, 6, 1};
  const FeatureMatrix z = feature_map(ImageField::constant(g, 0.3), build_feature_kernel(g));
  for (Index i = 1; i < z.rows(); ++i) CHECK((z.row(i) - z.row(0)).norm() == 0.0);
}

TEST_CASE("feature map is linear") {
  std::mt19937_64 rng(3);
  const PixelGrid g{6, 9, 3};
  const FeatureKernel k = build_feature_kernel(g);
  for (int t = 0; t < 20; ++t) {
    const ImageField a = oracle::random_image(g, rng, -1, 1), b = oracle::random_image(g, rng, -1, 1);
    const double s = std::uniform_real_distribution<double>(-3, 3)(rng);
    const double u = std::uniform_real_distribution<double>(-3, 3)(rng);
    const ImageField mix(g, s * a.values + u * b.values);
    const Matrix lhs = feature_map(mix, k);
    const Matrix rhs = s * Matrix(feature_map(a, k)) + u * Matrix(feature_map(b, k));
    CHECK(oracle::rel_err(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("feature map adjoint identity on random pairs") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const PixelGrid g{1 + static_cast<Index>(rng() % 7), 1 + static_cast<Index>(rng() % 7),
                      1 + static_cast<Index>(rng() % 3)};
    const FeatureKernel k = build_feature_kernel(g);
    const ImageField x = oracle::random_image(g, rng, -1, 1);
    const Matrix w = oracle::random_matrix(g.pixels(), k.features(), rng, -1, 1);
    const double lhs = oracle::frob_inner(feature_map(x, k), w);
    const double rhs = oracle::frob_inner(x.values, feature_map_adjoint(w, k).values);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("feature map rejects a mismatched grid") {
  const FeatureKernel k = build_feature_kernel({4, 4, 1});
  CHECK_THROWS_AS(feature_map(ImageField::constant({4, 5, 1}, 0.0), k), std::invalid_argument);
  CHECK_THROWS_AS(build_feature_kernel({0, 4, 1}), std::invalid_argument);
}

TEST_CASE("edge weights are symmetric, in (0, 1] and 1 on the diagonal") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const Index q = 1 + static_cast<Index>(rng() % 12);
    const Eigen::RowVectorXd a = oracle::random_matrix(1, q, rng, -2, 2);
    const Eigen::RowVectorXd b = oracle::random_matrix(1, q, rng, -2, 2);
    const double sigma = std::uniform_real_distribution<double>(0.2, 4)(rng);
    const double wab = edge_weight(a, b, q, sigma);
    CHECK(wab == edge_weight(b, a, q, sigma));
    CHECK(wab > 0.0);
    CHECK(wab <= 1.0);
    CHECK(edge_weight(a, a, q, sigma) == 1.0);
    CHECK(wab == doctest::Approx(std::exp(-(a - b).squaredNorm() / (q * sigma * sigma))));
  }
  CHECK_THROWS_AS(edge_weight(Eigen::RowVectorXd::Zero(2), Eigen::RowVectorXd::Zero(2), 2, 0.0),
                  std::invalid_argument);
}

TEST_CASE("weight function agrees with the dense Gaussian oracle") {
  std::mt19937_64 rng(21);
  const FeatureMatrix z = oracle::random_matrix(30, 9, rng);
  const WeightFunction w(z, 0.7);
  CHECK(oracle::rel_err(w.dense(), oracle::gaussian_weights(z, 0.7)) <= 1e-14);
  for (Index i = 0; i < 30; ++i) CHECK(w(i, i) == 1.0);
}
