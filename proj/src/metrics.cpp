#include "jrs/metrics.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace jrs {

double psnr(const ImageField& x, const ImageField& reference) {
  require_same_shape(x, reference, "psnr");
  const double err = (x.values - reference.values).squaredNorm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(x.values.size()) / err);
}

double dice(const Vector& u, const Vector& truth) {
  if (u.size() != truth.size()) throw std::invalid_argument("dice: label lengths differ");
  double tp = 0.0, fp = 0.0, fn = 0.0;
  for (Index i = 0; i < u.size(); ++i) {
    const bool a = u(i) >= 0.5;
    const bool b = truth(i) >= 0.5;
    tp += a && b;
    fp += a && !b;
    fn += !a && b;
  }
  if (tp + fp + fn == 0.0) return 1.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

ImageField add_gaussian_noise(const ImageField& x, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("add_gaussian_noise: sigma must be non-negative");
  ImageField out = x;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  // row-major pixel order, channels innermost
  for (Index i = 0; i < out.values.rows(); ++i) {
    for (Index s = 0; s < out.values.cols(); ++s) out.values(i, s) += normal(rng);
  }
  return out;
}

ImageField clip_unit(const ImageField& x) {
  ImageField out = x;
  out.values = out.values.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

}  // namespace jrs
