#pragma once

#include "jrs/image.hpp"

#include <cstdint>

namespace jrs {

/// 10 log10(N l / |x - x*|_F^2) for unit peak; +infinity for identical images.
double psnr(const ImageField& x, const ImageField& reference);

/// Dice overlap after thresholding both label vectors at 1/2. Two empty masks score 1.
double dice(const Vector& u, const Vector& truth);

/// x + sigma g with g i.i.d. standard normal from a seeded generator. Not clipped.
ImageField add_gaussian_noise(const ImageField& x, double sigma, std::uint64_t seed);

/// Entries clamped into [0, 1].
ImageField clip_unit(const ImageField& x);

}  // namespace jrs
