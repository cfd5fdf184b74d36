#pragma once

#include "jrs/config.hpp"
#include "jrs/problem.hpp"

namespace jrs {

/// Largest reconstruction grid (in pixels) for which the dense energy is evaluated.
inline constexpr Index kDenseEnergyLimit = 64 * 64;

/// GL(u, Omega(F(x), z_d)) with the configured eps, mu chi_Z and reference labels,
/// summed densely over all vertex pairs. +infinity if u leaves [0, 1].
double coupling_energy(const Vector& u, const ImageField& x, const Problem& problem,
                       const JointConfig& config);

/// HuberTV(grad x) + alpha |T x - y|^2.
double reconstruction_energy(const ImageField& x, const Problem& problem, const JointConfig& config);

/// reconstruction_energy(x) + beta * coupling_energy(u, x). Throws
/// std::invalid_argument for grids above kDenseEnergyLimit pixels.
double joint_energy(const Vector& u, const ImageField& x, const Problem& problem,
                    const JointConfig& config);

}  // namespace jrs
