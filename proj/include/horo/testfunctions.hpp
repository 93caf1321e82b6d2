#pragma once

#include <cstdint>
#include <string>

#include "horo/field.hpp"

namespace horo::testfn {

using field::Field;
using field::GridPtr;

/// e^{-|x|²/(2 w²)}
Field gaussian(const GridPtr& grid, double width = 1.0);
/// exp(1 - 1/(1 - |x|²/R²)) inside the ball of radius R, so the peak value is 1.
Field bump(const GridPtr& grid, double radius);
/// Product of C^∞ steps: 1 for |x_d| ≤ half_width, 0 beyond half_width + taper.
Field plateau(const GridPtr& grid, double half_width, double taper);
Field constant(const GridPtr& grid, double value = 1.0);
/// Sum of modulated Gaussian packets with carriers |k| ≤ cutoff, centers in the central half.
Field random_bandlimited(const GridPtr& grid, double cutoff, std::uint64_t seed, int packets = 6);

/// C^∞ transition, 0 for t ≤ 0 and 1 for t ≥ 1.
double smooth_step(double t);

}  // namespace horo::testfn
