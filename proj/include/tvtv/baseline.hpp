#pragma once

#include "tvtv/core.hpp"

#include <cstddef>

namespace tvtv {

// Keys cubic kernel weight with a = -0.5 (Catmull-Rom).
double cubic_weight(double distance);

// Per-band bicubic upsampling by an integer factor with half-pixel centers
// and edge clamping. factor == 1 returns the input unchanged.
HsCube bicubic_upsample(const HsCube& z, std::size_t factor);

// Bicubic upsample of Z followed by the minimum-norm spectral correction
// (Y - U R)(R^T R)^{-1} R^T, so the result reproduces Y exactly through R.
HsCube naive_fuse(const HsCube& z, const HsCube& y, const SpectralMatrix& r, std::size_t factor);

}  // namespace tvtv
