#pragma once

#include "tvtv/core.hpp"

namespace tvtv {

// Quality of an estimate against ground truth. Inputs are expected on the
// normalized [0,1] scale; rmse and psnr are reported on the 8-bit scale.
struct MetricsRecord {
    double psnr = 0.0;   // dB, band-averaged, capped at kPsnrCap
    double ssim = 0.0;   // band-averaged
    double sam = 0.0;    // degrees
    double ergas = 0.0;
    double rmse = 0.0;   // 0-255 scale
};

inline constexpr double kPsnrCap = 100.0;
inline constexpr double kPeak = 255.0;
inline constexpr double kDefaultErgasRatio = 32.0;

double rmse(const HsCube& estimate, const HsCube& truth);
double psnr(const HsCube& estimate, const HsCube& truth);

// Single-scale SSIM over valid windows: 11x11 Gaussian, sigma 1.5,
// K1 = 0.01, K2 = 0.03, dynamic range 1. Bands must be at least 11x11.
double ssim(const HsCube& estimate, const HsCube& truth);

// Mean spectral angle in degrees; pixels where either spectrum has norm
// below 1e-12 are skipped.
double sam(const HsCube& estimate, const HsCube& truth);

// 100/d * sqrt(mean_s MSE_s / mean_s^2), with d the spatial scale ratio.
double ergas(const HsCube& estimate, const HsCube& truth, double ratio);

MetricsRecord evaluate(const HsCube& estimate, const HsCube& truth, double ergas_ratio = kDefaultErgasRatio);

}  // namespace tvtv
