#pragma once

#include <utility>

#include "hdrtk/image.hpp"

namespace hdrtk {

inline constexpr double kPsnrCapDb = 99.0;
inline constexpr double kDisplayPeak = 255.0;  // cd/m^2

/// Linear-domain mean squared error over every sample.
double mse(const HdrImage& a, const HdrImage& b);

/// PSNR of log(pred + eps) against log(gt + eps), both normalized by gt's
/// log range (peak 1). Returns kPsnrCapDb when the images agree exactly.
double log_psnr(const HdrImage& pred, const HdrImage& gt, double eps = 1e-6);

/// Mean SSIM with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, over "valid" window positions. Images smaller than the window
/// shrink it to the largest odd size that fits.
double ssim(const Plane& a, const Plane& b, double dynamic_range = 255.0);
/// SSIM of the per-pixel channel means of two 8-bit images.
double ssim(const LdrImage& a, const LdrImage& b);

struct AnchoredPair {
    HdrImage pred;
    HdrImage gt;
    double kappa = 1.0;
    double display_scale = 1.0;
};

/// Aligns pred to gt by si_scale_kappa, then scales both so that gt's
/// channel mean at the brightest LDR pixel (first in row-major order on
/// ties) becomes 255 cd/m^2.
AnchoredPair display_anchor(const HdrImage& pred, const HdrImage& gt, const LinearLdr& ldr,
                            double eps = 1e-6);

}  // namespace hdrtk
