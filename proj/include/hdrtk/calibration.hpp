#pragma once

#include <cmath>

#include "hdrtk/image.hpp"

namespace hdrtk {

inline constexpr double kDefaultOverexposureTau = 0.83;
inline const double kDefaultSegLow = std::exp(-5.5);
inline const double kDefaultSegHigh = std::exp(0.1);

/// 1 where a pixel's channel mean is strictly below tau (not overexposed).
struct OverexposureMask {
    Plane mask;
    double tau = kDefaultOverexposureTau;

    std::size_t count() const;
};

struct CalibrationResult {
    HdrImage calibrated;
    double scale_factor = 1.0;
    std::size_t masked_pixels = 0;
};

OverexposureMask overexposure_mask(const LinearLdr& ldr, double tau = kDefaultOverexposureTau);

/// Rescales `hdr` so that its non-overexposed pixels sum-match `ldr`.
/// Sums run over all three channels of masked pixels with compensated
/// accumulation. Throws Uncalibratable when the mask or the masked HDR sum
/// is empty.
CalibrationResult calibrate_hdr(const HdrImage& hdr, const LinearLdr& ldr,
                                double tau = kDefaultOverexposureTau);

/// Dim / mid / bright one-hot labels from the channel mean of a calibrated
/// HDR image: mean <= low is class 0, mean >= high is class 2.
SegMask luminance_seg_labels(const HdrImage& calibrated, double low = kDefaultSegLow,
                             double high = kDefaultSegHigh);

}  // namespace hdrtk
