#include "hdrtk/calibration.hpp"

#include <cmath>

#include "hdrtk/accumulate.hpp"
#include "hdrtk/color.hpp"

namespace hdrtk {

std::size_t OverexposureMask::count() const {
    std::size_t n = 0;
    for (double v : mask.data()) n += v != 0.0;
    return n;
}

OverexposureMask overexposure_mask(const LinearLdr& ldr, double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "tau must lie in (0, 1]");
    }
    Plane mean = channel_mean(ldr);
    for (double& v : mean.data()) v = v < tau ? 1.0 : 0.0;
    return {std::move(mean), tau};
}

CalibrationResult calibrate_hdr(const HdrImage& hdr, const LinearLdr& ldr, double tau) {
    require_same_shape(hdr, ldr, "calibrate_hdr");
    const OverexposureMask m = overexposure_mask(ldr, tau);

    CompensatedSum ldr_sum;
    CompensatedSum hdr_sum;
    auto mask = m.mask.data();
    auto h = hdr.data();
    auto l = ldr.data();
    std::size_t masked = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] == 0.0) continue;
        ++masked;
        for (int c = 0; c < 3; ++c) {
            ldr_sum += l[3 * i + c];
            hdr_sum += h[3 * i + c];
        }
    }
    if (masked == 0) {
        throw Error(ErrorCode::Uncalibratable, "every pixel is overexposed at tau=" + std::to_string(tau));
    }
    const double denom = hdr_sum.value();
    const double numer = ldr_sum.value();
    if (!(denom > 0.0) || !std::isfinite(denom)) {
        throw Error(ErrorCode::Uncalibratable, "HDR sum over non-overexposed pixels is zero");
    }
    const double scale = numer / denom;
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::Uncalibratable, "LDR sum over non-overexposed pixels is zero");
    }

    CalibrationResult out{hdr, scale, masked};
    for (double& v : out.calibrated.data()) v *= scale;
    return out;
}

SegMask luminance_seg_labels(const HdrImage& calibrated, double low, double high) {
    if (!(low > 0.0 && low < high)) {
        throw Error(ErrorCode::InvalidArgument, "segmentation thresholds need 0 < low < high");
    }
    const Plane mean = channel_mean(calibrated);
    SegMask out(calibrated.width(), calibrated.height());
    auto src = mean.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double v = src[i];
        const int cls = v <= low ? 0 : (v >= high ? 2 : 1);
        dst[3 * i + cls] = 1;
    }
    return out;
}

}  // namespace hdrtk
