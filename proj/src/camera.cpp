#include "hdrtk/camera.hpp"

#include <algorithm>
#include <cmath>

#include "hdrtk/accumulate.hpp"
#include "hdrtk/color.hpp"
#include "hdrtk/rng.hpp"

namespace hdrtk {

namespace {

double clipped_mean(std::span<const double> values, double e) {
    CompensatedSum s;
    for (double v : values) s += std::min(e * v, 1.0);
    return s.value() / static_cast<double>(values.size());
}

}  // namespace

CameraSample sample_camera(std::uint64_t seed) {
    Rng rng(seed);
    CameraSample s;
    s.dynamic_range_ev = rng.uniform(kCameraRanges.dr_min_ev, kCameraRanges.dr_max_ev);
    s.crf_sigma = rng.uniform(kCameraRanges.sigma_min, kCameraRanges.sigma_max);
    s.crf_n = rng.uniform(kCameraRanges.n_min, kCameraRanges.n_max);
    s.seed = seed;
    return s;
}

double auto_expose(const HdrImage& h, double target_mean) {
    if (!(target_mean > 0.0 && target_mean < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "auto-exposure target must lie in (0, 1)");
    }
    auto values = h.data();
    CompensatedSum total;
    std::size_t positive = 0;
    for (double v : values) {
        total += v;
        positive += v > 0.0;
    }
    if (positive == 0) throw Error(ErrorCode::AllZeroImage, "auto-exposure needs a positive pixel");
    // Fully saturating every positive sample gives the largest reachable mean.
    const double reachable = static_cast<double>(positive) / static_cast<double>(values.size());
    if (reachable <= target_mean) {
        throw Error(ErrorCode::UnreachableTarget,
                    "auto-exposure target exceeds the fraction of non-black samples");
    }

    // Clipping only lowers the mean, so target/mean(h) is a lower bracket.
    const double mean = total.value() / static_cast<double>(values.size());
    double lo = target_mean / mean;
    if (clipped_mean(values, lo) >= target_mean) return lo;
    double hi = lo;
    do {
        lo = hi;
        hi *= 2.0;
    } while (clipped_mean(values, hi) < target_mean);

    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (clipped_mean(values, mid) < target_mean) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

LinearLdr apply_dynamic_range(const HdrImage& exposed, double dr_ev) {
    const double floor = std::exp2(-dr_ev);
    LinearLdr out(exposed.width(), exposed.height());
    auto src = exposed.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double v = src[i];
        dst[i] = v < floor ? 0.0 : std::min(v, 1.0);
    }
    return out;
}

double crf(double v, double sigma, double n) {
    if (v <= 0.0) return 0.0;
    const double p = std::pow(v, n);
    return (1.0 + sigma) * p / (p + sigma);
}

LinearLdr apply_crf(const LinearLdr& img, double sigma, double n) {
    if (!(sigma > 0.0) || !(n > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "CRF parameters must be positive");
    }
    LinearLdr out = img;
    for (double& v : out.data()) v = crf(v, sigma, n);
    return out;
}

SynthResult synth_ldr(const HdrImage& h, const CameraSample& sample, const SynthOptions& opts) {
    const double e = auto_expose(h, opts.target_mean);
    HdrImage exposed = h;
    for (double& v : exposed.data()) v *= e;
    LinearLdr signal = apply_dynamic_range(exposed, sample.dynamic_range_ev);
    if (opts.crf_mode == CrfMode::Parametric) {
        signal = apply_crf(signal, sample.crf_sigma, sample.crf_n);
    }
    LdrImage ldr(h.width(), h.height());
    auto src = signal.data();
    auto dst = ldr.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize_unit(src[i]);

    CameraSample resolved = sample;
    resolved.exposure = e;
    return {std::move(ldr), resolved};
}

}  // namespace hdrtk
