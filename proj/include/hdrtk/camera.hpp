#pragma once

#include <cstdint>
#include <optional>

#include "hdrtk/image.hpp"

namespace hdrtk {

struct CameraRanges {
    double dr_min_ev = 9.6;
    double dr_max_ev = 14.8;
    double sigma_min = 0.3;
    double sigma_max = 0.5;
    double n_min = 0.8;
    double n_max = 1.0;
};

inline constexpr CameraRanges kCameraRanges{};
inline constexpr double kMiddleGray = 0.18;

/// One draw of the virtual camera. `exposure` is empty until auto-exposure
/// has resolved it against a particular image.
struct CameraSample {
    double dynamic_range_ev = 0.0;
    double crf_sigma = 0.0;
    double crf_n = 0.0;
    std::optional<double> exposure;
    std::uint64_t seed = 0;
};

/// Draws dynamic range, then sigma, then n (in that order) uniformly from
/// kCameraRanges using Rng(seed).
CameraSample sample_camera(std::uint64_t seed);

/// Exposure multiplier e with mean(clamp(e * h, 0, 1)) == target_mean,
/// located by bisection. The mean runs over every channel of every pixel
/// and is taken before any noise floor is applied.
double auto_expose(const HdrImage& h, double target_mean = kMiddleGray);

/// Saturates at 1 and zeroes values strictly below 2^-dr_ev.
LinearLdr apply_dynamic_range(const HdrImage& exposed, double dr_ev);

/// Parametric response (1 + sigma) v^n / (v^n + sigma).
double crf(double v, double sigma, double n);
LinearLdr apply_crf(const LinearLdr& img, double sigma, double n);

enum class CrfMode { Parametric, Identity };

struct SynthOptions {
    double target_mean = kMiddleGray;
    CrfMode crf_mode = CrfMode::Parametric;
};

struct SynthResult {
    LdrImage ldr;
    CameraSample sample;  // exposure resolved
};

/// auto_expose -> apply_dynamic_range -> CRF -> value * 255 rounded half up.
/// The CRF output is quantized directly, without a second sRGB encode.
SynthResult synth_ldr(const HdrImage& h, const CameraSample& sample, const SynthOptions& opts = {});

}  // namespace hdrtk
