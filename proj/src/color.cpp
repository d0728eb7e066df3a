#include "hdrtk/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hdrtk {

namespace {

const std::array<double, 256>& decode_table() {
    static const std::array<double, 256> table = [] {
        std::array<double, 256> t{};
        for (int k = 0; k < 256; ++k) t[k] = srgb_decode(k / 255.0);
        return t;
    }();
    return table;
}

}  // namespace

double srgb_decode(double s) {
    if (s <= 0.04045) return s / 12.92;
    return std::pow((s + 0.055) / 1.055, 2.4);
}

double srgb_encode(double v) {
    v = std::clamp(v, 0.0, 1.0);
    if (v <= 0.0031308) return 12.92 * v;
    return 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

std::uint8_t quantize_unit(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

LinearLdr srgb_to_linear(const LdrImage& img) {
    const auto& table = decode_table();
    LinearLdr out(img.width(), img.height());
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = table[src[i]];
    return out;
}

LdrImage linear_to_srgb(const LinearLdr& img) {
    LdrImage out(img.width(), img.height());
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize_unit(srgb_encode(src[i]));
    return out;
}

LdrImage exposure_preview(const HdrImage& h, double exposure_ev, double dr_window_ev) {
    if (!(dr_window_ev > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "exposure window must be positive");
    }
    const double gain = std::exp2(exposure_ev);
    const double floor = std::exp2(-dr_window_ev);
    LdrImage out(h.width(), h.height());
    auto src = h.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        double v = src[i] * gain;
        v = v < floor ? 0.0 : std::min(v, 1.0);
        dst[i] = quantize_unit(srgb_encode(v));
    }
    return out;
}

}  // namespace hdrtk
