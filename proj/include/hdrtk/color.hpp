#pragma once

#include <cstdint>

#include "hdrtk/image.hpp"

namespace hdrtk {

/// sRGB electro-optical transfer on a normalized value in [0, 1].
double srgb_decode(double encoded);
/// Inverse of srgb_decode; input is clamped to [0, 1] first.
double srgb_encode(double linear);

/// Round-half-up quantization of a [0, 1] value to an 8-bit code.
std::uint8_t quantize_unit(double v);

LinearLdr srgb_to_linear(const LdrImage& img);
LdrImage linear_to_srgb(const LinearLdr& img);

/// Linear preview of an HDR image through an exposure window of
/// `dr_window_ev` stops whose top sits at 1.0 after scaling by 2^exposure_ev.
/// Values under the window floor go to 0 rather than being stretched.
LdrImage exposure_preview(const HdrImage& h, double exposure_ev, double dr_window_ev);

/// Per-pixel arithmetic mean of the three channels.
template <typename T, typename Tag>
Plane channel_mean(const Image<T, 3, Tag>& img) {
    Plane out(img.width(), img.height());
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = (static_cast<double>(src[3 * i]) + static_cast<double>(src[3 * i + 1]) +
                  static_cast<double>(src[3 * i + 2])) /
                 3.0;
    }
    return out;
}

}  // namespace hdrtk
