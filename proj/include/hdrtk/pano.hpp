#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "hdrtk/image.hpp"
#include "hdrtk/vec3.hpp"

namespace hdrtk {

// Equirectangular convention: +z is up, colatitude theta = pi * (y + 0.5) / H
// is measured from +z, azimuth phi = 2 pi * (x + 0.5) / W - pi, so the left
// image edge is phi = -pi and the image centre column looks along +x.

/// Geometry shared by the panorama <-> ceiling-view conversions. The
/// ceiling view is the plane z = 0 seen from a camera at (0, 0, -d); its
/// image covers [-plane_extent, plane_extent]^2 with +x to the right and +y
/// up.
struct PanoProjection {
    int pano_w = 512;
    int pano_h = 256;
    int ceil_w = 256;
    int ceil_h = 256;
    double camera_offset = 1.0;
    double plane_extent = 1.0;

    void validate() const;
};

struct PixelCoord {
    double x = 0.0;
    double y = 0.0;
};

/// Unit direction through continuous pixel position (x, y); pixel centres sit
/// on integer coordinates.
Vec3 equirect_dir(double x, double y, int width, int height);
/// Continuous pixel position of a direction, x in [-0.5, W - 0.5).
PixelCoord dir_equirect(const Vec3& v, int width, int height);
/// Nearest pixel centre of a direction, wrapping horizontally.
std::array<int, 2> dir_equirect_pixel(const Vec3& v, int width, int height);

/// Where the ray from (0, 0, -d) through plane point (cx, cy, 0) leaves the
/// unit sphere on its upper half; empty when it exits below the equator.
std::optional<Vec3> ceiling_to_sphere(double cx, double cy, double camera_offset);
/// Plane point seen along p; empty for p_z < 0.
std::optional<std::array<double, 2>> sphere_to_ceiling(const Vec3& p, double camera_offset);

/// Plane point at the centre of ceiling pixel (i, j), and its inverse.
std::array<double, 2> ceiling_pixel_to_plane(double i, double j, const PanoProjection& proj);
PixelCoord plane_to_ceiling_pixel(double cx, double cy, const PanoProjection& proj);

/// Direction sampled by ceiling pixel (i, j) in p2c, if any.
std::optional<Vec3> ceiling_pixel_dir(int i, int j, const PanoProjection& proj);

/// Bilinear panorama lookup; wraps horizontally and clamps vertically.
template <typename Tag>
std::array<double, 3> sample_equirect(const Image<double, 3, Tag>& pano, double x, double y);
template <typename Tag>
std::array<double, 3> sample_equirect(const Image<double, 3, Tag>& pano, const Vec3& dir);

/// Panorama -> ceiling view. Plane points off the upper hemisphere are 0.
template <typename Tag>
Image<double, 3, Tag> p2c(const Image<double, 3, Tag>& pano, const PanoProjection& proj);

template <typename Tag>
struct C2PResult {
    Image<double, 3, Tag> image;
    /// 1 where the ceiling view determines the pixel, 0 where it was zero-filled.
    Plane valid;
};

/// Ceiling view -> panorama. Pixels below the equator, outside the plane
/// extent, or whose bilinear footprint touches a ceiling texel that P2C could
/// not image are set to 0 and marked invalid.
template <typename Tag>
C2PResult<Tag> c2p(const Image<double, 3, Tag>& ceil, const PanoProjection& proj);

inline constexpr double kDefaultMergeTau = 0.13;

/// max(0, mean_c(c2p(ceiling_ldr)) - tau) / (1 - tau), in the panorama domain.
Plane merge_mask(const LinearLdr& ceiling_ldr, const PanoProjection& proj,
                 double tau = kDefaultMergeTau);

/// m * c2p(ceiling_hdr) + (1 - m) * pano_hdr.
HdrImage merge_panorama(const HdrImage& ceiling_hdr, const HdrImage& pano_hdr, const Plane& mask,
                        const PanoProjection& proj);

/// Pinhole view from the sphere centre. yaw rotates about +z (0 looks along
/// +x), pitch tilts up; hfov is the horizontal field of view. Angles in radians.
HdrImage crop_perspective(const HdrImage& pano, double yaw, double pitch, double hfov, int out_w,
                          int out_h);

struct CropScheme {
    bool outdoor = false;
    double hfov_deg = 60.0;
    int width = 320;
    int height = 240;
};

struct Crop {
    HdrImage image;
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
};

/// Six crops at yaw 0, 60, ..., 300 on the horizon, plus three at yaw
/// 0, 120, 240 and pitch 45 unless the scene is outdoor. Output is 4:3.
std::vector<Crop> crop_set(const HdrImage& pano, const CropScheme& scheme = {});

// ---------------------------------------------------------------------------

namespace detail {

// Bilinear footprint in the ceiling image. When a fraction is zero the
// second index repeats the first.
struct CeilingFootprint {
    int i0 = 0, i1 = 0, j0 = 0, j1 = 0;
    double fx = 0.0, fy = 0.0;
};

/// Footprint of ceiling position (i, j); empty when any tap with non-zero
/// weight is off-image or off the imaged disk.
std::optional<CeilingFootprint> ceiling_footprint(double i, double j, const PanoProjection& proj);

inline double lerp(double a, double b, double t) { return a + t * (b - a); }

}  // namespace detail

template <typename Tag>
std::array<double, 3> sample_equirect(const Image<double, 3, Tag>& pano, double x, double y) {
    const int w = pano.width();
    const int h = pano.height();
    const double x0f = std::floor(x);
    const double fx = x - x0f;
    int x0 = static_cast<int>(x0f) % w;
    if (x0 < 0) x0 += w;
    const int x1 = x0 + 1 == w ? 0 : x0 + 1;
    const double yc = std::clamp(y, 0.0, static_cast<double>(h - 1));
    const int y0 = static_cast<int>(std::floor(yc));
    const int y1 = std::min(y0 + 1, h - 1);
    const double fy = yc - y0;
    std::array<double, 3> out{};
    for (int c = 0; c < 3; ++c) {
        const double top = detail::lerp(pano.at(x0, y0, c), pano.at(x1, y0, c), fx);
        const double bot = detail::lerp(pano.at(x0, y1, c), pano.at(x1, y1, c), fx);
        out[c] = detail::lerp(top, bot, fy);
    }
    return out;
}

template <typename Tag>
std::array<double, 3> sample_equirect(const Image<double, 3, Tag>& pano, const Vec3& dir) {
    const PixelCoord p = dir_equirect(dir, pano.width(), pano.height());
    return sample_equirect(pano, p.x, p.y);
}

template <typename Tag>
Image<double, 3, Tag> p2c(const Image<double, 3, Tag>& pano, const PanoProjection& proj) {
    proj.validate();
    require_dims(pano, proj.pano_w, proj.pano_h, "p2c panorama");
    Image<double, 3, Tag> out(proj.ceil_w, proj.ceil_h);
    for (int j = 0; j < proj.ceil_h; ++j) {
        for (int i = 0; i < proj.ceil_w; ++i) {
            const auto dir = ceiling_pixel_dir(i, j, proj);
            if (!dir) continue;
            const auto v = sample_equirect(pano, *dir);
            auto px = out.pixel(i, j);
            px[0] = v[0];
            px[1] = v[1];
            px[2] = v[2];
        }
    }
    return out;
}

template <typename Tag>
C2PResult<Tag> c2p(const Image<double, 3, Tag>& ceil, const PanoProjection& proj) {
    proj.validate();
    require_dims(ceil, proj.ceil_w, proj.ceil_h, "c2p ceiling");
    C2PResult<Tag> out{Image<double, 3, Tag>(proj.pano_w, proj.pano_h), Plane(proj.pano_w, proj.pano_h)};
    for (int y = 0; y < proj.pano_h; ++y) {
        for (int x = 0; x < proj.pano_w; ++x) {
            const Vec3 p = equirect_dir(x, y, proj.pano_w, proj.pano_h);
            const auto c = sphere_to_ceiling(p, proj.camera_offset);
            if (!c) continue;
            if (std::abs((*c)[0]) > proj.plane_extent || std::abs((*c)[1]) > proj.plane_extent) continue;
            const PixelCoord pc = plane_to_ceiling_pixel((*c)[0], (*c)[1], proj);
            const auto f = detail::ceiling_footprint(pc.x, pc.y, proj);
            if (!f) continue;
            auto px = out.image.pixel(x, y);
            for (int ch = 0; ch < 3; ++ch) {
                const double top = detail::lerp(ceil.at(f->i0, f->j0, ch), ceil.at(f->i1, f->j0, ch), f->fx);
                const double bot = detail::lerp(ceil.at(f->i0, f->j1, ch), ceil.at(f->i1, f->j1, ch), f->fx);
                px[ch] = detail::lerp(top, bot, f->fy);
            }
            out.valid.at(x, y, 0) = 1.0;
        }
    }
    return out;
}

}  // namespace hdrtk
