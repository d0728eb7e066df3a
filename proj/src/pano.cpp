#include "hdrtk/pano.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hdrtk/color.hpp"

namespace hdrtk {

using std::numbers::pi;

void PanoProjection::validate() const {
    if (pano_w < 2 || pano_h < 1 || pano_w != 2 * pano_h) {
        throw Error(ErrorCode::InvalidArgument, "panorama must be 2:1, got " + std::to_string(pano_w) +
                                                    "x" + std::to_string(pano_h));
    }
    if (ceil_w < 1 || ceil_w != ceil_h) {
        throw Error(ErrorCode::InvalidArgument, "ceiling view must be square");
    }
    if (!(camera_offset > 0.0 && camera_offset <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "camera offset must lie in (0, 1]");
    }
    if (!(plane_extent > 0.0)) throw Error(ErrorCode::InvalidArgument, "plane extent must be positive");
}

Vec3 equirect_dir(double x, double y, int width, int height) {
    const double theta = pi * (y + 0.5) / height;
    const double phi = 2.0 * pi * (x + 0.5) / width - pi;
    const double s = std::sin(theta);
    return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

PixelCoord dir_equirect(const Vec3& v, int width, int height) {
    const double len = length(v);
    const double theta = std::acos(std::clamp(v.z / len, -1.0, 1.0));
    const double phi = std::atan2(v.y, v.x);
    double x = (phi + pi) * width / (2.0 * pi) - 0.5;
    if (x >= width - 0.5) x -= width;
    return {x, theta * height / pi - 0.5};
}

std::array<int, 2> dir_equirect_pixel(const Vec3& v, int width, int height) {
    const PixelCoord p = dir_equirect(v, width, height);
    int x = static_cast<int>(std::lround(p.x)) % width;
    if (x < 0) x += width;
    const int y = std::clamp(static_cast<int>(std::lround(p.y)), 0, height - 1);
    return {x, y};
}

std::optional<Vec3> ceiling_to_sphere(double cx, double cy, double d) {
    const double rho2 = cx * cx + cy * cy;
    const double a = rho2 + d * d;
    const double disc = rho2 * (1.0 - d * d) + d * d;
    const double t = (d * d + std::sqrt(disc)) / a;
    if (t < 1.0) return std::nullopt;
    return Vec3{t * cx, t * cy, d * (t - 1.0)};
}

std::optional<std::array<double, 2>> sphere_to_ceiling(const Vec3& p, double d) {
    if (p.z < 0.0) return std::nullopt;
    const double s = d / (p.z + d);
    return std::array<double, 2>{s * p.x, s * p.y};
}

std::array<double, 2> ceiling_pixel_to_plane(double i, double j, const PanoProjection& proj) {
    const double e = proj.plane_extent;
    return {e * (2.0 * (i + 0.5) / proj.ceil_w - 1.0), e * (1.0 - 2.0 * (j + 0.5) / proj.ceil_h)};
}

PixelCoord plane_to_ceiling_pixel(double cx, double cy, const PanoProjection& proj) {
    const double e = proj.plane_extent;
    return {(cx / e + 1.0) * proj.ceil_w / 2.0 - 0.5, (1.0 - cy / e) * proj.ceil_h / 2.0 - 0.5};
}

std::optional<Vec3> ceiling_pixel_dir(int i, int j, const PanoProjection& proj) {
    const auto c = ceiling_pixel_to_plane(i, j, proj);
    return ceiling_to_sphere(c[0], c[1], proj.camera_offset);
}

namespace detail {

std::optional<CeilingFootprint> ceiling_footprint(double i, double j, const PanoProjection& proj) {
    CeilingFootprint f;
    const double i0 = std::floor(i);
    const double j0 = std::floor(j);
    f.i0 = static_cast<int>(i0);
    f.j0 = static_cast<int>(j0);
    f.fx = i - i0;
    f.fy = j - j0;
    f.i1 = f.fx > 0.0 ? f.i0 + 1 : f.i0;
    f.j1 = f.fy > 0.0 ? f.j0 + 1 : f.j0;
    if (f.i0 < 0 || f.j0 < 0 || f.i1 >= proj.ceil_w || f.j1 >= proj.ceil_h) return std::nullopt;
    for (int jj : {f.j0, f.j1}) {
        for (int ii : {f.i0, f.i1}) {
            if (!ceiling_pixel_dir(ii, jj, proj)) return std::nullopt;
        }
    }
    return f;
}

}  // namespace detail

Plane merge_mask(const LinearLdr& ceiling_ldr, const PanoProjection& proj, double tau) {
    if (!(tau >= 0.0 && tau < 1.0)) throw Error(ErrorCode::InvalidArgument, "merge tau must lie in [0, 1)");
    const auto back = c2p(ceiling_ldr, proj);
    Plane m = channel_mean(back.image);
    for (double& v : m.data()) v = std::min(1.0, std::max(0.0, v - tau) / (1.0 - tau));
    return m;
}

HdrImage merge_panorama(const HdrImage& ceiling_hdr, const HdrImage& pano_hdr, const Plane& mask,
                        const PanoProjection& proj) {
    require_dims(pano_hdr, proj.pano_w, proj.pano_h, "merge panorama");
    require_dims(mask, proj.pano_w, proj.pano_h, "merge mask");
    const auto back = c2p(ceiling_hdr, proj);
    HdrImage out = pano_hdr;
    auto c = back.image.data();
    auto m = mask.data();
    auto o = out.data();
    for (std::size_t i = 0; i < o.size(); ++i) {
        const double w = m[i / 3];
        o[i] = w * c[i] + (1.0 - w) * o[i];
    }
    return out;
}

HdrImage crop_perspective(const HdrImage& pano, double yaw, double pitch, double hfov, int out_w,
                          int out_h) {
    if (!(hfov > 0.0 && hfov < pi)) throw Error(ErrorCode::InvalidArgument, "hfov must lie in (0, pi)");
    const Vec3 forward{std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw), std::sin(pitch)};
    // Right follows increasing azimuth so crops are not mirrored.
    const Vec3 right{-std::sin(yaw), std::cos(yaw), 0.0};
    const Vec3 up{-std::sin(pitch) * std::cos(yaw), -std::sin(pitch) * std::sin(yaw), std::cos(pitch)};
    const double half_w = std::tan(hfov / 2.0);
    const double half_h = half_w * out_h / out_w;
    HdrImage out(out_w, out_h);
    for (int j = 0; j < out_h; ++j) {
        const double v = (1.0 - 2.0 * (j + 0.5) / out_h) * half_h;
        for (int i = 0; i < out_w; ++i) {
            const double u = (2.0 * (i + 0.5) / out_w - 1.0) * half_w;
            const Vec3 dir = forward + right * u + up * v;
            const auto s = sample_equirect(pano, dir);
            auto px = out.pixel(i, j);
            px[0] = s[0];
            px[1] = s[1];
            px[2] = s[2];
        }
    }
    return out;
}

std::vector<Crop> crop_set(const HdrImage& pano, const CropScheme& scheme) {
    if (scheme.width < 1 || scheme.height < 1 || scheme.width * 3 != scheme.height * 4) {
        throw Error(ErrorCode::InvalidArgument, "crop dimensions must be 4:3");
    }
    const double hfov = scheme.hfov_deg * pi / 180.0;
    std::vector<Crop> crops;
    auto add = [&](double yaw_deg, double pitch_deg) {
        crops.push_back({crop_perspective(pano, yaw_deg * pi / 180.0, pitch_deg * pi / 180.0, hfov,
                                          scheme.width, scheme.height),
                         yaw_deg, pitch_deg});
    };
    for (int k = 0; k < 6; ++k) add(60.0 * k, 0.0);
    if (!scheme.outdoor) {
        for (int k = 0; k < 3; ++k) add(120.0 * k, 45.0);
    }
    return crops;
}

}  // namespace hdrtk
