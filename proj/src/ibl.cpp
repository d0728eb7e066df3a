#include "hdrtk/ibl.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hdrtk/calibration.hpp"
#include "hdrtk/color.hpp"
#include "hdrtk/metrics.hpp"
#include "hdrtk/pano.hpp"

namespace hdrtk {

using std::numbers::pi;

namespace {

struct Texel {
    Vec3 dir;
    double solid_angle;
    Rgb radiance;
};

std::vector<Texel> env_texels(const HdrImage& env) {
    const int w = env.width();
    const int h = env.height();
    std::vector<Texel> out;
    out.reserve(env.pixel_count());
    const double d_phi = 2.0 * pi / w;
    const double d_theta = pi / h;
    for (int y = 0; y < h; ++y) {
        const double sin_theta = std::sin(pi * (y + 0.5) / h);
        for (int x = 0; x < w; ++x) {
            auto px = env.pixel(x, y);
            out.push_back({equirect_dir(x, y, w, h), d_phi * d_theta * sin_theta, {px[0], px[1], px[2]}});
        }
    }
    return out;
}

Rgb irradiance_from_texels(const Vec3& n, const std::vector<Texel>& texels) {
    double weight = 0.0;
    Rgb acc{};
    for (const Texel& t : texels) {
        const double c = dot(n, t.dir);
        if (c <= 0.0) continue;
        const double wgt = c * t.solid_angle;
        weight += wgt;
        acc[0] += wgt * t.radiance[0];
        acc[1] += wgt * t.radiance[1];
        acc[2] += wgt * t.radiance[2];
    }
    if (weight <= 0.0) return {};
    const double norm = pi / weight;
    return {acc[0] * norm, acc[1] * norm, acc[2] * norm};
}

struct Hit {
    double t = std::numeric_limits<double>::infinity();
    Vec3 normal;
    const Material* material = nullptr;
};

// Builds an orthonormal basis around unit vector w.
void basis(const Vec3& w, Vec3& t, Vec3& b) {
    const Vec3 a = std::abs(w.x) > 0.9 ? Vec3{0.0, 1.0, 0.0} : Vec3{1.0, 0.0, 0.0};
    t = normalize(cross(a, w));
    b = cross(w, t);
}

}  // namespace

void SceneConfig::validate() const {
    for (const Sphere& s : spheres) {
        if (!(s.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "sphere radius must be positive");
        for (double a : s.material.albedo) {
            if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCode::InvalidArgument, "albedo must lie in [0, 1]");
        }
        if (s.material.kind == Material::Kind::Glossy && !(s.material.exponent >= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "glossy exponent must be >= 1");
        }
    }
    if (ground) {
        for (double a : *ground) {
            if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCode::InvalidArgument, "albedo must lie in [0, 1]");
        }
    }
    if (camera.width < 1 || camera.height < 1 || !(camera.half_width > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "camera needs a positive size and half_width");
    }
}

Rgb diffuse_irradiance(const Vec3& normal, const HdrImage& env) {
    return irradiance_from_texels(normalize(normal), env_texels(env));
}

Rgb diffuse_radiance(const Vec3& normal, const HdrImage& env, const Rgb& albedo) {
    const Rgb e = diffuse_irradiance(normal, env);
    return {albedo[0] * e[0] / pi, albedo[1] * e[1] / pi, albedo[2] * e[2] / pi};
}

IrradianceMap::IrradianceMap(const HdrImage& env, int grid_w, int grid_h) : grid_(grid_w, grid_h) {
    const auto texels = env_texels(env);
    for (int y = 0; y < grid_h; ++y) {
        for (int x = 0; x < grid_w; ++x) {
            const Rgb e = irradiance_from_texels(equirect_dir(x, y, grid_w, grid_h), texels);
            auto px = grid_.pixel(x, y);
            px[0] = e[0];
            px[1] = e[1];
            px[2] = e[2];
        }
    }
}

Rgb IrradianceMap::lookup(const Vec3& normal) const { return sample_equirect(grid_, normal); }

HdrImage render(const SceneConfig& scene, const HdrImage& env, const RenderOptions& opts) {
    scene.validate();
    const OrthoCamera& cam = scene.camera;
    const double yaw = cam.yaw_deg * pi / 180.0;
    const double tilt = cam.tilt_deg * pi / 180.0;
    const Vec3 forward{std::cos(tilt) * std::sin(yaw), -std::cos(tilt) * std::cos(yaw), -std::sin(tilt)};
    const Vec3 right{-std::cos(yaw), -std::sin(yaw), 0.0};
    const Vec3 up = cross(right, forward);

    bool needs_irradiance = scene.ground.has_value();
    for (const Sphere& s : scene.spheres) needs_irradiance |= s.material.kind == Material::Kind::Diffuse;
    std::optional<IrradianceMap> irr;
    if (needs_irradiance) irr.emplace(env, opts.irradiance_w, opts.irradiance_h);

    const double half_h = cam.half_width * cam.height / cam.width;
    HdrImage out(cam.width, cam.height);
    for (int j = 0; j < cam.height; ++j) {
        const double v = (1.0 - 2.0 * (j + 0.5) / cam.height) * half_h;
        for (int i = 0; i < cam.width; ++i) {
            const double u = (2.0 * (i + 0.5) / cam.width - 1.0) * cam.half_width;
            const Vec3 origin = cam.center + right * u + up * v;

            Hit hit;
            for (const Sphere& s : scene.spheres) {
                const Vec3 oc = origin - s.center;
                const double b = dot(oc, forward);
                const double c = dot(oc, oc) - s.radius * s.radius;
                const double disc = b * b - c;
                if (disc < 0.0) continue;
                const double t = -b - std::sqrt(disc);
                if (t > 0.0 && t < hit.t) {
                    hit.t = t;
                    hit.normal = (origin + forward * t - s.center) * (1.0 / s.radius);
                    hit.material = &s.material;
                }
            }
            Material ground_mat;
            if (scene.ground && forward.z < 0.0) {
                const double t = -origin.z / forward.z;
                if (t > 0.0 && t < hit.t) {
                    ground_mat.albedo = *scene.ground;
                    hit.t = t;
                    hit.normal = {0.0, 0.0, 1.0};
                    hit.material = &ground_mat;
                }
            }

            Rgb color{};
            if (!hit.material) {
                if (scene.background) color = sample_equirect(env, forward);
            } else {
                const Material& m = *hit.material;
                const Vec3 n = normalize(hit.normal);
                switch (m.kind) {
                    case Material::Kind::Diffuse: {
                        const Rgb e = irr->lookup(n);
                        for (int c = 0; c < 3; ++c) color[c] = m.albedo[c] * e[c] / pi;
                        break;
                    }
                    case Material::Kind::Mirror:
                        color = sample_equirect(env, reflect(forward, n));
                        for (int c = 0; c < 3; ++c) color[c] *= m.albedo[c];
                        break;
                    case Material::Kind::Glossy: {
                        const Vec3 r = normalize(reflect(forward, n));
                        Vec3 t, b;
                        basis(r, t, b);
                        Rgb acc{};
                        int accepted = 0;
                        for (int a = 0; a < opts.glossy_theta; ++a) {
                            const double cos_a =
                                std::pow((a + 0.5) / opts.glossy_theta, 1.0 / (m.exponent + 1.0));
                            const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
                            for (int p = 0; p < opts.glossy_phi; ++p) {
                                const double phi = 2.0 * pi * (p + 0.5) / opts.glossy_phi;
                                const Vec3 w = r * cos_a + (t * std::cos(phi) + b * std::sin(phi)) * sin_a;
                                if (dot(w, n) <= 0.0) continue;
                                const Rgb l = sample_equirect(env, w);
                                for (int c = 0; c < 3; ++c) acc[c] += l[c];
                                ++accepted;
                            }
                        }
                        // Lobes entirely below the surface fall back to the mirror direction.
                        const Rgb l = accepted ? Rgb{acc[0] / accepted, acc[1] / accepted, acc[2] / accepted}
                                               : sample_equirect(env, r);
                        for (int c = 0; c < 3; ++c) color[c] = m.albedo[c] * l[c];
                        break;
                    }
                }
            }
            auto px = out.pixel(i, j);
            px[0] = color[0];
            px[1] = color[1];
            px[2] = color[2];
        }
    }
    return out;
}

RenderComparison compare_renders(const HdrImage& test, const HdrImage& reference, const CompareOptions& opts) {
    require_same_shape(test, reference, "compare_renders");
    RenderComparison r;
    r.mse = mse(test, reference);
    r.log_psnr = log_psnr(test, reference, opts.eps);
    r.ssim = ssim(exposure_preview(test, opts.preview_ev, opts.preview_window_ev),
                  exposure_preview(reference, opts.preview_ev, opts.preview_window_ev));
    return r;
}

IblEvaluation evaluate_ibl(const HdrImage& pred_env, const HdrImage& gt_env, const LinearLdr& ldr_env,
                           const SceneConfig& scene, const RenderOptions& render_opts,
                           const CompareOptions& compare_opts, double tau) {
    const CalibrationResult pred = calibrate_hdr(pred_env, ldr_env, tau);
    const CalibrationResult gt = calibrate_hdr(gt_env, ldr_env, tau);
    IblEvaluation out;
    out.pred_scale = pred.scale_factor;
    out.gt_scale = gt.scale_factor;
    out.pred_render = render(scene, pred.calibrated, render_opts);
    out.gt_render = render(scene, gt.calibrated, render_opts);
    out.scores = compare_renders(out.pred_render, out.gt_render, compare_opts);
    return out;
}

}  // namespace hdrtk
