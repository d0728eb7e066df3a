#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdrtk/image.hpp"
#include "hdrtk/vec3.hpp"

namespace hdrtk {

using Rgb = std::array<double, 3>;

struct Material {
    enum class Kind { Diffuse, Mirror, Glossy };
    Kind kind = Kind::Diffuse;
    Rgb albedo{1.0, 1.0, 1.0};
    /// Phong exponent of the glossy lobe.
    double exponent = 1.0;
};

struct Sphere {
    Vec3 center;
    double radius = 1.0;
    Material material;
};

/// Orthographic camera. yaw 0 looks along -y; positive tilt looks down.
struct OrthoCamera {
    Vec3 center{0.0, 6.0, 1.0};
    double yaw_deg = 0.0;
    double tilt_deg = 0.0;
    double half_width = 2.5;
    int width = 256;
    int height = 256;
};

struct SceneConfig {
    std::vector<Sphere> spheres;
    OrthoCamera camera;
    /// Diffuse ground plane at z = 0.
    std::optional<Rgb> ground;
    /// Camera rays that miss everything show the environment (or black).
    bool background = true;

    void validate() const;
};

/// Line-oriented scene description:
///
///   camera center 0 6 1 yaw 0 tilt 20 half_width 2.5 size 256 256
///   sphere center 0 0 1 radius 1 diffuse 0.8 0.8 0.8
///   sphere center 2 0 1 radius 1 mirror
///   sphere center 4 0 1 radius 1 glossy 64 0.9 0.9 0.9
///   ground 0.5 0.5 0.5
///   background off
///
/// '#' starts a comment. Throws InvalidArgument naming the offending line.
SceneConfig parse_scene(std::string_view text);
std::string format_scene(const SceneConfig& scene);

/// Four spheres (two diffuse, mirror, glossy) on a grey ground plane.
SceneConfig default_scene();

/// Irradiance at a surface with unit normal n, summed over every
/// environment texel with solid angle (2 pi / W)(pi / H) sin(theta). The
/// sum is divided by the discrete cosine integral and multiplied by pi, so
/// a uniform environment L0 gives exactly pi * L0.
Rgb diffuse_irradiance(const Vec3& normal, const HdrImage& env);
/// albedo * E(n) / pi.
Rgb diffuse_radiance(const Vec3& normal, const HdrImage& env, const Rgb& albedo);

/// Irradiance evaluated on an equirectangular grid of normals and looked up
/// bilinearly; render() uses it to avoid a full environment sum per pixel.
class IrradianceMap {
public:
    IrradianceMap(const HdrImage& env, int grid_w, int grid_h);
    Rgb lookup(const Vec3& normal) const;
    const HdrImage& grid() const { return grid_; }

private:
    HdrImage grid_;
};

struct RenderOptions {
    int irradiance_w = 64;
    int irradiance_h = 32;
    /// Glossy lobe quadrature: stratified in cos^(k+1) and azimuth.
    int glossy_theta = 8;
    int glossy_phi = 16;
};

/// Deterministic single-bounce render: diffuse from the irradiance map,
/// mirror from a bilinear environment lookup, glossy from a fixed
/// stratified grid over the cos^k lobe around the reflection. No shadows
/// or interreflection.
HdrImage render(const SceneConfig& scene, const HdrImage& env, const RenderOptions& opts = {});

struct CompareOptions {
    /// Exposure and window of the previews SSIM is computed on.
    double preview_ev = 0.0;
    double preview_window_ev = 8.0;
    double eps = 1e-6;
};

struct RenderComparison {
    double mse = 0.0;
    double log_psnr = 0.0;
    double ssim = 1.0;
};

/// `test` is scored against `reference`.
RenderComparison compare_renders(const HdrImage& test, const HdrImage& reference,
                                 const CompareOptions& opts = {});

struct IblEvaluation {
    RenderComparison scores;
    HdrImage pred_render;
    HdrImage gt_render;
    double pred_scale = 1.0;
    double gt_scale = 1.0;
};

/// Calibrates both environments against the LDR panorama, renders the scene
/// under each, and scores the prediction's render against the ground truth's.
IblEvaluation evaluate_ibl(const HdrImage& pred_env, const HdrImage& gt_env, const LinearLdr& ldr_env,
                           const SceneConfig& scene, const RenderOptions& render_opts = {},
                           const CompareOptions& compare_opts = {}, double tau = 0.83);

}  // namespace hdrtk
