#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "hdrtk/hdrtk.hpp"
#include "json.hpp"

#ifndef HDRTK_VERSION
#define HDRTK_VERSION "dev"
#endif

namespace hdrtk::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Reads JSON config files. Nested objects address subcommands and arrays
// become multi-value inputs, so a manifest can be passed back as --config.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        Json j = Json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            const std::string name = opt->get_single_name();
            if (name.empty() || !opt->get_configurable()) continue;
            if (opt->count() > 0) {
                const auto& r = opt->results();
                j[name] = r.size() == 1 ? Json(r.front()) : Json(r);
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::exception& e) {
            throw CLI::ConversionError(std::string("invalid JSON config: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("JSON config must be an object");
        std::vector<CLI::ConfigItem> items;
        collect(j, {}, items);
        return items;
    }

private:
    static std::string scalar(const Json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void collect(const Json& obj, const std::vector<std::string>& parents,
                        std::vector<CLI::ConfigItem>& items) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (it->is_object()) {
                auto p = parents;
                p.push_back(it.key());
                collect(*it, p, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it->is_array()) {
                for (const Json& v : *it) {
                    if (!v.is_structured()) item.inputs.push_back(scalar(v));
                }
            } else if (!it->is_null()) {
                item.inputs.push_back(scalar(*it));
            }
            items.push_back(std::move(item));
        }
    }
};

const char* category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Usage: return "usage";
        case ErrorCategory::Io: return "io";
        case ErrorCategory::Numeric: return "numeric";
    }
    return "usage";
}

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Usage: return 1;
        case ErrorCategory::Io: return 2;
        case ErrorCategory::Numeric: return 3;
    }
    return 1;
}

struct Failure {
    ErrorCategory category = ErrorCategory::Usage;
    std::string code;
    std::string message;

    Json json() const { return {{"category", category_name(category)}, {"code", code}, {"message", message}}; }
};

Failure classify(const std::exception& e) {
    if (const auto* h = dynamic_cast<const Error*>(&e)) return {h->category(), to_string(h->code()), h->what()};
    if (dynamic_cast<const CLI::FileError*>(&e)) return {ErrorCategory::Io, "io", e.what()};
    if (dynamic_cast<const fs::filesystem_error*>(&e)) return {ErrorCategory::Io, "io", e.what()};
    if (dynamic_cast<const CLI::ParseError*>(&e)) return {ErrorCategory::Usage, "usage", e.what()};
    return {ErrorCategory::Numeric, "internal", e.what()};
}

int report(const Failure& f, std::ostream& err) {
    err << Json{{"error", f.json()}}.dump() << '\n';
    return exit_code(f.category);
}

// Records every option bound through it so the parameters can be written to
// a manifest under the option's own name.
class Params {
public:
    explicit Params(CLI::App* app) : app_(app) {}

    template <typename T>
    CLI::Option* add(const std::string& flags, T& var, const std::string& desc) {
        CLI::Option* o = app_->add_option(flags, var, desc)->capture_default_str();
        fields_.emplace_back(o->get_single_name(), [&var] { return Json(var); });
        return o;
    }

    CLI::Option* flag(const std::string& flags, bool& var, const std::string& desc) {
        CLI::Option* o = app_->add_flag(flags, var, desc);
        fields_.emplace_back(o->get_single_name(), [&var] { return Json(var); });
        return o;
    }

    Json json() const {
        Json j = Json::object();
        for (const auto& [name, get] : fields_) j[name] = get();
        return j;
    }

    CLI::App* app() const { return app_; }

private:
    CLI::App* app_;
    std::vector<std::pair<std::string, std::function<Json()>>> fields_;
};

void write_manifest(const fs::path& path, const std::string& sub, const Params& params, const Json& results) {
    Json m;
    m["tool"] = "hdrtk";
    m["tool_version"] = HDRTK_VERSION;
    m["subcommand"] = sub;
    m[sub] = params.json();
    m["results"] = results;
    const std::string text = m.dump(2) + "\n";
    io::write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

fs::path sidecar(const std::string& output) { return fs::path(output + ".json"); }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create directory " + dir + ": " + ec.message());
}

LinearLdr load_linear_ldr(const std::string& path, const std::string& encoding) {
    const LdrImage codes = io::load_ldr(path);
    if (encoding == "srgb") return srgb_to_linear(codes);
    LinearLdr lin(codes.width(), codes.height());
    for (std::size_t i = 0; i < lin.size(); ++i) lin.data()[i] = codes.data()[i] / 255.0;
    return lin;
}

SceneConfig load_scene(const std::string& path) {
    if (path == "default") return default_scene();
    const io::Bytes bytes = io::read_file(path);
    return parse_scene(std::string(bytes.begin(), bytes.end()));
}

LdrImage plane_to_ldr(const Plane& p) {
    LdrImage out(p.width(), p.height());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const std::uint8_t v = quantize_unit(std::clamp(p.data()[i], 0.0, 1.0));
        for (int c = 0; c < 3; ++c) out.data()[3 * i + c] = v;
    }
    return out;
}

HdrImage plane_to_hdr(const Plane& p) {
    HdrImage out(p.width(), p.height());
    for (std::size_t i = 0; i < p.size(); ++i)
        for (int c = 0; c < 3; ++c) out.data()[3 * i + c] = p.data()[i];
    return out;
}

// Runs f(0) .. f(n - 1) on at most `jobs` threads. f must not throw.
template <typename F>
void parallel_for(std::size_t n, int jobs, const F& f) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
}

// Per-file outcomes of a batch, kept in input order.
struct Batch {
    std::vector<Json> results;
    std::vector<std::optional<Failure>> failures;

    explicit Batch(std::size_t n) : results(n), failures(n) {}

    template <typename F>
    void run(std::size_t i, const std::string& input, const F& f) {
        try {
            results[i] = f();
        } catch (const std::exception& e) {
            failures[i] = classify(e);
            results[i] = {{"input", input}, {"status", "error"}, {"error", failures[i]->json()}};
        }
    }

    int finish(std::ostream& err) const {
        int code = 0;
        for (std::size_t i = 0; i < failures.size(); ++i) {
            if (!failures[i]) continue;
            err << Json{{"input", results[i]["input"]}, {"error", failures[i]->json()}}.dump() << '\n';
            if (code == 0) code = exit_code(failures[i]->category);
        }
        return code;
    }

    Json json() const { return Json(results); }
};

// Output paths for a batch: one file per input, named after its stem.
std::vector<std::string> batch_outputs(const std::vector<std::string>& inputs, const std::string& output,
                                       const std::string& out_dir, const std::string& ext) {
    if (output.empty() == out_dir.empty()) {
        throw Error(ErrorCode::InvalidArgument, "give exactly one of --output and --out-dir");
    }
    if (!output.empty()) {
        if (inputs.size() != 1) throw Error(ErrorCode::InvalidArgument, "--output takes a single input");
        return {output};
    }
    std::vector<std::string> outs;
    std::set<std::string> seen;
    for (const std::string& in : inputs) {
        const std::string stem = fs::path(in).stem().string();
        if (!seen.insert(stem).second) {
            throw Error(ErrorCode::InvalidArgument, "two inputs share the stem '" + stem + "'");
        }
        outs.push_back((fs::path(out_dir) / (stem + ext)).string());
    }
    return outs;
}

std::string batch_manifest(const std::string& output, const std::string& out_dir) {
    return out_dir.empty() ? sidecar(output).string() : (fs::path(out_dir) / "manifest.json").string();
}

struct Command {
    virtual ~Command() = default;
    virtual int run(std::ostream& out, std::ostream& err) = 0;
    std::unique_ptr<Params> params;
    std::string name;

    CLI::App* setup(CLI::App& root, const std::string& sub, const std::string& desc) {
        name = sub;
        params = std::make_unique<Params>(root.add_subcommand(sub, desc));
        return params->app();
    }
};

const auto kEncodings = CLI::IsMember({"srgb", "linear"});

struct Calibrate : Command {
    std::string hdr, ldr, output, encoding = "srgb";
    double tau = kDefaultOverexposureTau;

    explicit Calibrate(CLI::App& root) {
        setup(root, "calibrate", "Rescale an HDR image so its unsaturated pixels match an LDR exposure");
        params->add("hdr", hdr, "HDR input")->required();
        params->add("ldr", ldr, "8-bit PPM of the same scene")->required();
        params->add("-o,--output", output, "calibrated HDR (.hdr or .pfm)")->required();
        params->add("--tau", tau, "overexposure threshold on the LDR channel mean");
        params->add("--ldr-encoding", encoding, "how LDR codes are linearized")->check(kEncodings);
    }

    int run(std::ostream& out, std::ostream&) override {
        const CalibrationResult r = calibrate_hdr(io::load_hdr(hdr), load_linear_ldr(ldr, encoding), tau);
        io::save_hdr(output, r.calibrated);
        const Json res = {{"scale_factor", r.scale_factor}, {"masked_pixels", r.masked_pixels}};
        write_manifest(sidecar(output), name, *params, res);
        out << res.dump() << '\n';
        return 0;
    }
};

struct Segment : Command {
    std::string hdr, output, ldr, encoding = "srgb";
    double low = kDefaultSegLow, high = kDefaultSegHigh, tau = kDefaultOverexposureTau;

    explicit Segment(CLI::App& root) {
        setup(root, "segment", "Label pixels of a calibrated HDR image as dim, mid or bright");
        params->add("hdr", hdr, "calibrated HDR input")->required();
        params->add("-o,--output", output, "one-hot label image (.ppm, R dim, G mid, B bright)")->required();
        params->add("--low", low, "upper bound of the dim class");
        params->add("--high", high, "lower bound of the bright class");
        params->add("--ldr", ldr, "calibrate against this PPM first");
        params->add("--tau", tau, "overexposure threshold used with --ldr");
        params->add("--ldr-encoding", encoding, "how LDR codes are linearized")->check(kEncodings);
    }

    int run(std::ostream& out, std::ostream&) override {
        HdrImage h = io::load_hdr(hdr);
        if (!ldr.empty()) h = calibrate_hdr(h, load_linear_ldr(ldr, encoding), tau).calibrated;
        const SegMask seg = luminance_seg_labels(h, low, high);
        LdrImage img(seg.width(), seg.height());
        std::array<std::size_t, 3> counts{};
        for (std::size_t i = 0; i < seg.size(); ++i) {
            img.data()[i] = seg.data()[i] ? 255 : 0;
            counts[i % 3] += seg.data()[i];
        }
        io::save_ldr(output, img);
        const Json res = {{"dim", counts[0]}, {"mid", counts[1]}, {"bright", counts[2]}};
        write_manifest(sidecar(output), name, *params, res);
        out << res.dump() << '\n';
        return 0;
    }
};

struct Synth : Command {
    std::vector<std::string> inputs;
    std::string output, out_dir;
    std::uint64_t seed = 0;
    bool identity_crf = false;
    double target_mean = kMiddleGray;
    int jobs = 1;

    explicit Synth(CLI::App& root) {
        auto* app = setup(root, "synth", "Simulate 8-bit captures of HDR images with random virtual cameras");
        params->add("inputs", inputs, "HDR inputs")->required();
        params->add("-o,--output", output, "output PPM (single input)");
        params->add("--out-dir", out_dir, "directory receiving <stem>.ppm and manifest.json");
        params->add("--seed", seed, "master seed; file k uses splitmix64(seed + k * 0x9E3779B97F4A7C15)");
        params->flag("--identity-crf", identity_crf, "skip the response curve");
        params->add("--target-mean", target_mean, "auto-exposure target")->check(CLI::Range(1e-6, 1.0));
        app->add_option("-j,--jobs", jobs, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
    }

    int run(std::ostream&, std::ostream& err) override {
        const auto outs = batch_outputs(inputs, output, out_dir, ".ppm");
        if (!out_dir.empty()) ensure_dir(out_dir);
        const SynthOptions opts{target_mean, identity_crf ? CrfMode::Identity : CrfMode::Parametric};
        Batch batch(inputs.size());
        parallel_for(inputs.size(), jobs, [&](std::size_t i) {
            batch.run(i, inputs[i], [&] {
                const std::uint64_t s = derive_seed(seed, i);
                const SynthResult r = synth_ldr(io::load_hdr(inputs[i]), sample_camera(s), opts);
                io::save_ldr(outs[i], r.ldr);
                return Json{{"input", inputs[i]},
                            {"output", outs[i]},
                            {"status", "ok"},
                            {"seed", s},
                            {"dynamic_range_ev", r.sample.dynamic_range_ev},
                            {"crf_sigma", r.sample.crf_sigma},
                            {"crf_n", r.sample.crf_n},
                            {"exposure", *r.sample.exposure},
                            {"exposure_mean", "before_noise_floor"}};
            });
        });
        write_manifest(batch_manifest(output, out_dir), name, *params, batch.json());
        return batch.finish(err);
    }
};

struct Metrics : Command {
    std::string pred, gt, ldr, encoding = "srgb";
    double eps = 1e-6;
    double window = 8.0;

    explicit Metrics(CLI::App& root) {
        setup(root, "metrics", "Score a predicted HDR image against ground truth (JSON on stdout)");
        params->add("pred", pred, "predicted HDR")->required();
        params->add("gt", gt, "ground-truth HDR")->required();
        params->add("--ldr", ldr, "LDR whose brightest pixel anchors both images at 255 cd/m^2");
        params->add("--ldr-encoding", encoding, "how LDR codes are linearized")->check(kEncodings);
        params->add("--eps", eps, "guard inside logarithms");
        params->add("--window", window, "dynamic range in EV of the previews SSIM is computed on");
    }

    int run(std::ostream& out, std::ostream&) override {
        const HdrImage p = io::load_hdr(pred);
        const HdrImage g = io::load_hdr(gt);
        Json res;
        res["si_mse"] = si_mse(p, g, eps);
        HdrImage ap, ag;
        double peak = 0.0;
        if (!ldr.empty()) {
            AnchoredPair a = display_anchor(p, g, load_linear_ldr(ldr, encoding), eps);
            res["kappa"] = a.kappa;
            res["display_scale"] = a.display_scale;
            ap = std::move(a.pred);
            ag = std::move(a.gt);
            peak = kDisplayPeak;
        } else {
            const double kappa = si_scale_kappa(p, g, eps);
            res["kappa"] = kappa;
            ap = p;
            for (double& v : ap.data()) v *= kappa;
            ag = g;
            for (double v : g.data()) peak = std::max(peak, v);
        }
        res["log_psnr"] = log_psnr(ap, ag, eps);
        const double ev = peak > 0.0 ? -std::log2(peak) : 0.0;
        res["ssim"] = ssim(exposure_preview(ap, ev, window), exposure_preview(ag, ev, window));
        res["units"] = ldr.empty() ? "relative" : "cd/m^2";
        out << res.dump() << '\n';
        return 0;
    }
};

void add_geometry(Params& p, double& offset, double& extent) {
    p.add("--offset", offset, "distance of the ceiling camera below the sphere centre")
        ->check(CLI::Range(1e-6, 1.0));
    p.add("--extent", extent, "half-size of the ceiling plane window");
}

struct P2C : Command {
    std::string pano, output;
    int ceil_size = 256;
    double offset = 1.0, extent = 1.0;

    explicit P2C(CLI::App& root) {
        setup(root, "p2c", "Project the upper hemisphere of a panorama onto a ceiling view");
        params->add("pano", pano, "equirectangular HDR (2:1)")->required();
        params->add("-o,--output", output, "ceiling view (.hdr or .pfm)")->required();
        params->add("--ceil-size", ceil_size, "ceiling view width and height")->check(CLI::PositiveNumber);
        add_geometry(*params, offset, extent);
    }

    int run(std::ostream&, std::ostream&) override {
        const HdrImage src = io::load_hdr(pano);
        const PanoProjection proj{src.width(), src.height(), ceil_size, ceil_size, offset, extent};
        io::save_hdr(output, p2c(src, proj));
        write_manifest(sidecar(output), name, *params, Json::object());
        return 0;
    }
};

struct C2P : Command {
    std::string ceil, output, valid;
    int pano_width = 512;
    double offset = 1.0, extent = 1.0;

    explicit C2P(CLI::App& root) {
        setup(root, "c2p", "Map a ceiling view back into an equirectangular panorama");
        params->add("ceil", ceil, "square ceiling view")->required();
        params->add("-o,--output", output, "panorama (.hdr or .pfm)")->required();
        params->add("--pano-width", pano_width, "panorama width; the height is half of it")
            ->check(CLI::Range(2, 1 << 16));
        params->add("--valid", valid, "also write the validity mask (.ppm)");
        add_geometry(*params, offset, extent);
    }

    int run(std::ostream&, std::ostream&) override {
        const HdrImage src = io::load_hdr(ceil);
        const PanoProjection proj{pano_width, pano_width / 2, src.width(), src.height(), offset, extent};
        const auto r = c2p(src, proj);
        io::save_hdr(output, r.image);
        if (!valid.empty()) io::save_ldr(valid, plane_to_ldr(r.valid));
        std::size_t n = 0;
        for (double v : r.valid.data()) n += v > 0.0;
        write_manifest(sidecar(output), name, *params, {{"valid_pixels", n}});
        return 0;
    }
};

struct Merge : Command {
    std::string ceil_hdr, pano_hdr, ceil_ldr, output, mask, encoding = "srgb";
    double tau = kDefaultMergeTau, offset = 1.0, extent = 1.0;

    explicit Merge(CLI::App& root) {
        setup(root, "merge", "Blend a ceiling-view reconstruction into a panorama");
        params->add("ceil_hdr", ceil_hdr, "ceiling-view HDR")->required();
        params->add("pano_hdr", pano_hdr, "panorama HDR")->required();
        params->add("ceil_ldr", ceil_ldr, "ceiling-view LDR (.ppm) driving the blend mask")->required();
        params->add("-o,--output", output, "merged panorama (.hdr or .pfm)")->required();
        params->add("--mask", mask, "also write the blend mask (.hdr or .pfm)");
        params->add("--tau", tau, "mask threshold")->check(CLI::Range(0.0, 0.999999));
        params->add("--ldr-encoding", encoding, "how LDR codes are linearized")->check(kEncodings);
        add_geometry(*params, offset, extent);
    }

    int run(std::ostream&, std::ostream&) override {
        const HdrImage c = io::load_hdr(ceil_hdr);
        const HdrImage p = io::load_hdr(pano_hdr);
        const PanoProjection proj{p.width(), p.height(), c.width(), c.height(), offset, extent};
        const Plane m = merge_mask(load_linear_ldr(ceil_ldr, encoding), proj, tau);
        io::save_hdr(output, merge_panorama(c, p, m, proj));
        if (!mask.empty()) io::save_hdr(mask, plane_to_hdr(m));
        write_manifest(sidecar(output), name, *params, Json::object());
        return 0;
    }
};

struct CropSet : Command {
    std::string pano, out_dir, format = "hdr";
    bool outdoor = false;
    double hfov = 60.0;
    int width = 320, height = 240;

    explicit CropSet(CLI::App& root) {
        setup(root, "crop-set", "Cut the standard set of perspective crops from a panorama");
        params->add("pano", pano, "equirectangular HDR")->required();
        params->add("--out-dir", out_dir, "directory receiving the crops and manifest.json")->required();
        params->flag("--outdoor", outdoor, "skip the upward-looking crops");
        params->add("--hfov", hfov, "horizontal field of view in degrees")->check(CLI::Range(1.0, 179.0));
        params->add("--width", width, "crop width")->check(CLI::PositiveNumber);
        params->add("--height", height, "crop height")->check(CLI::PositiveNumber);
        params->add("--format", format, "output container")->check(CLI::IsMember({"hdr", "pfm"}));
    }

    int run(std::ostream&, std::ostream&) override {
        const auto crops = crop_set(io::load_hdr(pano), {outdoor, hfov, width, height});
        ensure_dir(out_dir);
        Json res = Json::array();
        for (std::size_t k = 0; k < crops.size(); ++k) {
            const Crop& c = crops[k];
            const std::string file = "crop_" + std::to_string(k) + "_yaw" +
                                     std::to_string(static_cast<int>(std::lround(c.yaw_deg))) + "_pitch" +
                                     std::to_string(static_cast<int>(std::lround(c.pitch_deg))) + "." + format;
            io::save_hdr(fs::path(out_dir) / file, c.image);
            res.push_back({{"output", file}, {"yaw_deg", c.yaw_deg}, {"pitch_deg", c.pitch_deg}});
        }
        write_manifest(fs::path(out_dir) / "manifest.json", name, *params, res);
        return 0;
    }
};

struct RenderParams {
    RenderOptions opts;

    void add(Params& p) {
        p.add("--irradiance-width", opts.irradiance_w, "irradiance map width")->check(CLI::PositiveNumber);
        p.add("--irradiance-height", opts.irradiance_h, "irradiance map height")->check(CLI::PositiveNumber);
        p.add("--glossy-theta", opts.glossy_theta, "glossy lobe samples in elevation")->check(CLI::PositiveNumber);
        p.add("--glossy-phi", opts.glossy_phi, "glossy lobe samples in azimuth")->check(CLI::PositiveNumber);
    }
};

struct Render : Command {
    std::string scene;
    std::vector<std::string> envs;
    std::string output, out_dir, format = "pfm";
    RenderParams rp;
    int jobs = 1;

    explicit Render(CLI::App& root) {
        auto* app = setup(root, "render", "Render a sphere scene lit by one or more environment panoramas");
        params->add("scene", scene, "scene description file, or 'default'")->required();
        params->add("envs", envs, "equirectangular HDR environments")->required();
        params->add("-o,--output", output, "rendered HDR (single environment)");
        params->add("--out-dir", out_dir, "directory receiving <stem>.<format> and manifest.json");
        params->add("--format", format, "container used with --out-dir")->check(CLI::IsMember({"hdr", "pfm"}));
        rp.add(*params);
        app->add_option("-j,--jobs", jobs, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
    }

    int run(std::ostream&, std::ostream& err) override {
        const SceneConfig sc = load_scene(scene);
        const auto outs = batch_outputs(envs, output, out_dir, "." + format);
        if (!out_dir.empty()) ensure_dir(out_dir);
        Batch batch(envs.size());
        parallel_for(envs.size(), jobs, [&](std::size_t i) {
            batch.run(i, envs[i], [&] {
                io::save_hdr(outs[i], render(sc, io::load_hdr(envs[i]), rp.opts));
                return Json{{"input", envs[i]}, {"output", outs[i]}, {"status", "ok"}};
            });
        });
        write_manifest(batch_manifest(output, out_dir), name, *params, batch.json());
        return batch.finish(err);
    }
};

struct EvalIbl : Command {
    std::string pred_env, gt_env, ldr_env, scene, renders, encoding = "srgb";
    double tau = kDefaultOverexposureTau;
    RenderParams rp;
    CompareOptions cmp;

    explicit EvalIbl(CLI::App& root) {
        setup(root, "eval-ibl", "Score a predicted environment by rendering with it (JSON on stdout)");
        params->add("pred_env", pred_env, "predicted HDR panorama")->required();
        params->add("gt_env", gt_env, "ground-truth HDR panorama")->required();
        params->add("ldr_env", ldr_env, "LDR panorama (.ppm) both are calibrated against")->required();
        params->add("scene", scene, "scene description file, or 'default'")->required();
        params->add("--tau", tau, "overexposure threshold for calibration");
        params->add("--ldr-encoding", encoding, "how LDR codes are linearized")->check(kEncodings);
        params->add("--renders", renders, "directory receiving pred.pfm and gt.pfm");
        params->add("--preview-ev", cmp.preview_ev, "exposure of the SSIM previews");
        params->add("--preview-window", cmp.preview_window_ev, "dynamic range of the SSIM previews in EV");
        rp.add(*params);
    }

    int run(std::ostream& out, std::ostream&) override {
        const IblEvaluation ev = evaluate_ibl(io::load_hdr(pred_env), io::load_hdr(gt_env),
                                              load_linear_ldr(ldr_env, encoding), load_scene(scene), rp.opts, cmp,
                                              tau);
        if (!renders.empty()) {
            ensure_dir(renders);
            io::save_hdr(fs::path(renders) / "pred.pfm", ev.pred_render);
            io::save_hdr(fs::path(renders) / "gt.pfm", ev.gt_render);
        }
        const Json res = {{"mse", ev.scores.mse},
                          {"log_psnr", ev.scores.log_psnr},
                          {"ssim", ev.scores.ssim},
                          {"pred_scale", ev.pred_scale},
                          {"gt_scale", ev.gt_scale}};
        if (!renders.empty()) write_manifest(fs::path(renders) / "manifest.json", name, *params, res);
        out << res.dump() << '\n';
        return 0;
    }
};

struct Preview : Command {
    std::string hdr, output;
    double ev = 0.0, window = 8.0;

    explicit Preview(CLI::App& root) {
        setup(root, "preview", "Map an exposure window of an HDR image to an 8-bit sRGB preview");
        params->add("hdr", hdr, "HDR input")->required();
        params->add("-o,--output", output, "preview (.ppm)")->required();
        params->add("--ev", ev, "exposure in stops; radiance 2^-ev maps to white");
        params->add("--window", window, "stops below white kept before clipping to black")
            ->check(CLI::PositiveNumber);
    }

    int run(std::ostream&, std::ostream&) override {
        io::save_ldr(output, exposure_preview(io::load_hdr(hdr), ev, window));
        write_manifest(sidecar(output), name, *params, Json::object());
        return 0;
    }
};

struct Convert : Command {
    std::string input, output;

    explicit Convert(CLI::App& root) {
        setup(root, "convert", "Convert between .hdr, .pfm and .ppm by output extension");
        params->add("input", input, "input image")->required();
        params->add("output", output, "output image")->required();
    }

    int run(std::ostream&, std::ostream&) override {
        std::string ext = fs::path(output).extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        const io::Bytes bytes = io::read_file(input);
        if (ext == ".ppm") {
            if (io::detect_format(bytes) == io::FileFormat::PPM6) {
                io::save_ldr(output, io::read_ppm(bytes));
            } else {
                HdrImage h = io::load_hdr(input);
                for (double& v : h.data()) v = std::min(v, 1.0);
                io::save_ldr(output, linear_to_srgb(retag<LinearLdr>(h)));
            }
        } else {
            io::save_hdr(output, io::load_hdr(input));
        }
        write_manifest(sidecar(output), name, *params, Json::object());
        return 0;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"HDR reconstruction toolkit: calibration, virtual cameras, panorama geometry and IBL scoring",
                 "hdrtk"};
    app.set_version_flag("--version", HDRTK_VERSION);
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file of option values; manifests are accepted");
    app.allow_config_extras(CLI::config_extras_mode::ignore);

    std::vector<std::unique_ptr<Command>> commands;
    commands.push_back(std::make_unique<Calibrate>(app));
    commands.push_back(std::make_unique<Segment>(app));
    commands.push_back(std::make_unique<Synth>(app));
    commands.push_back(std::make_unique<Metrics>(app));
    commands.push_back(std::make_unique<P2C>(app));
    commands.push_back(std::make_unique<C2P>(app));
    commands.push_back(std::make_unique<Merge>(app));
    commands.push_back(std::make_unique<CropSet>(app));
    commands.push_back(std::make_unique<Render>(app));
    commands.push_back(std::make_unique<EvalIbl>(app));
    commands.push_back(std::make_unique<Preview>(app));
    commands.push_back(std::make_unique<Convert>(app));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        return report(classify(e), err);
    }

    try {
        for (auto& cmd : commands) {
            if (cmd->params->app()->parsed()) return cmd->run(out, err);
        }
    } catch (const std::exception& e) {
        return report(classify(e), err);
    }
    return report({ErrorCategory::Usage, "usage", "no subcommand given"}, err);
}

}  // namespace hdrtk::cli
