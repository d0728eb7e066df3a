#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "hdrtk/hdrtk.hpp"

namespace py = pybind11;
using namespace hdrtk;

namespace {

using F64 = py::array_t<double, py::array::c_style | py::array::forcecast>;
using U8 = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

template <typename Img, typename Arr>
Img to_image(const Arr& a, const char* what) {
    constexpr int ch = Img::channels;
    const bool ok = ch == 1 ? (a.ndim() == 2 || (a.ndim() == 3 && a.shape(2) == 1)) : (a.ndim() == 3 && a.shape(2) == ch);
    if (!ok) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string(what) + ": expected an array of shape (H, W" + (ch == 1 ? ")" : ", 3)"));
    }
    const int h = static_cast<int>(a.shape(0));
    const int w = static_cast<int>(a.shape(1));
    std::vector<typename Img::value_type> data(a.data(), a.data() + a.size());
    return Img(w, h, std::move(data));
}

template <typename Img>
py::array_t<typename Img::value_type> to_array(const Img& img) {
    std::vector<py::ssize_t> shape{img.height(), img.width()};
    if (Img::channels > 1) shape.push_back(Img::channels);
    py::array_t<typename Img::value_type> out(shape);
    std::memcpy(out.mutable_data(), img.data().data(), img.size() * sizeof(typename Img::value_type));
    return out;
}

HdrImage hdr(const F64& a) {
    HdrImage img = to_image<HdrImage>(a, "hdr");
    validate_hdr(img);
    return img;
}
LinearLdr linear(const F64& a) { return to_image<LinearLdr>(a, "ldr"); }
LdrImage ldr8(const U8& a) { return to_image<LdrImage>(a, "ldr"); }
Plane plane(const F64& a) { return to_image<Plane>(a, "mask"); }

PanoProjection projection(int pano_w, int ceil_size, double offset, double extent) {
    PanoProjection p{pano_w, pano_w / 2, ceil_size, ceil_size, offset, extent};
    p.validate();
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "HDR calibration, virtual cameras, losses, panorama geometry and IBL rendering";

    static py::exception<Error> error(m, "HdrtkError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error;
            py::object inst = exc(e.what());
            inst.attr("code") = to_string(e.code());
            PyErr_SetObject(error.ptr(), inst.ptr());
        }
    });

    m.def("load_hdr", [](const std::string& path) { return to_array(io::load_hdr(path)); }, py::arg("path"));
    m.def("save_hdr", [](const std::string& path, const F64& img) { io::save_hdr(path, hdr(img)); },
          py::arg("path"), py::arg("image"));
    m.def("load_ldr", [](const std::string& path) { return to_array(io::load_ldr(path)); }, py::arg("path"));
    m.def("save_ldr", [](const std::string& path, const U8& img) { io::save_ldr(path, ldr8(img)); },
          py::arg("path"), py::arg("image"));

    m.def("srgb_to_linear", [](const U8& img) { return to_array(srgb_to_linear(ldr8(img))); });
    m.def("linear_to_srgb", [](const F64& img) { return to_array(linear_to_srgb(linear(img))); });
    m.def("exposure_preview",
          [](const F64& img, double ev, double window) { return to_array(exposure_preview(hdr(img), ev, window)); },
          py::arg("hdr"), py::arg("ev") = 0.0, py::arg("window") = 8.0);

    m.def(
        "overexposure_mask",
        [](const F64& ldr, double tau) { return to_array(overexposure_mask(linear(ldr), tau).mask); },
        py::arg("ldr"), py::arg("tau") = kDefaultOverexposureTau);
    m.def(
        "calibrate_hdr",
        [](const F64& h, const F64& ldr, double tau) {
            const CalibrationResult r = calibrate_hdr(hdr(h), linear(ldr), tau);
            return py::make_tuple(to_array(r.calibrated), r.scale_factor);
        },
        py::arg("hdr"), py::arg("ldr"), py::arg("tau") = kDefaultOverexposureTau,
        "Returns (calibrated, scale_factor).");
    m.def(
        "luminance_seg_labels",
        [](const F64& h, double low, double high) { return to_array(luminance_seg_labels(hdr(h), low, high)); },
        py::arg("hdr"), py::arg("low") = kDefaultSegLow, py::arg("high") = kDefaultSegHigh);

    py::class_<CameraSample>(m, "CameraSample")
        .def_readonly("dynamic_range_ev", &CameraSample::dynamic_range_ev)
        .def_readonly("crf_sigma", &CameraSample::crf_sigma)
        .def_readonly("crf_n", &CameraSample::crf_n)
        .def_readonly("exposure", &CameraSample::exposure)
        .def_readonly("seed", &CameraSample::seed);
    m.def("sample_camera", &sample_camera, py::arg("seed"));
    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));
    m.def("auto_expose", [](const F64& h, double target) { return auto_expose(hdr(h), target); }, py::arg("hdr"),
          py::arg("target_mean") = kMiddleGray);
    m.def("crf", &crf, py::arg("v"), py::arg("sigma"), py::arg("n"));
    m.def(
        "synth_ldr",
        [](const F64& h, std::uint64_t seed, bool identity_crf, double target) {
            const SynthResult r = synth_ldr(hdr(h), sample_camera(seed),
                                            {target, identity_crf ? CrfMode::Identity : CrfMode::Parametric});
            return py::make_tuple(to_array(r.ldr), r.sample);
        },
        py::arg("hdr"), py::arg("seed"), py::arg("identity_crf") = false, py::arg("target_mean") = kMiddleGray,
        "Returns (ldr_codes, camera_sample).");

    m.def("si_scale_kappa", [](const F64& p, const F64& g, double eps) { return si_scale_kappa(hdr(p), hdr(g), eps); },
          py::arg("pred"), py::arg("gt"), py::arg("eps") = 1e-6);
    m.def("si_loss", [](const F64& p, const F64& g, double eps) { return si_loss(hdr(p), hdr(g), eps); },
          py::arg("pred"), py::arg("gt"), py::arg("eps") = 1e-6);
    m.def("si_mse", [](const F64& p, const F64& g, double eps) { return si_mse(hdr(p), hdr(g), eps); },
          py::arg("pred"), py::arg("gt"), py::arg("eps") = 1e-6);
    m.def(
        "seg_cross_entropy",
        [](const F64& p, const U8& g, double floor) {
            return seg_cross_entropy(to_image<ProbMask>(p, "pred"), to_image<SegMask>(g, "gt"), floor);
        },
        py::arg("pred"), py::arg("gt"), py::arg("prob_floor") = 1e-7);
    m.def(
        "total_loss",
        [](const F64& ph, const F64& gh, const F64& pm, const U8& gm, double alpha, double eps) {
            LossConfig cfg;
            cfg.alpha = alpha;
            cfg.epsilon = eps;
            return total_loss(hdr(ph), hdr(gh), to_image<ProbMask>(pm, "pred_mask"), to_image<SegMask>(gm, "gt_mask"),
                              cfg);
        },
        py::arg("pred_hdr"), py::arg("gt_hdr"), py::arg("pred_mask"), py::arg("gt_mask"), py::arg("alpha") = 0.05,
        py::arg("eps") = 1e-6);
    m.def(
        "pano_loss",
        [](const F64& p, const F64& g, const F64& mask, double beta1, double beta2, double eps) {
            LossConfig cfg;
            cfg.beta1 = beta1;
            cfg.beta2 = beta2;
            cfg.epsilon = eps;
            return pano_loss(hdr(p), hdr(g), plane(mask), cfg);
        },
        py::arg("pred"), py::arg("gt"), py::arg("mask"), py::arg("beta1") = 0.2, py::arg("beta2") = 0.01,
        py::arg("eps") = 1e-6);
    m.def("log_psnr", [](const F64& p, const F64& g, double eps) { return log_psnr(hdr(p), hdr(g), eps); },
          py::arg("pred"), py::arg("gt"), py::arg("eps") = 1e-6);
    m.def("ssim", [](const U8& a, const U8& b) { return ssim(ldr8(a), ldr8(b)); }, py::arg("a"), py::arg("b"));
    m.def(
        "display_anchor",
        [](const F64& p, const F64& g, const F64& ldr, double eps) {
            const AnchoredPair a = display_anchor(hdr(p), hdr(g), linear(ldr), eps);
            return py::make_tuple(to_array(a.pred), to_array(a.gt), a.kappa, a.display_scale);
        },
        py::arg("pred"), py::arg("gt"), py::arg("ldr"), py::arg("eps") = 1e-6,
        "Returns (pred, gt, kappa, display_scale) in cd/m^2.");

    m.def(
        "p2c",
        [](const F64& pano, int ceil_size, double offset, double extent) {
            const HdrImage p = hdr(pano);
            return to_array(p2c(p, projection(p.width(), ceil_size, offset, extent)));
        },
        py::arg("pano"), py::arg("ceil_size") = 256, py::arg("offset") = 1.0, py::arg("extent") = 1.0);
    m.def(
        "c2p",
        [](const F64& ceil, int pano_width, double offset, double extent) {
            const HdrImage c = hdr(ceil);
            const auto r = c2p(c, projection(pano_width, c.width(), offset, extent));
            return py::make_tuple(to_array(r.image), to_array(r.valid));
        },
        py::arg("ceil"), py::arg("pano_width") = 512, py::arg("offset") = 1.0, py::arg("extent") = 1.0,
        "Returns (panorama, validity).");
    m.def(
        "merge_mask",
        [](const F64& ceil_ldr, int pano_width, double tau, double offset, double extent) {
            const LinearLdr l = linear(ceil_ldr);
            return to_array(merge_mask(l, projection(pano_width, l.width(), offset, extent), tau));
        },
        py::arg("ceil_ldr"), py::arg("pano_width") = 512, py::arg("tau") = kDefaultMergeTau, py::arg("offset") = 1.0,
        py::arg("extent") = 1.0);
    m.def(
        "merge_panorama",
        [](const F64& ceil, const F64& pano, const F64& mask, double offset, double extent) {
            const HdrImage c = hdr(ceil);
            const HdrImage p = hdr(pano);
            return to_array(merge_panorama(c, p, plane(mask), projection(p.width(), c.width(), offset, extent)));
        },
        py::arg("ceil_hdr"), py::arg("pano_hdr"), py::arg("mask"), py::arg("offset") = 1.0, py::arg("extent") = 1.0);
    m.def(
        "crop_set",
        [](const F64& pano, bool outdoor, double hfov, int width, int height) {
            py::list out;
            for (const Crop& c : crop_set(hdr(pano), {outdoor, hfov, width, height})) {
                out.append(py::make_tuple(to_array(c.image), c.yaw_deg, c.pitch_deg));
            }
            return out;
        },
        py::arg("pano"), py::arg("outdoor") = false, py::arg("hfov_deg") = 60.0, py::arg("width") = 320,
        py::arg("height") = 240, "Returns a list of (image, yaw_deg, pitch_deg).");

    m.def("default_scene", [] { return format_scene(default_scene()); }, "Default scene description text.");
    m.def(
        "render",
        [](const std::string& scene, const F64& env) { return to_array(render(parse_scene(scene), hdr(env))); },
        py::arg("scene"), py::arg("env"), "Renders a scene description under an environment panorama.");
    m.def(
        "evaluate_ibl",
        [](const F64& pred, const F64& gt, const F64& ldr, const std::string& scene, double tau) {
            const IblEvaluation e = evaluate_ibl(hdr(pred), hdr(gt), linear(ldr), parse_scene(scene), {}, {}, tau);
            py::dict d;
            d["mse"] = e.scores.mse;
            d["log_psnr"] = e.scores.log_psnr;
            d["ssim"] = e.scores.ssim;
            d["pred_scale"] = e.pred_scale;
            d["gt_scale"] = e.gt_scale;
            return d;
        },
        py::arg("pred_env"), py::arg("gt_env"), py::arg("ldr_env"), py::arg("scene"),
        py::arg("tau") = kDefaultOverexposureTau);

#ifdef VERSION_INFO
#define HDRTK_STR(x) #x
#define HDRTK_XSTR(x) HDRTK_STR(x)
    m.attr("__version__") = HDRTK_XSTR(VERSION_INFO);
#endif
}
