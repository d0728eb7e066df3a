#include <cmath>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "hdrtk/hdrtk.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "tmpdir.hpp"

using namespace hdrtk;
using Json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

io::Bytes slurp(const std::string& path) { return io::read_file(path); }

Json read_json(const std::string& path) {
    const io::Bytes b = slurp(path);
    return Json::parse(b.begin(), b.end());
}

HdrImage scene_hdr(std::uint64_t seed, int w = 48, int h = 24) {
    std::mt19937_64 rng(seed);
    HdrImage img = oracle::random_hdr(rng, w, h, 1.5, 0.05);
    for (int c = 0; c < 3; ++c) img.at(w / 2, 2, c) = 80.0;
    return img;
}

}  // namespace

TEST_CASE("cli exit codes and error reports") {
    TempDir dir;
    io::save_hdr(dir / "a.pfm", scene_hdr(1));

    CHECK(run({}).code == 1);
    const Result help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("synth") != std::string::npos);
    CHECK(run({"--version"}).out.find('.') != std::string::npos);

    const Result bad_flag = run({"synth", dir / "a.pfm", "--out-dir", dir / "s", "--bogus"});
    CHECK(bad_flag.code == 1);
    CHECK(Json::parse(bad_flag.err)["error"]["category"] == "usage");

    const Result missing = run({"preview", dir / "nope.pfm", "-o", dir / "p.ppm"});
    CHECK(missing.code == 2);
    CHECK(Json::parse(missing.err)["error"]["category"] == "io");

    io::save_ldr(dir / "white.ppm", LdrImage(48, 24, 255));
    const Result uncal = run({"calibrate", dir / "a.pfm", dir / "white.ppm", "-o", dir / "c.pfm"});
    CHECK(uncal.code == 3);
    CHECK(Json::parse(uncal.err)["error"]["code"] == "uncalibratable");

    CHECK(run({"synth", dir / "a.pfm"}).code == 1);
    CHECK(run({"preview", dir / "a.pfm", "-o", dir / "p.png"}).code == 2);
    CHECK(run({"--config", dir / "none.json", "preview", dir / "a.pfm", "-o", dir / "p.ppm"}).code == 2);
}

TEST_CASE("cli synth is reproducible across runs and worker counts") {
    TempDir dir;
    std::vector<std::string> inputs;
    for (int i = 0; i < 5; ++i) {
        inputs.push_back(dir / ("h" + std::to_string(i) + ".pfm"));
        io::save_hdr(inputs.back(), scene_hdr(10 + i));
    }
    auto synth = [&](const std::string& out, int jobs) {
        std::vector<std::string> args{"synth"};
        args.insert(args.end(), inputs.begin(), inputs.end());
        args.insert(args.end(), {"--seed", "7", "--out-dir", out, "-j", std::to_string(jobs)});
        return run(args);
    };
    REQUIRE(synth(dir / "a", 1).code == 0);
    REQUIRE(synth(dir / "b", 1).code == 0);
    REQUIRE(synth(dir / "c", 4).code == 0);
    for (int i = 0; i < 5; ++i) {
        const std::string f = "/h" + std::to_string(i) + ".ppm";
        CHECK(slurp(dir / "a" + f) == slurp(dir / "b" + f));
        CHECK(slurp(dir / "a" + f) == slurp(dir / "c" + f));
    }
    const Json ma = read_json(dir / "a/manifest.json");
    CHECK(ma["results"].size() == 5);
    CHECK(ma["results"][2]["seed"].get<std::uint64_t>() == derive_seed(7, 2));
    CHECK(ma["synth"]["seed"] == 7);

    SUBCASE("a manifest passed as config reproduces the outputs") {
        REQUIRE(run({"--config", dir / "a/manifest.json", "synth", "--out-dir", dir / "d"}).code == 0);
        CHECK(slurp(dir / "a/h3.ppm") == slurp(dir / "d/h3.ppm"));
    }
    SUBCASE("flags override the config file") {
        REQUIRE(run({"--config", dir / "a/manifest.json", "synth", "--out-dir", dir / "e", "--seed", "8"}).code == 0);
        CHECK(slurp(dir / "a/h3.ppm") != slurp(dir / "e/h3.ppm"));
    }
    SUBCASE("a failing file does not stop the batch") {
        const Result r = run({"synth", inputs[0], dir / "missing.pfm", inputs[1], "--out-dir", dir / "f"});
        CHECK(r.code == 2);
        CHECK(r.err.find("missing.pfm") != std::string::npos);
        CHECK(std::filesystem::exists(dir / "f/h0.ppm"));
        CHECK(std::filesystem::exists(dir / "f/h1.ppm"));
        const Json m = read_json(dir / "f/manifest.json");
        CHECK(m["results"][1]["status"] == "error");
        CHECK(m["results"][2]["status"] == "ok");
    }
    SUBCASE("duplicate stems are refused up front") {
        CHECK(run({"synth", inputs[0], inputs[0], "--out-dir", dir / "g"}).code == 1);
    }
}

TEST_CASE("cli calibrate is idempotent") {
    TempDir dir;
    io::save_hdr(dir / "a.pfm", scene_hdr(3));
    REQUIRE(run({"synth", dir / "a.pfm", "-o", dir / "a.ppm", "--seed", "3"}).code == 0);
    const Result first = run({"calibrate", dir / "a.pfm", dir / "a.ppm", "-o", dir / "out.pfm"});
    REQUIRE(first.code == 0);
    const Result second = run({"calibrate", dir / "out.pfm", dir / "a.ppm", "-o", dir / "out2.pfm"});
    REQUIRE(second.code == 0);
    CHECK(Json::parse(second.out)["scale_factor"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::filesystem::exists(dir / "out.pfm.json"));
}

TEST_CASE("cli metrics and eval-ibl") {
    TempDir dir;
    const HdrImage gt = scene_hdr(4, 64, 32);
    io::save_hdr(dir / "gt.pfm", gt);
    HdrImage pred = gt;
    for (double& v : pred.data()) v *= 3.0;
    io::save_hdr(dir / "pred.pfm", pred);
    REQUIRE(run({"synth", dir / "gt.pfm", "-o", dir / "ldr.ppm"}).code == 0);

    const Result m = run({"metrics", dir / "pred.pfm", dir / "gt.pfm"});
    REQUIRE(m.code == 0);
    const Json j = Json::parse(m.out);
    CHECK(j["si_mse"].get<double>() < 1e-9);
    CHECK(j["kappa"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
    CHECK(j["ssim"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));

    const Result anchored = run({"metrics", dir / "pred.pfm", dir / "gt.pfm", "--ldr", dir / "ldr.ppm"});
    REQUIRE(anchored.code == 0);
    CHECK(Json::parse(anchored.out)["units"] == "cd/m^2");

    const std::string scene = dir / "scene.txt";
    {
        const std::string text = "camera size 32 24 half_width 3\nsphere center 0 0 1 radius 1 diffuse 0.8 0.8 0.8\n";
        io::write_file_atomic(scene, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    }
    const Result self = run({"eval-ibl", dir / "gt.pfm", dir / "gt.pfm", dir / "ldr.ppm", scene});
    REQUIRE(self.code == 0);
    const Json e = Json::parse(self.out);
    CHECK(e["ssim"].get<double>() == 1.0);
    CHECK(e["mse"].get<double>() == 0.0);

    const Result r1 = run({"render", scene, dir / "gt.pfm", "-o", dir / "r1.pfm"});
    const Result r2 = run({"render", scene, dir / "gt.pfm", "-o", dir / "r2.pfm", "-j", "8"});
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(slurp(dir / "r1.pfm") == slurp(dir / "r2.pfm"));
}

TEST_CASE("cli geometry subcommands") {
    TempDir dir;
    io::save_hdr(dir / "pano.pfm", HdrImage(64, 32, 0.5));
    REQUIRE(run({"p2c", dir / "pano.pfm", "-o", dir / "ceil.pfm", "--ceil-size", "32"}).code == 0);
    REQUIRE(run({"c2p", dir / "ceil.pfm", "-o", dir / "back.pfm", "--pano-width", "64", "--valid", dir / "v.ppm"})
                .code == 0);
    const HdrImage back = io::load_hdr(dir / "back.pfm");
    CHECK(back.at(10, 3, 0) == 0.5);
    CHECK(back.at(10, 30, 0) == 0.0);

    io::save_ldr(dir / "ceil.ppm", LdrImage(32, 32, 0));
    REQUIRE(run({"merge", dir / "ceil.pfm", dir / "pano.pfm", dir / "ceil.ppm", "-o", dir / "m.pfm"}).code == 0);
    CHECK(io::load_hdr(dir / "m.pfm") == io::load_hdr(dir / "pano.pfm"));

    REQUIRE(run({"crop-set", dir / "pano.pfm", "--out-dir", dir / "crops", "--width", "16", "--height", "12",
                 "--outdoor"})
                .code == 0);
    CHECK(std::filesystem::exists(dir / "crops/crop_5_yaw300_pitch0.hdr"));
    CHECK_FALSE(std::filesystem::exists(dir / "crops/crop_6_yaw0_pitch45.hdr"));

    REQUIRE(run({"convert", dir / "pano.pfm", dir / "pano.hdr"}).code == 0);
    CHECK(io::load_hdr(dir / "pano.hdr").at(3, 3, 1) == 0.5);
    REQUIRE(run({"segment", dir / "pano.hdr", "-o", dir / "seg.ppm"}).code == 0);
    CHECK(io::load_ldr(dir / "seg.ppm").at(0, 0, 1) == 255);
}
