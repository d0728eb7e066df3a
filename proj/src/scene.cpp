#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include "hdrtk/ibl.hpp"

namespace hdrtk {

namespace {

class LineParser {
public:
    LineParser(std::vector<std::string> tokens, int line_no) : tokens_(std::move(tokens)), line_(line_no) {}

    bool done() const { return pos_ >= tokens_.size(); }
    std::string word() {
        if (done()) fail("unexpected end of line");
        return tokens_[pos_++];
    }
    double number() {
        const std::string tok = word();
        double v = 0.0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size()) fail("expected a number, got '" + tok + "'");
        return v;
    }
    int integer() {
        const std::string tok = word();
        int v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size()) fail("expected an integer, got '" + tok + "'");
        return v;
    }
    Vec3 vec3() {
        const double x = number();
        const double y = number();
        return {x, y, number()};
    }
    Rgb rgb() {
        const double r = number();
        const double g = number();
        return {r, g, number()};
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::InvalidArgument, "scene line " + std::to_string(line_) + ": " + msg);
    }

private:
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
    int line_;
};

void parse_camera(LineParser& p, OrthoCamera& cam) {
    while (!p.done()) {
        const std::string key = p.word();
        if (key == "center") {
            cam.center = p.vec3();
        } else if (key == "yaw") {
            cam.yaw_deg = p.number();
        } else if (key == "tilt") {
            cam.tilt_deg = p.number();
        } else if (key == "half_width") {
            cam.half_width = p.number();
        } else if (key == "size") {
            cam.width = p.integer();
            cam.height = p.integer();
        } else {
            p.fail("unknown camera key '" + key + "'");
        }
    }
}

Sphere parse_sphere(LineParser& p) {
    Sphere s;
    bool have_material = false;
    while (!p.done()) {
        const std::string key = p.word();
        if (key == "center") {
            s.center = p.vec3();
        } else if (key == "radius") {
            s.radius = p.number();
        } else if (key == "diffuse") {
            s.material = {Material::Kind::Diffuse, p.rgb(), 1.0};
            have_material = true;
        } else if (key == "mirror") {
            s.material = {Material::Kind::Mirror, {1.0, 1.0, 1.0}, 1.0};
            have_material = true;
        } else if (key == "glossy") {
            const double k = p.number();
            s.material = {Material::Kind::Glossy, p.rgb(), k};
            have_material = true;
        } else {
            p.fail("unknown sphere key '" + key + "'");
        }
    }
    if (!have_material) p.fail("sphere needs a material (diffuse, mirror or glossy)");
    return s;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

SceneConfig parse_scene(std::string_view text) {
    SceneConfig scene;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tokens;
        for (std::string t; ls >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;

        LineParser p(std::move(tokens), line_no);
        const std::string kind = p.word();
        if (kind == "camera") {
            parse_camera(p, scene.camera);
        } else if (kind == "sphere") {
            scene.spheres.push_back(parse_sphere(p));
        } else if (kind == "ground") {
            scene.ground = p.rgb();
        } else if (kind == "background") {
            const std::string v = p.word();
            if (v != "on" && v != "off") p.fail("background must be on or off");
            scene.background = v == "on";
        } else {
            p.fail("unknown statement '" + kind + "'");
        }
        if (!p.done()) p.fail("trailing tokens");
    }
    scene.validate();
    return scene;
}

std::string format_scene(const SceneConfig& scene) {
    std::ostringstream os;
    const OrthoCamera& c = scene.camera;
    os << "camera center " << fmt(c.center.x) << ' ' << fmt(c.center.y) << ' ' << fmt(c.center.z) << " yaw "
       << fmt(c.yaw_deg) << " tilt " << fmt(c.tilt_deg) << " half_width " << fmt(c.half_width) << " size "
       << c.width << ' ' << c.height << '\n';
    for (const Sphere& s : scene.spheres) {
        os << "sphere center " << fmt(s.center.x) << ' ' << fmt(s.center.y) << ' ' << fmt(s.center.z)
           << " radius " << fmt(s.radius);
        const Rgb& a = s.material.albedo;
        switch (s.material.kind) {
            case Material::Kind::Diffuse:
                os << " diffuse " << fmt(a[0]) << ' ' << fmt(a[1]) << ' ' << fmt(a[2]);
                break;
            case Material::Kind::Mirror:
                os << " mirror";
                break;
            case Material::Kind::Glossy:
                os << " glossy " << fmt(s.material.exponent) << ' ' << fmt(a[0]) << ' ' << fmt(a[1]) << ' '
                   << fmt(a[2]);
                break;
        }
        os << '\n';
    }
    if (scene.ground) {
        const Rgb& g = *scene.ground;
        os << "ground " << fmt(g[0]) << ' ' << fmt(g[1]) << ' ' << fmt(g[2]) << '\n';
    }
    os << "background " << (scene.background ? "on" : "off") << '\n';
    return os.str();
}

SceneConfig default_scene() {
    SceneConfig s;
    s.camera = {{0.0, 8.0, 1.8}, 0.0, 15.0, 4.4, 320, 240};
    s.spheres = {
        {{-3.0, 0.0, 0.7}, 0.7, {Material::Kind::Diffuse, {0.8, 0.8, 0.8}, 1.0}},
        {{-1.0, 0.0, 0.7}, 0.7, {Material::Kind::Diffuse, {0.8, 0.3, 0.2}, 1.0}},
        {{1.0, 0.0, 0.7}, 0.7, {Material::Kind::Mirror, {1.0, 1.0, 1.0}, 1.0}},
        {{3.0, 0.0, 0.7}, 0.7, {Material::Kind::Glossy, {0.9, 0.9, 0.9}, 64.0}},
    };
    s.ground = Rgb{0.5, 0.5, 0.5};
    return s;
}

}  // namespace hdrtk
