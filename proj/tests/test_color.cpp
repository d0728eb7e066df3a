#include <cmath>
#include <random>

#include "doctest.h"
#include "hdrtk/color.hpp"

using namespace hdrtk;

TEST_CASE("srgb decode endpoints and breakpoint") {
    LdrImage img(2, 1);
    img.at(1, 0, 0) = img.at(1, 0, 1) = img.at(1, 0, 2) = 255;
    const LinearLdr lin = srgb_to_linear(img);
    CHECK(lin.at(0, 0, 0) == 0.0);
    CHECK(lin.at(1, 0, 2) == 1.0);
    // 0.04045 / 12.92, evaluated outside the library.
    CHECK(srgb_decode(0.04045) == doctest::Approx(0.0031308049535603713).epsilon(1e-15));
    // Just above the breakpoint the power branch takes over; the two branches
    // differ there by about 1e-5 relative.
    CHECK(srgb_decode(0.04045 + 1e-12) == doctest::Approx(0.0031308072831464045).epsilon(1e-12));
    CHECK(srgb_decode(0.04045 + 1e-12) > srgb_decode(0.04045));
}

TEST_CASE("srgb round trip is exact on every code and decode is strictly monotone") {
    LdrImage ramp(256, 1);
    for (int k = 0; k < 256; ++k) {
        for (int c = 0; c < 3; ++c) ramp.at(k, 0, c) = static_cast<std::uint8_t>(k);
    }
    const LinearLdr lin = srgb_to_linear(ramp);
    CHECK(linear_to_srgb(lin) == ramp);
    for (int k = 1; k < 256; ++k) CHECK(lin.at(k, 0, 0) > lin.at(k - 1, 0, 0));
}

TEST_CASE("linear_to_srgb clamps out-of-range input") {
    LinearLdr img(1, 1);
    img.at(0, 0, 0) = -0.5;
    img.at(0, 0, 1) = 1.0;
    img.at(0, 0, 2) = 7.0;
    const LdrImage out = linear_to_srgb(img);
    CHECK(out.at(0, 0, 0) == 0);
    CHECK(out.at(0, 0, 1) == 255);
    CHECK(out.at(0, 0, 2) == 255);
}

TEST_CASE("exposure preview") {
    SUBCASE("white at 0 EV saturates") {
        const LdrImage out = exposure_preview(HdrImage(3, 2, 1.0), 0.0, 6.0);
        for (auto v : out.data()) CHECK(v == 255);
    }
    SUBCASE("-1 EV halves the linear value") {
        const LdrImage out = exposure_preview(HdrImage(1, 1, 1.0), -1.0, 6.0);
        CHECK(out.at(0, 0, 0) == quantize_unit(srgb_encode(0.5)));
    }
    SUBCASE("values under the window floor go black") {
        const double w = 5.0;
        const LdrImage out = exposure_preview(HdrImage(1, 1, std::exp2(-w - 1.0)), 0.0, w);
        CHECK(out.at(0, 0, 0) == 0);
        const LdrImage kept = exposure_preview(HdrImage(1, 1, std::exp2(-w)), 0.0, w);
        CHECK(kept.at(0, 0, 0) > 0);
    }
    SUBCASE("non-positive window is rejected") {
        CHECK_THROWS_AS(exposure_preview(HdrImage(1, 1, 1.0), 0.0, 0.0), Error);
    }
}

TEST_CASE("exposure preview composes exposures") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    HdrImage h(16, 16);
    for (double& v : h.data()) v = std::pow(2.0, 12.0 * u(rng) - 8.0);
    for (int a = -3; a <= 3; ++a) {
        for (int b = -3; b <= 3; ++b) {
            HdrImage scaled = h;
            for (double& v : scaled.data()) v *= std::exp2(a);
            CHECK(exposure_preview(h, a + b, 7.0) == exposure_preview(scaled, b, 7.0));
        }
    }
}

TEST_CASE("channel mean") {
    HdrImage img(3, 1);
    const double px[3][3] = {{0.2, 0.4, 0.6}, {1.0, 0.0, 0.0}, {5.0, 5.0, 5.0}};
    for (int x = 0; x < 3; ++x)
        for (int c = 0; c < 3; ++c) img.at(x, 0, c) = px[x][c];
    const Plane m = channel_mean(img);
    CHECK(m.at(0, 0, 0) == doctest::Approx(0.4));
    CHECK(m.at(1, 0, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(m.at(2, 0, 0) == 5.0);
}

TEST_CASE("image construction rejects bad shapes") {
    CHECK_THROWS_AS(HdrImage(0, 3), Error);
    CHECK_THROWS_AS(HdrImage(2, 2, std::vector<double>(5)), Error);
    HdrImage bad(1, 1);
    bad.at(0, 0, 1) = std::nan("");
    CHECK_THROWS_AS(validate_hdr(bad), Error);
}
