#include <cmath>
#include <random>

#include "doctest.h"
#include "hdrtk/calibration.hpp"
#include "oracles.hpp"

using namespace hdrtk;

namespace {

LinearLdr random_ldr(std::mt19937_64& rng, int w, int h) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LinearLdr img(w, h);
    for (double& v : img.data()) v = u(rng);
    return img;
}

}  // namespace

TEST_CASE("overexposure mask") {
    CHECK(overexposure_mask(LinearLdr(4, 4, 0.5)).count() == 16);
    CHECK(overexposure_mask(LinearLdr(4, 4, 0.9)).count() == 0);
    LinearLdr px(1, 1);
    px.at(0, 0, 0) = 0.9;
    px.at(0, 0, 1) = 0.9;
    px.at(0, 0, 2) = 0.6;
    CHECK(overexposure_mask(px).mask.at(0, 0, 0) == 1.0);  // mean 0.8 < 0.83
    // Mean exactly at tau counts as overexposed.
    CHECK(overexposure_mask(LinearLdr(1, 1, 0.5), 0.5).count() == 0);
    CHECK_THROWS_AS(overexposure_mask(px, 0.0), Error);
}

TEST_CASE("two-pixel calibration matches hand evaluation") {
    LinearLdr ldr(2, 1);
    HdrImage hdr(2, 1);
    for (int c = 0; c < 3; ++c) {
        ldr.at(0, 0, c) = 0.2;
        ldr.at(1, 0, c) = 1.0;
        hdr.at(0, 0, c) = 0.4;
        hdr.at(1, 0, c) = 8.0;
    }
    const CalibrationResult r = calibrate_hdr(hdr, ldr, 0.83);
    CHECK(r.masked_pixels == 1);
    CHECK(r.scale_factor == doctest::Approx(0.5).epsilon(1e-15));
    for (int c = 0; c < 3; ++c) {
        CHECK(r.calibrated.at(0, 0, c) == doctest::Approx(0.2).epsilon(1e-15));
        CHECK(r.calibrated.at(1, 0, c) == doctest::Approx(4.0).epsilon(1e-15));
    }
}

TEST_CASE("proportional HDR collapses onto the LDR") {
    std::mt19937_64 rng(1);
    LinearLdr ldr = random_ldr(rng, 9, 6);
    for (double& v : ldr.data()) v *= 0.8;  // no pixel reaches tau
    for (double c : {0.01, 3.0, 250.0}) {
        HdrImage hdr = retag<HdrImage>(ldr);
        for (double& v : hdr.data()) v *= c;
        const CalibrationResult r = calibrate_hdr(hdr, ldr);
        CHECK(r.scale_factor == doctest::Approx(1.0 / c).epsilon(1e-12));
        for (std::size_t i = 0; i < ldr.size(); ++i) {
            CHECK(r.calibrated.data()[i] == doctest::Approx(ldr.data()[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("calibration is scale invariant and idempotent") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const HdrImage hdr = oracle::random_hdr(rng, 12, 8);
        const LinearLdr ldr = random_ldr(rng, 12, 8);
        const CalibrationResult base = calibrate_hdr(hdr, ldr);
        for (double k : {1e-3, 1e3}) {
            HdrImage scaled = hdr;
            for (double& v : scaled.data()) v *= k;
            const CalibrationResult r = calibrate_hdr(scaled, ldr);
            for (std::size_t i = 0; i < hdr.size(); ++i) {
                CHECK(r.calibrated.data()[i] == doctest::Approx(base.calibrated.data()[i]).epsilon(1e-6));
            }
        }
        CHECK(calibrate_hdr(base.calibrated, ldr).scale_factor == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("uncalibratable inputs") {
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code([] { calibrate_hdr(HdrImage(3, 3, 1.0), LinearLdr(3, 3, 1.0)); }) == ErrorCode::Uncalibratable);
    CHECK(code([] { calibrate_hdr(HdrImage(3, 3, 0.0), LinearLdr(3, 3, 0.2)); }) == ErrorCode::Uncalibratable);
    CHECK(code([] { calibrate_hdr(HdrImage(3, 3, 1.0), LinearLdr(3, 2, 0.2)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("luminance segmentation labels") {
    HdrImage img(5, 1);
    const double means[5] = {std::exp(-6.0), 1.0, 2.0, kDefaultSegLow, kDefaultSegHigh};
    for (int x = 0; x < 5; ++x)
        for (int c = 0; c < 3; ++c) img.at(x, 0, c) = means[x];
    const SegMask m = luminance_seg_labels(img);
    auto cls = [&](int x) {
        for (int c = 0; c < 3; ++c)
            if (m.at(x, 0, c)) return c;
        return -1;
    };
    CHECK(kDefaultSegHigh == doctest::Approx(1.1051709180756477));
    CHECK(kDefaultSegLow == doctest::Approx(0.004086771438464067));
    CHECK(cls(0) == 0);
    CHECK(cls(1) == 1);
    CHECK(cls(2) == 2);
    CHECK(cls(3) == 0);  // tie at the low threshold
    CHECK(cls(4) == 2);  // tie at the high threshold
    CHECK_THROWS_AS(luminance_seg_labels(img, 2.0, 1.0), Error);
}

TEST_CASE("segmentation masks are one-hot everywhere") {
    std::mt19937_64 rng(4);
    const HdrImage img = oracle::random_hdr(rng, 32, 32, 8.0, 1e-5);
    const SegMask m = luminance_seg_labels(img);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            auto p = m.pixel(x, y);
            CHECK(p[0] + p[1] + p[2] == 1);
        }
}
