#include <cmath>
#include <random>

#include "doctest.h"
#include "hdrtk/color.hpp"
#include "hdrtk/losses.hpp"
#include "hdrtk/metrics.hpp"
#include "oracles.hpp"

using namespace hdrtk;

namespace {

Plane textured_card(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Plane p(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            p.at(x, y, 0) = std::floor(255.0 * (0.5 + 0.25 * std::sin(0.4 * x) * std::cos(0.3 * y) + 0.2 * u(rng)));
    return p;
}

}  // namespace

TEST_CASE("mse") {
    CHECK(mse(HdrImage(3, 2, 0.4), HdrImage(3, 2, 0.1)) == doctest::Approx(0.09).epsilon(1e-12));
    CHECK_THROWS_AS(mse(HdrImage(3, 2), HdrImage(2, 3)), Error);
}

TEST_CASE("ssim") {
    const Plane a = textured_card(48, 40, 31);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    SUBCASE("agrees with the direct two-dimensional evaluation") {
        const Plane b = textured_card(48, 40, 32);
        const double ref = oracle::naive_ssim({a.data().begin(), a.data().end()},
                                              {b.data().begin(), b.data().end()}, 48, 40);
        CHECK(ssim(a, b) == doctest::Approx(ref).epsilon(1e-10));
    }
    SUBCASE("a photographic negative scores near zero") {
        Plane neg = a;
        for (double& v : neg.data()) v = 255.0 - v;
        CHECK(ssim(a, neg) < 0.1);
    }
    SUBCASE("symmetric and bounded") {
        const Plane b = textured_card(48, 40, 33);
        CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
        CHECK(ssim(a, b) <= 1.0);
    }
    SUBCASE("small images shrink the window") {
        const Plane s = textured_card(6, 5, 34);
        CHECK(ssim(s, s) == doctest::Approx(1.0));
    }
    SUBCASE("8-bit images compare on channel means") {
        LdrImage x(16, 16, 100), y(16, 16, 100);
        CHECK(ssim(x, y) == doctest::Approx(1.0));
    }
}

TEST_CASE("log PSNR") {
    std::mt19937_64 rng(35);
    const HdrImage gt = oracle::random_hdr(rng, 10, 10);
    CHECK(log_psnr(gt, gt) == kPsnrCapDb);
    HdrImage noisy = gt;
    for (double& v : noisy.data()) v *= 1.5;
    HdrImage worse = gt;
    for (double& v : worse.data()) v *= 4.0;
    CHECK(log_psnr(noisy, gt) < kPsnrCapDb);
    CHECK(log_psnr(worse, gt) < log_psnr(noisy, gt));
    double lo = 1e300, hi = -1e300;
    for (double v : gt.data()) {
        lo = std::min(lo, std::log(v + 1e-6));
        hi = std::max(hi, std::log(v + 1e-6));
    }
    double m = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const double d = (std::log(noisy.data()[i] + 1e-6) - std::log(gt.data()[i] + 1e-6)) / (hi - lo);
        m += d * d;
    }
    m /= gt.size();
    CHECK(log_psnr(noisy, gt) == doctest::Approx(-10.0 * std::log10(m)).epsilon(1e-9));
}

TEST_CASE("display anchor") {
    HdrImage gt(3, 1, 0.5);
    for (int c = 0; c < 3; ++c) gt.at(1, 0, c) = 2.0;
    LinearLdr ldr(3, 1, 0.2);
    for (int c = 0; c < 3; ++c) ldr.at(1, 0, c) = 0.9;
    const HdrImage pred = [&] {
        HdrImage p = gt;
        for (double& v : p.data()) v *= 3.0;
        return p;
    }();

    const AnchoredPair a = display_anchor(pred, gt, ldr);
    CHECK(a.kappa == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
    CHECK(a.display_scale == doctest::Approx(127.5).epsilon(1e-12));
    CHECK(a.gt.at(1, 0, 0) == doctest::Approx(255.0).epsilon(1e-12));
    CHECK(a.pred.at(1, 0, 0) == doctest::Approx(255.0).epsilon(1e-5));
    CHECK(a.gt.at(0, 0, 2) == doctest::Approx(63.75).epsilon(1e-12));

    SUBCASE("ties pick the first pixel") {
        LinearLdr flat(3, 1, 0.4);
        const AnchoredPair t = display_anchor(pred, gt, flat);
        CHECK(t.gt.at(0, 0, 0) == doctest::Approx(255.0));
    }
    SUBCASE("degenerate inputs") {
        CHECK_THROWS_AS(display_anchor(pred, gt, LinearLdr(3, 1, 0.0)), Error);
        CHECK_THROWS_AS(display_anchor(pred, HdrImage(3, 1, 0.0), ldr), Error);
    }
}
