#include "hdrtk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hdrtk/accumulate.hpp"
#include "hdrtk/color.hpp"
#include "hdrtk/losses.hpp"

namespace hdrtk {

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(size);
    const int half = size / 2;
    double total = 0.0;
    for (int i = 0; i < size; ++i) {
        const double x = i - half;
        k[i] = std::exp(-x * x / (2.0 * sigma * sigma));
        total += k[i];
    }
    for (double& v : k) v /= total;
    return k;
}

// Separable "valid" correlation of a w x h field with kernel k.
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const std::vector<double>& k) {
    const int n = static_cast<int>(k.size());
    const int ow = w - n + 1;
    const int oh = h - n + 1;
    std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += k[i] * src[static_cast<std::size_t>(y) * w + x + i];
            tmp[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += k[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    return out;
}

}  // namespace

double mse(const HdrImage& a, const HdrImage& b) {
    require_same_shape(a, b, "mse");
    auto x = a.data();
    auto y = b.data();
    CompensatedSum s;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return s.value() / static_cast<double>(x.size());
}

double log_psnr(const HdrImage& pred, const HdrImage& gt, double eps) {
    require_same_shape(pred, gt, "log_psnr");
    auto p = pred.data();
    auto g = gt.data();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : g) {
        const double l = std::log(v + eps);
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    const double range = hi > lo ? hi - lo : 1.0;
    CompensatedSum s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = (std::log(p[i] + eps) - std::log(g[i] + eps)) / range;
        s += d * d;
    }
    const double m = s.value() / static_cast<double>(p.size());
    if (m <= 0.0) return kPsnrCapDb;
    return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / m));
}

double ssim(const Plane& a, const Plane& b, double dynamic_range) {
    require_same_shape(a, b, "ssim");
    const int w = a.width();
    const int h = a.height();
    int win = std::min({kSsimWindow, w, h});
    if (win % 2 == 0) --win;
    const auto k = gaussian_kernel(win, kSsimSigma);

    const std::vector<double> x(a.data().begin(), a.data().end());
    const std::vector<double> y(b.data().begin(), b.data().end());
    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, w, h, k);
    const auto my = filter_valid(y, w, h, k);
    const auto sxx = filter_valid(xx, w, h, k);
    const auto syy = filter_valid(yy, w, h, k);
    const auto sxy = filter_valid(xy, w, h, k);

    const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
    const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);
    CompensatedSum total;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = sxx[i] - mx[i] * mx[i];
        const double vy = syy[i] - my[i] * my[i];
        const double cov = sxy[i] - mx[i] * my[i];
        total += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
                 ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    return total.value() / static_cast<double>(mx.size());
}

double ssim(const LdrImage& a, const LdrImage& b) {
    require_same_shape(a, b, "ssim");
    return ssim(channel_mean(a), channel_mean(b), 255.0);
}

AnchoredPair display_anchor(const HdrImage& pred, const HdrImage& gt, const LinearLdr& ldr, double eps) {
    require_same_shape(pred, gt, "display_anchor");
    require_same_shape(gt, ldr, "display_anchor");
    const Plane ldr_mean = channel_mean(ldr);
    auto lm = ldr_mean.data();
    const auto best = std::max_element(lm.begin(), lm.end());
    if (*best <= 0.0) throw Error(ErrorCode::DegenerateAnchor, "anchor LDR is entirely black");
    const std::size_t idx = static_cast<std::size_t>(best - lm.begin());
    auto g = gt.data();
    const double gt_at = (g[3 * idx] + g[3 * idx + 1] + g[3 * idx + 2]) / 3.0;
    if (!(gt_at > 0.0)) {
        throw Error(ErrorCode::DegenerateAnchor, "ground truth is black at the LDR's brightest pixel");
    }

    AnchoredPair out{pred, gt, si_scale_kappa(pred, gt, eps), 0.0};
    out.display_scale = kDisplayPeak / gt_at;
    const double pred_scale = out.kappa * out.display_scale;
    for (double& v : out.pred.data()) v *= pred_scale;
    for (double& v : out.gt.data()) v *= out.display_scale;
    return out;
}

}  // namespace hdrtk
