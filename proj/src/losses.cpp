#include "hdrtk/losses.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hdrtk/accumulate.hpp"

namespace hdrtk {

namespace {

std::vector<double> log_diff(const HdrImage& pred, const HdrImage& gt, double eps) {
    require_same_shape(pred, gt, "log difference");
    auto p = pred.data();
    auto g = gt.data();
    std::vector<double> d(p.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::log(p[i] + eps) - std::log(g[i] + eps);
    return d;
}

double mean_of(const std::vector<double>& v) {
    CompensatedSum s;
    for (double x : v) s += x;
    return s.value() / static_cast<double>(v.size());
}

}  // namespace

double si_scale_kappa(const HdrImage& pred, const HdrImage& gt, double eps) {
    return std::exp(-mean_of(log_diff(pred, gt, eps)));
}

double si_loss(const HdrImage& pred, const HdrImage& gt, double eps) {
    const std::vector<double> d = log_diff(pred, gt, eps);
    const double mu = mean_of(d);
    CompensatedSum s;
    for (double x : d) s += (x - mu) * (x - mu);
    return s.value() / static_cast<double>(d.size());
}

double si_mse(const HdrImage& pred, const HdrImage& gt, double eps) { return si_loss(pred, gt, eps); }

double seg_cross_entropy(const ProbMask& pred, const SegMask& gt, double prob_floor) {
    require_same_shape(pred, gt, "seg_cross_entropy");
    auto p = pred.data();
    auto g = gt.data();
    CompensatedSum s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "predicted probabilities must lie in [0, 1]");
        }
        const double m = std::clamp(p[i], prob_floor, 1.0 - prob_floor);
        s += g[i] ? -std::log(m) : -std::log1p(-m);
    }
    return s.value();
}

double total_loss(const HdrImage& pred_hdr, const HdrImage& gt_hdr, const ProbMask& pred_mask,
                  const SegMask& gt_mask, const LossConfig& cfg) {
    double seg = seg_cross_entropy(pred_mask, gt_mask, cfg.prob_floor);
    if (cfg.normalize_seg) seg /= static_cast<double>(gt_mask.pixel_count());
    return si_loss(pred_hdr, gt_hdr, cfg.epsilon) + cfg.alpha * seg;
}

double pano_loss(const HdrImage& pred, const HdrImage& gt, const Plane& merge_mask,
                 const LossConfig& cfg) {
    require_same_shape(pred, merge_mask, "pano_loss mask");
    const std::vector<double> d = log_diff(pred, gt, cfg.epsilon);
    auto m = merge_mask.data();
    CompensatedSum high;
    CompensatedSum low;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double w = m[i / 3];
        const double a = w * d[i];
        const double b = (1.0 - w) * d[i];
        high += a * a;
        low += b * b;
    }
    const double n = static_cast<double>(d.size());
    return cfg.beta1 * high.value() / n + cfg.beta2 * low.value() / n;
}

}  // namespace hdrtk
