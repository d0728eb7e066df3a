#pragma once

#include "hdrtk/image.hpp"

namespace hdrtk {

struct LossConfig {
    /// Guard added inside every log.
    double epsilon = 1e-6;
    /// Weight of the segmentation term in total_loss.
    double alpha = 0.05;
    /// Weights of the highlight and non-highlight terms in pano_loss.
    double beta1 = 0.2;
    double beta2 = 0.01;
    /// Predicted probabilities are clamped into [prob_floor, 1 - prob_floor].
    double prob_floor = 1e-7;
    /// Divide the summed cross-entropy by the pixel count before weighting.
    bool normalize_seg = true;
};

/// exp(mean(log(gt + eps) - log(pred + eps))), the factor that best aligns
/// pred to gt in the log domain. The mean runs over pixels x channels.
double si_scale_kappa(const HdrImage& pred, const HdrImage& gt, double eps = 1e-6);

/// Scale-invariant log MSE: variance of d = log(pred + eps) - log(gt + eps).
/// Evaluated in two passes, so the result is never negative.
double si_loss(const HdrImage& pred, const HdrImage& gt, double eps = 1e-6);

/// Same quantity as si_loss, used as an evaluation metric.
double si_mse(const HdrImage& pred, const HdrImage& gt, double eps = 1e-6);

/// Binary cross-entropy summed over every pixel and channel (not averaged).
double seg_cross_entropy(const ProbMask& pred, const SegMask& gt, double prob_floor = 1e-7);

/// si_loss + alpha * cross-entropy, the latter divided by the pixel count
/// when cfg.normalize_seg is set.
double total_loss(const HdrImage& pred_hdr, const HdrImage& gt_hdr, const ProbMask& pred_mask,
                  const SegMask& gt_mask, const LossConfig& cfg = {});

/// beta1 * mean((m * d)^2) + beta2 * mean(((1 - m) * d)^2) with the
/// single-channel merge mask broadcast over colour channels.
double pano_loss(const HdrImage& pred, const HdrImage& gt, const Plane& merge_mask,
                 const LossConfig& cfg = {});

}  // namespace hdrtk
