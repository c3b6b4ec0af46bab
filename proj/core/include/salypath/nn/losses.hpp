#pragma once

#include "salypath/nn/tensor.hpp"
#include "salypath/saliency_map.hpp"
#include "salypath/scanpath.hpp"

namespace salypath::nn {

struct LossResult {
    double value = 0.0;
    Tensor grad; // w.r.t. the prediction input
};

struct SaliencyLossTerms {
    double kldiv = 0.0;
    double bce = 0.0;
    double nss = 0.0;
};

/// Saliency training loss:
///   0.8 * KLdiv(gt, pred) + 0.2 * BCE(gt, pred) - 0.2 * NSS(fix, pred)
/// KLdiv sum-normalizes both sides with eps = 1e-7; BCE is the pixel
/// mean (gt must lie in [0,1]); NSS z-scores with sigma + eps so a
/// constant prediction stays finite. All terms are differentiable.
LossResult saliency_loss(const Tensor& pred, const SaliencyMap& gt, const SaliencyMap& gt_fix);

/// The three components at the same point (for reporting and tests).
SaliencyLossTerms saliency_loss_terms(const Tensor& pred, const SaliencyMap& gt,
                                      const SaliencyMap& gt_fix);

/// Scanpath regression loss: mean squared distance between paired
/// fixation coordinates, (1/N) sum_i ||p_hat_i - p_i||^2.
LossResult scanpath_loss(const Tensor& coords, const Scanpath& gt);

} // namespace salypath::nn
