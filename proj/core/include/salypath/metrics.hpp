#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "salypath/saliency_map.hpp"
#include "salypath/scanpath.hpp"
#include "salypath/stats.hpp"

namespace salypath {

// Saliency metrics follow the common benchmark conventions: KLD is
// KL(gt || pred) with epsilon regularization on sum-normalized masses,
// NSS z-scores with the population standard deviation, and the AUCs
// use >= threshold comparisons with trapezoidal integration anchored
// at (0,0) and (1,1).

inline constexpr double kMetricEps = 1e-7;

/// KL(gt || pred) over sum-normalized maps:
/// sum over pixels of gt * ln(gt / (pred + eps) + eps).
double kld(const SaliencyMap& pred, const SaliencyMap& gt);

/// Pearson correlation coefficient of the two maps.
/// Throws DegenerateError when either map has zero variance.
double cc(const SaliencyMap& pred, const SaliencyMap& gt);

/// Histogram intersection of the sum-normalized maps: sum of pixel minima.
double sim(const SaliencyMap& pred, const SaliencyMap& gt);

/// Mean z-scored prediction value at fixation pixels.
double nss(const SaliencyMap& pred, const SaliencyMap& fix);

/// ROC area with thresholds at each fixation's saliency value.
/// TP rate = fraction of fixations at or above the threshold; FP rate =
/// fraction of non-fixation pixels at or above it.
double auc_judd(const SaliencyMap& pred, const SaliencyMap& fix);

/// ROC area against randomly sampled negatives: each split draws as
/// many non-fixation pixels (uniformly, with replacement) as there are
/// fixations and sweeps thresholds in steps of 0.1 of the map's value
/// range. Deterministic in `seed`.
double auc_borji(const SaliencyMap& pred, const SaliencyMap& fix, int n_splits = 100,
                 std::uint64_t seed = 0);

/// Spatial scanpath dissimilarity: dynamic-programming alignment of
/// the two fixation sequences under great-circle cost (moves right,
/// down, diagonal; minimal total cost), scored as the mean cost along
/// the optimal path divided by pi. 0 = identical, 1 = antipodal.
double jarodzka(const Scanpath& a, const Scanpath& b);

/// Mean z-scored ground-truth map value at the nearest pixel of each
/// predicted fixation.
double hybrid_nss(const Scanpath& pred, const SaliencyMap& gt_map);

/// Named metric -> value table for one prediction / ground-truth pair.
struct MetricReport {
    std::vector<std::pair<std::string, double>> values;

    void add(std::string name, double value) { values.emplace_back(std::move(name), value); }
    double at(const std::string& name) const;
};

/// All applicable saliency metrics for one pair. Fixation-based metrics
/// (auc_judd, auc_borji, nss) are included only when `fix` is non-null.
MetricReport evaluate_saliency(const SaliencyMap& pred, const SaliencyMap& gt,
                               const SaliencyMap* fix = nullptr, int borji_splits = 100,
                               std::uint64_t borji_seed = 0);

/// Scanpath metrics for one pair; hybrid_nss only when gt_map is non-null.
MetricReport evaluate_scanpath(const Scanpath& pred, const Scanpath& gt,
                               const SaliencyMap* gt_map = nullptr);

} // namespace salypath
