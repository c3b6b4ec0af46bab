#include "salypath/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "salypath/errors.hpp"
#include "salypath/rng.hpp"

namespace salypath {

namespace {

struct ZStats {
    double mean = 0.0;
    double sigma = 0.0; // population standard deviation
};

ZStats z_stats(const SaliencyMap& m) {
    ZStats s;
    const double n = static_cast<double>(m.size());
    for (double v : m.values) s.mean += v;
    s.mean /= n;
    double var = 0.0;
    for (double v : m.values) var += (v - s.mean) * (v - s.mean);
    s.sigma = std::sqrt(var / n);
    return s;
}

std::vector<std::size_t> fixation_indices(const SaliencyMap& fix) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < fix.size(); ++i) {
        if (fix.values[i] > 0.5) idx.push_back(i);
    }
    return idx;
}

void require_same_shape(const SaliencyMap& a, const SaliencyMap& b, const char* what) {
    if (!a.same_shape(b)) throw ShapeError(std::string(what) + ": dimension mismatch");
}

double count_ge(const std::vector<double>& ascending, double t) {
    const auto it = std::lower_bound(ascending.begin(), ascending.end(), t);
    return static_cast<double>(ascending.end() - it);
}

double roc_area(const std::vector<std::pair<double, double>>& points) {
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        area += 0.5 * (points[i].second + points[i - 1].second) *
                (points[i].first - points[i - 1].first);
    }
    return area;
}

} // namespace

double kld(const SaliencyMap& pred, const SaliencyMap& gt) {
    check_map(pred, "kld: pred");
    check_map(gt, "kld: gt");
    require_same_shape(pred, gt, "kld");

    const SaliencyMap p = sum_normalized(gt); // throws on all-zero gt
    double pred_total = 0.0;
    for (double v : pred.values) pred_total += v;

    double result = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double q = pred_total > 0.0 ? pred.values[i] / pred_total : 0.0;
        result += p.values[i] * std::log(p.values[i] / (q + kMetricEps) + kMetricEps);
    }
    return result;
}

double cc(const SaliencyMap& pred, const SaliencyMap& gt) {
    check_map(pred, "cc: pred");
    check_map(gt, "cc: gt");
    require_same_shape(pred, gt, "cc");

    if (map_max(pred) == map_min(pred) || map_max(gt) == map_min(gt)) {
        throw DegenerateError("cc: zero-variance input");
    }
    const ZStats sp = z_stats(pred);
    const ZStats sg = z_stats(gt);
    double cov = 0.0, var_p = 0.0, var_g = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double dp = pred.values[i] - sp.mean;
        const double dg = gt.values[i] - sg.mean;
        cov += dp * dg;
        var_p += dp * dp;
        var_g += dg * dg;
    }
    return cov / std::sqrt(var_p * var_g);
}

double sim(const SaliencyMap& pred, const SaliencyMap& gt) {
    check_map(pred, "sim: pred");
    check_map(gt, "sim: gt");
    require_same_shape(pred, gt, "sim");

    const SaliencyMap p = sum_normalized(pred);
    const SaliencyMap g = sum_normalized(gt);
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        total += std::min(p.values[i], g.values[i]);
    }
    return total;
}

double nss(const SaliencyMap& pred, const SaliencyMap& fix) {
    check_map(pred, "nss: pred");
    require_same_shape(pred, fix, "nss");

    const auto idx = fixation_indices(fix);
    if (idx.empty()) throw DegenerateError("nss: fixation map has no fixations");
    if (map_max(pred) == map_min(pred)) throw DegenerateError("nss: constant prediction");
    const ZStats s = z_stats(pred);

    double total = 0.0;
    for (std::size_t i : idx) total += (pred.values[i] - s.mean) / s.sigma;
    return total / static_cast<double>(idx.size());
}

double auc_judd(const SaliencyMap& pred, const SaliencyMap& fix) {
    check_map(pred, "auc_judd: pred");
    require_same_shape(pred, fix, "auc_judd");

    const auto idx = fixation_indices(fix);
    if (idx.empty()) throw DegenerateError("auc_judd: fixation map has no fixations");
    if (map_max(pred) == map_min(pred)) throw DegenerateError("auc_judd: constant prediction");

    std::vector<double> fix_vals;
    fix_vals.reserve(idx.size());
    std::vector<bool> is_fix(pred.size(), false);
    for (std::size_t i : idx) {
        is_fix[i] = true;
        fix_vals.push_back(pred.values[i]);
    }
    std::vector<double> nonfix_vals;
    nonfix_vals.reserve(pred.size() - idx.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!is_fix[i]) nonfix_vals.push_back(pred.values[i]);
    }
    if (nonfix_vals.empty()) throw DegenerateError("auc_judd: every pixel is a fixation");

    std::vector<double> fix_asc = fix_vals;
    std::sort(fix_asc.begin(), fix_asc.end());
    std::sort(nonfix_vals.begin(), nonfix_vals.end());

    std::vector<double> thresholds = fix_vals;
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());

    const double n_fix = static_cast<double>(fix_vals.size());
    const double n_non = static_cast<double>(nonfix_vals.size());
    std::vector<std::pair<double, double>> points;
    points.reserve(thresholds.size() + 2);
    points.emplace_back(0.0, 0.0);
    for (double t : thresholds) {
        points.emplace_back(count_ge(nonfix_vals, t) / n_non, count_ge(fix_asc, t) / n_fix);
    }
    points.emplace_back(1.0, 1.0);
    return roc_area(points);
}

double auc_borji(const SaliencyMap& pred, const SaliencyMap& fix, int n_splits,
                 std::uint64_t seed) {
    check_map(pred, "auc_borji: pred");
    require_same_shape(pred, fix, "auc_borji");
    if (n_splits < 1) throw DomainError("auc_borji: n_splits must be >= 1");

    const auto idx = fixation_indices(fix);
    if (idx.empty()) throw DegenerateError("auc_borji: fixation map has no fixations");
    const double lo = map_min(pred);
    const double hi = map_max(pred);
    if (hi == lo) throw DegenerateError("auc_borji: constant prediction");

    std::vector<double> fix_vals;
    fix_vals.reserve(idx.size());
    std::vector<bool> is_fix(pred.size(), false);
    for (std::size_t i : idx) {
        is_fix[i] = true;
        fix_vals.push_back(pred.values[i]);
    }
    std::sort(fix_vals.begin(), fix_vals.end());
    std::vector<double> nonfix_pool;
    nonfix_pool.reserve(pred.size() - idx.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!is_fix[i]) nonfix_pool.push_back(pred.values[i]);
    }
    if (nonfix_pool.empty()) throw DegenerateError("auc_borji: every pixel is a fixation");

    // Thresholds sweep the value range in steps of 0.1, highest first.
    const double range = hi - lo;
    std::vector<double> thresholds(11);
    for (int j = 0; j <= 10; ++j) {
        thresholds[j] = j == 0 ? hi : lo + (10 - j) * 0.1 * range;
    }

    Rng rng(seed);
    const double n_fix = static_cast<double>(fix_vals.size());
    const std::size_t n_neg = fix_vals.size();
    double area_sum = 0.0;
    std::vector<double> negatives(n_neg);
    for (int split = 0; split < n_splits; ++split) {
        for (std::size_t i = 0; i < n_neg; ++i) {
            negatives[i] = nonfix_pool[rng.uniform_index(nonfix_pool.size())];
        }
        std::sort(negatives.begin(), negatives.end());
        std::vector<std::pair<double, double>> points;
        points.reserve(thresholds.size() + 2);
        points.emplace_back(0.0, 0.0);
        for (double t : thresholds) {
            points.emplace_back(count_ge(negatives, t) / static_cast<double>(n_neg),
                                count_ge(fix_vals, t) / n_fix);
        }
        points.emplace_back(1.0, 1.0);
        area_sum += roc_area(points);
    }
    return area_sum / n_splits;
}

double jarodzka(const Scanpath& a, const Scanpath& b) {
    const std::size_t n = a.fixations.size();
    const std::size_t m = b.fixations.size();
    if (n == 0 || m == 0) throw DegenerateError("jarodzka: empty scanpath");

    std::vector<SphereCoord> pa(n), pb(m);
    for (std::size_t i = 0; i < n; ++i) pa[i] = erp_to_sphere(a.fixations[i].coord);
    for (std::size_t j = 0; j < m; ++j) pb[j] = erp_to_sphere(b.fixations[j].coord);

    std::vector<double> cost(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            cost[i * m + j] = orthodromic_distance(pa[i], pb[j]);
        }
    }

    // total[i][j]: minimal accumulated cost of a monotone path from (0,0);
    // steps[i][j]: cell count of that path (ties prefer the diagonal).
    std::vector<double> total(n * m);
    std::vector<std::size_t> steps(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t at = i * m + j;
            if (i == 0 && j == 0) {
                total[at] = cost[at];
                steps[at] = 1;
                continue;
            }
            double best = 0.0;
            std::size_t best_steps = 0;
            bool first = true;
            auto consider = [&](std::size_t from) {
                if (first || total[from] < best ||
                    (total[from] == best && steps[from] < best_steps)) {
                    best = total[from];
                    best_steps = steps[from];
                    first = false;
                }
            };
            if (i > 0 && j > 0) consider(at - m - 1);
            if (i > 0) consider(at - m);
            if (j > 0) consider(at - 1);
            total[at] = best + cost[at];
            steps[at] = best_steps + 1;
        }
    }
    const std::size_t last = n * m - 1;
    return (total[last] / static_cast<double>(steps[last])) / kPi;
}

double hybrid_nss(const Scanpath& pred, const SaliencyMap& gt_map) {
    check_map(gt_map, "hybrid_nss: gt_map");
    if (pred.fixations.empty()) throw DegenerateError("hybrid_nss: empty scanpath");
    if (map_max(gt_map) == map_min(gt_map)) {
        throw DegenerateError("hybrid_nss: constant ground-truth map");
    }
    const ZStats s = z_stats(gt_map);

    double sum = 0.0;
    for (const Fixation& f : pred.fixations) {
        const std::size_t i = nearest_pixel(f.coord, gt_map.width, gt_map.height);
        sum += (gt_map.values[i] - s.mean) / s.sigma;
    }
    return sum / static_cast<double>(pred.fixations.size());
}

double MetricReport::at(const std::string& name) const {
    for (const auto& [key, value] : values) {
        if (key == name) return value;
    }
    throw DomainError("MetricReport: no metric named '" + name + "'");
}

MetricReport evaluate_saliency(const SaliencyMap& pred, const SaliencyMap& gt,
                               const SaliencyMap* fix, int borji_splits,
                               std::uint64_t borji_seed) {
    MetricReport report;
    if (fix) {
        report.add("auc_judd", auc_judd(pred, *fix));
        report.add("auc_borji", auc_borji(pred, *fix, borji_splits, borji_seed));
        report.add("nss", nss(pred, *fix));
    }
    report.add("cc", cc(pred, gt));
    report.add("sim", sim(pred, gt));
    report.add("kld", kld(pred, gt));
    return report;
}

MetricReport evaluate_scanpath(const Scanpath& pred, const Scanpath& gt,
                               const SaliencyMap* gt_map) {
    MetricReport report;
    report.add("jarodzka", jarodzka(pred, gt));
    if (gt_map) report.add("hybrid_nss", hybrid_nss(pred, *gt_map));
    return report;
}

} // namespace salypath
