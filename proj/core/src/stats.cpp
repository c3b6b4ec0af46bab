#include "salypath/stats.hpp"

#include <cmath>
#include <string>

#include "salypath/errors.hpp"

namespace salypath {

namespace {

// Continued fraction for I_x(a,b), modified Lentz iteration.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw DomainError("incomplete_beta: continued fraction failed to converge");
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DomainError("incomplete_beta: a and b must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("incomplete_beta: x must be in [0,1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The continued fraction converges fastest below the mean a/(a+b).
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_distribution_sf(double f, double df1, double df2) {
    if (!(df1 > 0.0) || !(df2 > 0.0)) {
        throw DomainError("f_distribution_sf: degrees of freedom must be positive");
    }
    if (!(f >= 0.0)) throw DomainError("f_distribution_sf: F must be >= 0");
    if (f == 0.0) return 1.0;
    return incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f));
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) {
        throw DegenerateError("one_way_anova: need at least two groups");
    }
    std::size_t total_n = 0;
    double grand_sum = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].size() < 2) {
            throw DegenerateError("one_way_anova: group " + std::to_string(g) +
                                  " has fewer than two values");
        }
        total_n += groups[g].size();
        for (double v : groups[g]) grand_sum += v;
    }
    const double grand_mean = grand_sum / static_cast<double>(total_n);

    double ss_between = 0.0;
    double ss_within = 0.0;
    for (const auto& group : groups) {
        double mean = 0.0;
        for (double v : group) mean += v;
        mean /= static_cast<double>(group.size());
        const double dm = mean - grand_mean;
        ss_between += static_cast<double>(group.size()) * dm * dm;
        for (double v : group) ss_within += (v - mean) * (v - mean);
    }

    AnovaResult res;
    res.df_between = static_cast<int>(groups.size()) - 1;
    res.df_within = static_cast<int>(total_n - groups.size());
    if (ss_within <= 0.0) {
        throw DegenerateError("one_way_anova: zero within-group variance");
    }
    const double ms_between = ss_between / res.df_between;
    const double ms_within = ss_within / res.df_within;
    res.f_stat = ms_between / ms_within;
    res.p_value = f_distribution_sf(res.f_stat, res.df_between, res.df_within);
    return res;
}

} // namespace salypath
