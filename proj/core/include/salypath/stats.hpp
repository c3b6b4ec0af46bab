#pragma once

#include <vector>

namespace salypath {

/// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0,1].
/// Continued-fraction evaluation (modified Lentz), absolute error well
/// below 1e-10 for the degree-of-freedom ranges ANOVA produces.
double incomplete_beta(double a, double b, double x);

/// Survival function Q(F | df1, df2) of the F distribution:
/// Q = I_{df2/(df2 + df1 F)}(df2/2, df1/2).
double f_distribution_sf(double f, double df1, double df2);

struct AnovaResult {
    double f_stat = 0.0;
    double p_value = 1.0;
    int df_between = 0;
    int df_within = 0;
};

/// One-way between-groups analysis of variance. Requires at least two
/// groups with at least two values each; throws DegenerateError
/// otherwise, and also when the within-group variance vanishes.
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

} // namespace salypath
