#pragma once

#include <cstdint>

#include "salypath/dataset.hpp"
#include "salypath/nn/model.hpp"

namespace salypath::nn {

enum class LossKind { SaliencyL1, ScanpathL2 };

struct GradCheckResult {
    double max_rel_error = 0.0;
    int n_coordinates = 0;
};

/// Validate the analytic parameter gradients of a full loss path
/// against central finite differences. A seeded random subset of
/// n_coordinates parameter entries is perturbed by +-step (double
/// precision throughout); relative error uses max(|a|,|fd|,1e-6) as
/// denominator so dead ReLU coordinates compare as zero.
GradCheckResult grad_check(SalyPathNet& net, const Scene& scene, LossKind kind,
                           int n_coordinates, std::uint64_t seed, double step = 1e-5);

} // namespace salypath::nn
