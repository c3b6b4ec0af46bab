#pragma once

#include <vector>

#include "salypath/dataset.hpp"
#include "salypath/nn/model.hpp"

namespace salypath::nn {

/// Adaptive-moment gradient descent settings. Full-batch at toy scale.
struct OptimizerConfig {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int steps = 200;
};

class Adam {
public:
    Adam(std::vector<Tensor*> params, const OptimizerConfig& cfg);
    /// Apply one update from the gradients currently in the tensors.
    void step();

private:
    std::vector<Tensor*> params_;
    std::vector<std::vector<double>> m_, v_;
    OptimizerConfig cfg_;
    long t_ = 0;
};

struct TrainHistory {
    std::vector<double> losses; // mean loss per step, before the update
};

/// Stage 1: fit encoder + attention + decoder with the saliency loss.
/// Full batch over the scenes; deterministic.
TrainHistory train_stage1(SalyPathNet& net, const std::vector<Scene>& scenes,
                          const OptimizerConfig& cfg);

/// Stage 2: freeze encoder and attention, fit only the aux head with
/// the scanpath loss against each scene's first ground-truth scanpath.
/// Frozen parameters are bit-identical before and after.
TrainHistory train_stage2(SalyPathNet& net, const std::vector<Scene>& scenes,
                          const OptimizerConfig& cfg);

} // namespace salypath::nn
