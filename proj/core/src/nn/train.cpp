#include "salypath/nn/train.hpp"

#include <cmath>

#include "salypath/errors.hpp"
#include "salypath/heatmap.hpp"
#include "salypath/nn/losses.hpp"

namespace salypath::nn {

Adam::Adam(std::vector<Tensor*> params, const OptimizerConfig& cfg)
    : params_(std::move(params)), cfg_(cfg) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const Tensor* p : params_) {
        m_.emplace_back(p->size(), 0.0);
        v_.emplace_back(p->size(), 0.0);
    }
}

void Adam::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t p = 0; p < params_.size(); ++p) {
        Tensor& t = *params_[p];
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double g = t.grad[i];
            m_[p][i] = cfg_.beta1 * m_[p][i] + (1.0 - cfg_.beta1) * g;
            v_[p][i] = cfg_.beta2 * v_[p][i] + (1.0 - cfg_.beta2) * g * g;
            const double mhat = m_[p][i] / bc1;
            const double vhat = v_[p][i] / bc2;
            t.values[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

namespace {

std::vector<Tensor*> group_params(SalyPathNet& net, std::initializer_list<ParamGroup> groups) {
    std::vector<Tensor*> out;
    for (const ParamRef& p : net.parameters()) {
        for (ParamGroup g : groups) {
            if (p.group == g) {
                out.push_back(p.tensor);
                break;
            }
        }
    }
    return out;
}

} // namespace

TrainHistory train_stage1(SalyPathNet& net, const std::vector<Scene>& scenes,
                          const OptimizerConfig& cfg) {
    if (scenes.empty()) throw DegenerateError("train_stage1: empty dataset");

    // Targets are fixed per scene; build them once.
    std::vector<SaliencyMap> fix_maps;
    fix_maps.reserve(scenes.size());
    for (const Scene& scene : scenes) {
        fix_maps.push_back(
            fixation_map(scene.gt_scanpaths, scene.gt_map.width, scene.gt_map.height));
    }

    Adam opt(group_params(net, {ParamGroup::Encoder, ParamGroup::Attention, ParamGroup::Decoder}),
             cfg);
    const double inv_n = 1.0 / static_cast<double>(scenes.size());

    TrainHistory history;
    history.losses.reserve(static_cast<std::size_t>(cfg.steps));
    for (int step = 0; step < cfg.steps; ++step) {
        net.zero_grad();
        double loss = 0.0;
        for (std::size_t s = 0; s < scenes.size(); ++s) {
            const Tensor refined = net.encode(scenes[s].image);
            const Tensor pred = net.decode(refined);
            LossResult l = saliency_loss(pred, scenes[s].gt_map, fix_maps[s]);
            loss += inv_n * l.value;
            for (double& g : l.grad.values) g *= inv_n;
            net.bottleneck_backward(net.decoder_backward(l.grad));
        }
        history.losses.push_back(loss);
        opt.step();
    }
    return history;
}

TrainHistory train_stage2(SalyPathNet& net, const std::vector<Scene>& scenes,
                          const OptimizerConfig& cfg) {
    if (scenes.empty()) throw DegenerateError("train_stage2: empty dataset");
    for (const Scene& scene : scenes) {
        if (scene.gt_scanpaths.empty()) {
            throw DegenerateError("train_stage2: scene without ground-truth scanpaths");
        }
        if (scene.gt_scanpaths.front().size() !=
            static_cast<std::size_t>(net.config().n_fixations)) {
            throw ShapeError("train_stage2: scanpath length does not match n_fixations");
        }
    }

    net.set_frozen(ParamGroup::Encoder, true);
    net.set_frozen(ParamGroup::Attention, true);

    // The frozen bottleneck is constant per scene; encode each one once.
    std::vector<Tensor> refined;
    refined.reserve(scenes.size());
    for (const Scene& scene : scenes) refined.push_back(net.encode(scene.image));

    Adam opt(group_params(net, {ParamGroup::Aux}), cfg);
    const double inv_n = 1.0 / static_cast<double>(scenes.size());

    TrainHistory history;
    history.losses.reserve(static_cast<std::size_t>(cfg.steps));
    for (int step = 0; step < cfg.steps; ++step) {
        net.zero_grad();
        double loss = 0.0;
        for (std::size_t s = 0; s < scenes.size(); ++s) {
            const Tensor coords = net.predict_coords(refined[s]);
            LossResult l = scanpath_loss(coords, scenes[s].gt_scanpaths.front());
            loss += inv_n * l.value;
            for (double& g : l.grad.values) g *= inv_n;
            net.aux_backward(l.grad); // gradient stops at the frozen bottleneck
        }
        history.losses.push_back(loss);
        opt.step();
    }
    return history;
}

} // namespace salypath::nn
