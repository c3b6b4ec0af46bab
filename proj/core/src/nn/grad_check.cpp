#include "salypath/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "salypath/errors.hpp"
#include "salypath/heatmap.hpp"
#include "salypath/nn/losses.hpp"
#include "salypath/rng.hpp"

namespace salypath::nn {

GradCheckResult grad_check(SalyPathNet& net, const Scene& scene, LossKind kind,
                           int n_coordinates, std::uint64_t seed, double step) {
    if (n_coordinates < 1) throw DomainError("grad_check: n_coordinates must be >= 1");
    if (scene.gt_scanpaths.empty()) throw DegenerateError("grad_check: scene has no scanpaths");

    const SaliencyMap fix =
        fixation_map(scene.gt_scanpaths, scene.gt_map.width, scene.gt_map.height);
    const Scanpath& gt_path = scene.gt_scanpaths.front();

    const auto eval_loss = [&]() -> double {
        const Tensor refined = net.encode(scene.image);
        if (kind == LossKind::SaliencyL1) {
            return saliency_loss(net.decode(refined), scene.gt_map, fix).value;
        }
        return scanpath_loss(net.predict_coords(refined), gt_path).value;
    };

    // Analytic gradients over the full path.
    net.zero_grad();
    {
        const Tensor refined = net.encode(scene.image);
        if (kind == LossKind::SaliencyL1) {
            const LossResult l = saliency_loss(net.decode(refined), scene.gt_map, fix);
            net.bottleneck_backward(net.decoder_backward(l.grad));
        } else {
            const LossResult l = scanpath_loss(net.predict_coords(refined), gt_path);
            net.bottleneck_backward(net.aux_backward(l.grad));
        }
    }

    // Eligible parameters: the groups the chosen loss actually reaches.
    std::vector<ParamRef> eligible;
    for (const ParamRef& p : net.parameters()) {
        const bool on_path = kind == LossKind::SaliencyL1
                                 ? p.group != ParamGroup::Aux
                                 : p.group != ParamGroup::Decoder;
        if (on_path && p.tensor->size() > 0) eligible.push_back(p);
    }

    Rng rng(seed);
    GradCheckResult result;
    for (int c = 0; c < n_coordinates; ++c) {
        const ParamRef& p = eligible[rng.uniform_index(eligible.size())];
        const std::size_t i = rng.uniform_index(p.tensor->size());
        const double analytic = p.tensor->grad[i];
        const double saved = p.tensor->values[i];

        p.tensor->values[i] = saved + step;
        const double plus = eval_loss();
        p.tensor->values[i] = saved - step;
        const double minus = eval_loss();
        p.tensor->values[i] = saved;

        const double fd = (plus - minus) / (2.0 * step);
        const double denom = std::max({std::fabs(analytic), std::fabs(fd), 1e-6});
        result.max_rel_error = std::max(result.max_rel_error, std::fabs(analytic - fd) / denom);
        ++result.n_coordinates;
    }
    return result;
}

} // namespace salypath::nn
