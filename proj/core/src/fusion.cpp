#include "salypath/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "salypath/errors.hpp"

namespace salypath {

void FusionConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("FusionConfig: alpha must be in [0,1]");
    }
    if (!(k >= 1.0)) throw DomainError("FusionConfig: k must be >= 1");
}

SaliencyMap linear_scale(const SaliencyMap& map) {
    check_map(map, "linear_scale");
    const double lo = map_min(map);
    const double hi = map_max(map);
    SaliencyMap out(map.width, map.height);
    if (hi <= lo) {
        std::fill(out.values.begin(), out.values.end(), 1.0);
        return out;
    }
    const double inv_range = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < map.size(); ++i) {
        out.values[i] = (map.values[i] - lo) * inv_range;
    }
    return out;
}

SaliencyMap joint_merge(const SaliencyMap& t, const SaliencyMap& s,
                        const FusionConfig& cfg) {
    cfg.validate();
    check_map(t, "joint_merge: T");
    check_map(s, "joint_merge: S");
    if (!t.same_shape(s)) throw ShapeError("joint_merge: T and S dimensions differ");

    const double global_max = std::max(map_max(t), map_max(s));
    if (global_max <= 0.0) {
        throw DegenerateError("joint_merge: both maps are all-zero");
    }

    const double alpha = cfg.alpha;
    const double k = cfg.k;
    const double inv_k = 1.0 / k;
    SaliencyMap out(t.width, t.height);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double a = std::pow(t.values[i] / global_max, k);
        const double b = std::pow(s.values[i] / global_max, k);
        out.values[i] = global_max * std::pow(alpha * a + (1.0 - alpha) * b, inv_k);
    }
    return out;
}

SaliencyMap unbias(const SaliencyMap& j, const SaliencyMap& bias) {
    check_map(j, "unbias: J");
    check_map(bias, "unbias: E");
    if (!j.same_shape(bias)) throw ShapeError("unbias: J and E dimensions differ");

    const SaliencyMap scaled = linear_scale(bias);
    SaliencyMap out(j.width, j.height);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values[i] = 0.5 * j.values[i] + 0.5 * j.values[i] * scaled.values[i];
    }
    return out;
}

SaliencyMap salypath_pipeline(const SaliencyMap& t, const Scanpath& sp,
                              const PipelineConfig& cfg) {
    const SaliencyMap s = scanpath_to_map(sp, t.width, t.height, cfg.kernel);
    const SaliencyMap e = equator_bias(t.width, t.height, cfg.bias);
    return unbias(joint_merge(t, s, cfg.fusion), e);
}

} // namespace salypath
