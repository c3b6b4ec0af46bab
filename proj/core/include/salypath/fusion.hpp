#pragma once

#include "salypath/heatmap.hpp"
#include "salypath/saliency_map.hpp"
#include "salypath/scanpath.hpp"

namespace salypath {

/// Weights of the k-norm joint probability merge. alpha blends the
/// network map T against the scanpath map S; k is the power of the
/// weighted mean (k = 1 is the plain weighted average).
struct FusionConfig {
    double alpha = 0.7;
    double k = 1.0;

    void validate() const;
};

/// Min-max scaling onto [0, 1]. Constant maps scale to all ones.
SaliencyMap linear_scale(const SaliencyMap& map);

/// k-norm weighted power mean of two maps. With M the single global
/// maximum over all pixels of both maps,
///     J[l] = M * (alpha (T[l]/M)^k + (1-alpha) (S[l]/M)^k)^(1/k).
/// M is a scalar, not a per-pixel max; a per-pixel max would make the
/// normalization cancel trivially. Throws ShapeError on dimension
/// mismatch and DegenerateError when both maps are all-zero (that
/// signals an upstream failure rather than a valid empty scene).
SaliencyMap joint_merge(const SaliencyMap& t, const SaliencyMap& s,
                        const FusionConfig& cfg = {});

/// Equator-bias correction: J*[l] = J[l]/2 + J[l]/2 * Ls(E)[l], with
/// Ls the linear scaling above applied to the raw bias map. Since
/// Ls(E) is in [0,1], J/2 <= J* <= J pixelwise.
SaliencyMap unbias(const SaliencyMap& j, const SaliencyMap& bias);

struct PipelineConfig {
    FusionConfig fusion;
    KernelConfig kernel;
    EquatorBiasConfig bias;
};

/// Full merge chain for one prediction pair: build S from the scanpath,
/// build E, merge, unbias. Deterministic.
SaliencyMap salypath_pipeline(const SaliencyMap& t, const Scanpath& sp,
                              const PipelineConfig& cfg = {});

} // namespace salypath
