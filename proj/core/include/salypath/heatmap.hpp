#pragma once

#include <vector>

#include "salypath/saliency_map.hpp"
#include "salypath/scanpath.hpp"

namespace salypath {

/// Width of the spherical Gaussian used to turn fixations into heat.
/// 11.75 degrees of great-circle angle is the customary width for
/// head-motion saliency construction; configurable since ground-truth
/// pipelines differ.
struct KernelConfig {
    double sigma_deg = 11.75;
};

/// Latitude-Gaussian width of the equator bias map.
struct EquatorBiasConfig {
    double sigma_lat_deg = 25.0;
};

/// Render one scanpath to a heatmap: each pixel accumulates
/// exp(-d^2 / (2 sigma^2)) over fixations, with d the great-circle
/// angle from the pixel center to the fixation. Max-normalized to
/// peak 1. Distances live on the sphere, not the ERP plane, so the
/// kernel wraps correctly near the poles and the date line.
SaliencyMap scanpath_to_map(const Scanpath& sp, int width, int height,
                            const KernelConfig& cfg = {});

/// Same kernel accumulated over every fixation of every scanpath,
/// then max-normalized.
SaliencyMap aggregate_scanpaths(const std::vector<Scanpath>& sps, int width, int height,
                                const KernelConfig& cfg = {});

/// Binary raster: 1 exactly at pixels containing at least one fixation
/// (nearest-pixel binning), 0 elsewhere.
SaliencyMap fixation_map(const std::vector<Scanpath>& sps, int width, int height);

/// Equator bias map E: exp(-lat^2 / (2 sigma_lat^2)) per row, constant
/// along rows, symmetric about the equator.
SaliencyMap equator_bias(int width, int height, const EquatorBiasConfig& cfg = {});

} // namespace salypath
