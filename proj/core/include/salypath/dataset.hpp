#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salypath/nn/tensor.hpp"
#include "salypath/saliency_map.hpp"
#include "salypath/scanpath.hpp"

namespace salypath {

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> test;
};

/// Seeded shuffle, then cut at round(n * train_fraction). The default
/// fraction 14/17 reproduces the 70/15 protocol on 85 ids (82% / 18%).
DatasetSplit split_dataset(std::vector<std::string> ids, std::uint64_t seed,
                           double train_fraction = 14.0 / 17.0);

/// Parameters of the synthetic desk-scale scene generator.
struct SceneConfig {
    int width = 64;
    int height = 32;
    int n_blobs = 3;
    int n_scanpaths = 36; // the loader never assumes a fixed count
    int n_fixations = 100;
    double noise_sigma = 0.05;
    double blob_sigma_min_deg = 8.0;
    double blob_sigma_max_deg = 18.0;
    // Blob centers are drawn with this latitude spread, mimicking the
    // equator concentration of head motion.
    double blob_lat_sigma_deg = 30.0;
};

struct Scene {
    nn::Tensor image; // [3,H,W]: ground truth replicated per channel plus noise
    SaliencyMap gt_map;
    std::vector<Scanpath> gt_scanpaths;
};

/// Deterministic synthetic scene: the ground truth is a max-normalized
/// mixture of spherical Gaussians (centers snapped to pixel centers),
/// scanpaths are i.i.d. inverse-CDF samples of the ground-truth mass,
/// and the image is the map replicated to three channels with one
/// shared seeded noise plane added (so a single raster represents it).
Scene synthesize_scene(std::uint64_t seed, const SceneConfig& cfg);
Scene synthesize_scene(std::uint64_t seed, int width, int height, int n_blobs);

/// Rebuild the [3,H,W] image tensor from a single-plane raster the way
/// synthesize_scene lays it out (identical channels).
nn::Tensor image_from_plane(const SaliencyMap& plane);

} // namespace salypath
