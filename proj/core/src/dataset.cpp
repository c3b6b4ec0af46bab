#include "salypath/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "salypath/errors.hpp"
#include "salypath/rng.hpp"
#include "salypath/sphere.hpp"

namespace salypath {

DatasetSplit split_dataset(std::vector<std::string> ids, std::uint64_t seed,
                           double train_fraction) {
    if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
        throw DomainError("split_dataset: train_fraction must be in [0,1]");
    }
    Rng rng(seed);
    for (std::size_t i = ids.size(); i > 1; --i) {
        std::swap(ids[i - 1], ids[rng.uniform_index(i)]);
    }
    const auto cut = static_cast<std::size_t>(
        std::llround(static_cast<double>(ids.size()) * train_fraction));
    DatasetSplit split;
    split.train.assign(ids.begin(), ids.begin() + std::min(cut, ids.size()));
    split.test.assign(ids.begin() + std::min(cut, ids.size()), ids.end());
    return split;
}

Scene synthesize_scene(std::uint64_t seed, const SceneConfig& cfg) {
    if (cfg.width < 1 || cfg.height < 1) {
        throw DomainError("synthesize_scene: dimensions must be >= 1");
    }
    if (cfg.n_blobs < 1) throw DomainError("synthesize_scene: n_blobs must be >= 1");
    if (cfg.n_scanpaths < 1 || cfg.n_fixations < 1) {
        throw DomainError("synthesize_scene: scanpath counts must be >= 1");
    }

    Rng rng(seed);
    Scene scene;
    scene.gt_map = SaliencyMap(cfg.width, cfg.height);

    struct Blob {
        SphereCoord center;
        double sigma_rad;
        double amplitude;
    };
    std::vector<Blob> blobs;
    blobs.reserve(static_cast<std::size_t>(cfg.n_blobs));
    const double lat_sigma = deg_to_rad(cfg.blob_lat_sigma_deg);
    for (int b = 0; b < cfg.n_blobs; ++b) {
        const double lon = rng.uniform(-kPi, kPi);
        double lat = rng.normal(0.0, lat_sigma);
        while (std::fabs(lat) >= kHalfPi) lat = rng.normal(0.0, lat_sigma);
        // Snap to the nearest pixel center so the peak sits on the grid.
        const std::size_t pix = nearest_pixel(sphere_to_erp({lon, lat}), cfg.width, cfg.height);
        const int row = static_cast<int>(pix) / cfg.width;
        const int col = static_cast<int>(pix) % cfg.width;
        Blob blob;
        blob.center = erp_to_sphere(pixel_center(col, row, cfg.width, cfg.height));
        blob.sigma_rad =
            deg_to_rad(rng.uniform(cfg.blob_sigma_min_deg, cfg.blob_sigma_max_deg));
        blob.amplitude = rng.uniform(0.5, 1.0);
        blobs.push_back(blob);
    }

    for (int r = 0; r < cfg.height; ++r) {
        for (int c = 0; c < cfg.width; ++c) {
            const SphereCoord p = erp_to_sphere(pixel_center(c, r, cfg.width, cfg.height));
            double v = 0.0;
            for (const Blob& blob : blobs) {
                const double d = orthodromic_distance(p, blob.center);
                v += blob.amplitude * std::exp(-d * d / (2.0 * blob.sigma_rad * blob.sigma_rad));
            }
            scene.gt_map.at(c, r) = v;
        }
    }
    max_normalize(scene.gt_map);

    // Inverse-CDF sampling over pixels; fixations land on pixel centers.
    std::vector<double> cumulative(scene.gt_map.size());
    double running = 0.0;
    for (std::size_t i = 0; i < scene.gt_map.size(); ++i) {
        running += scene.gt_map.values[i];
        cumulative[i] = running;
    }
    scene.gt_scanpaths.reserve(static_cast<std::size_t>(cfg.n_scanpaths));
    for (int s = 0; s < cfg.n_scanpaths; ++s) {
        Scanpath sp;
        sp.user_id = std::to_string(s);
        sp.fixations.reserve(static_cast<std::size_t>(cfg.n_fixations));
        for (int f = 0; f < cfg.n_fixations; ++f) {
            const double r = rng.uniform() * running;
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
            const std::size_t pix = std::min(
                static_cast<std::size_t>(it - cumulative.begin()), scene.gt_map.size() - 1);
            Fixation fix;
            fix.coord = pixel_center(static_cast<int>(pix) % cfg.width,
                                     static_cast<int>(pix) / cfg.width, cfg.width, cfg.height);
            sp.fixations.push_back(fix);
        }
        scene.gt_scanpaths.push_back(std::move(sp));
    }

    scene.image = nn::Tensor({3, cfg.height, cfg.width});
    const std::size_t plane = scene.gt_map.size();
    for (std::size_t i = 0; i < plane; ++i) {
        const double v = scene.gt_map.values[i] + rng.normal(0.0, cfg.noise_sigma);
        scene.image.values[i] = v;
        scene.image.values[i + plane] = v;
        scene.image.values[i + 2 * plane] = v;
    }
    return scene;
}

Scene synthesize_scene(std::uint64_t seed, int width, int height, int n_blobs) {
    SceneConfig cfg;
    cfg.width = width;
    cfg.height = height;
    cfg.n_blobs = n_blobs;
    return synthesize_scene(seed, cfg);
}

nn::Tensor image_from_plane(const SaliencyMap& plane) {
    nn::Tensor image({3, plane.height, plane.width});
    const std::size_t n = plane.size();
    for (std::size_t i = 0; i < n; ++i) {
        image.values[i] = plane.values[i];
        image.values[i + n] = plane.values[i];
        image.values[i + 2 * n] = plane.values[i];
    }
    return image;
}

} // namespace salypath
