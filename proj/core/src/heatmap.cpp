#include "salypath/heatmap.hpp"

#include <cmath>

#include "salypath/errors.hpp"

namespace salypath {

namespace {

void accumulate_kernel(SaliencyMap& acc, const std::vector<Fixation>& fixations,
                       double sigma_rad) {
    const int width = acc.width;
    const int height = acc.height;
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma_rad * sigma_rad);

    std::vector<double> col_lon(width);
    for (int c = 0; c < width; ++c) col_lon[c] = ((c + 0.5) / width - 0.5) * kTwoPi;
    std::vector<double> row_lat(height), row_sin(height), row_cos(height);
    for (int r = 0; r < height; ++r) {
        row_lat[r] = row_latitude(r, height);
        row_sin[r] = std::sin(row_lat[r]);
        row_cos[r] = std::cos(row_lat[r]);
    }

    std::vector<double> sdlon2(width);
    for (const Fixation& f : fixations) {
        const SphereCoord fc = erp_to_sphere(f.coord);
        const double cos_f = std::cos(fc.lat);
        for (int c = 0; c < width; ++c) {
            const double s = std::sin(0.5 * (col_lon[c] - fc.lon));
            sdlon2[c] = s * s;
        }
        for (int r = 0; r < height; ++r) {
            const double sdlat = std::sin(0.5 * (row_lat[r] - fc.lat));
            const double lat_term = sdlat * sdlat;
            const double cos_term = row_cos[r] * cos_f;
            double* out = acc.values.data() + static_cast<std::size_t>(r) * width;
            for (int c = 0; c < width; ++c) {
                double h = lat_term + cos_term * sdlon2[c];
                if (h > 1.0) h = 1.0;
                const double d = 2.0 * std::asin(std::sqrt(h));
                out[c] += std::exp(-d * d * inv_two_sigma2);
            }
        }
    }
}

void check_dims(int width, int height, const char* what) {
    if (width < 1 || height < 1) {
        throw DomainError(std::string(what) + ": dimensions must be >= 1");
    }
}

} // namespace

SaliencyMap scanpath_to_map(const Scanpath& sp, int width, int height,
                            const KernelConfig& cfg) {
    check_dims(width, height, "scanpath_to_map");
    if (sp.fixations.empty()) throw DegenerateError("scanpath_to_map: empty scanpath");
    if (!(cfg.sigma_deg > 0.0)) throw DomainError("scanpath_to_map: sigma_deg must be > 0");
    SaliencyMap map(width, height);
    accumulate_kernel(map, sp.fixations, deg_to_rad(cfg.sigma_deg));
    max_normalize(map);
    return map;
}

SaliencyMap aggregate_scanpaths(const std::vector<Scanpath>& sps, int width, int height,
                                const KernelConfig& cfg) {
    check_dims(width, height, "aggregate_scanpaths");
    if (sps.empty()) throw DegenerateError("aggregate_scanpaths: no scanpaths");
    if (!(cfg.sigma_deg > 0.0)) throw DomainError("aggregate_scanpaths: sigma_deg must be > 0");
    SaliencyMap map(width, height);
    const double sigma_rad = deg_to_rad(cfg.sigma_deg);
    bool any = false;
    for (const Scanpath& sp : sps) {
        if (sp.fixations.empty()) continue;
        any = true;
        accumulate_kernel(map, sp.fixations, sigma_rad);
    }
    if (!any) throw DegenerateError("aggregate_scanpaths: all scanpaths empty");
    max_normalize(map);
    return map;
}

SaliencyMap fixation_map(const std::vector<Scanpath>& sps, int width, int height) {
    check_dims(width, height, "fixation_map");
    if (sps.empty()) throw DegenerateError("fixation_map: no scanpaths");
    SaliencyMap map(width, height);
    for (const Scanpath& sp : sps) {
        for (const Fixation& f : sp.fixations) {
            map.values[nearest_pixel(f.coord, width, height)] = 1.0;
        }
    }
    return map;
}

SaliencyMap equator_bias(int width, int height, const EquatorBiasConfig& cfg) {
    check_dims(width, height, "equator_bias");
    if (!(cfg.sigma_lat_deg > 0.0)) throw DomainError("equator_bias: sigma_lat_deg must be > 0");
    const double sigma = deg_to_rad(cfg.sigma_lat_deg);
    SaliencyMap map(width, height);
    for (int r = 0; r < height; ++r) {
        const double lat = row_latitude(r, height);
        const double value = std::exp(-lat * lat / (2.0 * sigma * sigma));
        for (int c = 0; c < width; ++c) map.at(c, r) = value;
    }
    return map;
}

} // namespace salypath
