#include "salypath/sphere.hpp"

#include <cmath>

#include "salypath/errors.hpp"
#include "salypath/saliency_map.hpp"

namespace salypath {

SphereCoord erp_to_sphere(const ErpCoord& c) {
    if (!(c.u >= 0.0 && c.u < 1.0) || !(c.v >= 0.0 && c.v < 1.0)) {
        throw DomainError("erp_to_sphere: coordinate outside [0,1)");
    }
    return {(c.u - 0.5) * kTwoPi, (0.5 - c.v) * kPi};
}

ErpCoord sphere_to_erp(const SphereCoord& s) {
    double lon = s.lon;
    double lat = s.lat;
    if (!(lat >= -kHalfPi && lat <= kHalfPi) || !std::isfinite(lon)) {
        throw DomainError("sphere_to_erp: coordinate outside valid ranges");
    }
    if (lon == kPi) lon = -kPi;
    if (!(lon >= -kPi && lon < kPi)) {
        throw DomainError("sphere_to_erp: longitude outside [-pi, pi)");
    }
    ErpCoord c{lon / kTwoPi + 0.5, 0.5 - lat / kPi};
    // lat = -pi/2 has no in-range preimage; park it just inside the raster.
    if (c.v >= 1.0) c.v = std::nextafter(1.0, 0.0);
    return c;
}

double orthodromic_distance(const SphereCoord& a, const SphereCoord& b) {
    const double sdlat = std::sin(0.5 * (b.lat - a.lat));
    const double sdlon = std::sin(0.5 * (b.lon - a.lon));
    double h = sdlat * sdlat + std::cos(a.lat) * std::cos(b.lat) * sdlon * sdlon;
    if (h < 0.0) h = 0.0;
    if (h > 1.0) h = 1.0;
    return 2.0 * std::asin(std::sqrt(h));
}

ErpCoord pixel_center(int col, int row, int width, int height) {
    return {(col + 0.5) / width, (row + 0.5) / height};
}

double row_latitude(int row, int height) {
    return (0.5 - (row + 0.5) / height) * kPi;
}

std::size_t nearest_pixel(const ErpCoord& c, int width, int height) {
    int col = static_cast<int>(c.u * width);
    int row = static_cast<int>(c.v * height);
    if (col >= width) col = width - 1;
    if (row >= height) row = height - 1;
    if (col < 0) col = 0;
    if (row < 0) row = 0;
    return static_cast<std::size_t>(row) * width + col;
}

SaliencyMap solid_angle_weights(int width, int height) {
    if (width < 1 || height < 1) {
        throw DomainError("solid_angle_weights: dimensions must be >= 1");
    }
    SaliencyMap w(width, height);
    for (int r = 0; r < height; ++r) {
        double weight = std::cos(row_latitude(r, height));
        if (weight < 0.0) weight = 0.0;
        for (int c = 0; c < width; ++c) w.at(c, r) = weight;
    }
    return w;
}

} // namespace salypath
