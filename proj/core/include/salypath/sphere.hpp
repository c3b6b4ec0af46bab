#pragma once

#include <cstddef>

namespace salypath {

struct SaliencyMap;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHalfPi = 0.5 * kPi;

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Normalized position on the equirectangular plane.
/// u runs left to right, v top to bottom, both in [0, 1).
struct ErpCoord {
    double u = 0.0;
    double v = 0.0;
};

/// Position on the unit sphere. lon in [-pi, pi), lat in [-pi/2, pi/2];
/// lat = +pi/2 is the north pole (top of the ERP raster).
struct SphereCoord {
    double lon = 0.0;
    double lat = 0.0;
};

/// Linear ERP-to-sphere mapping: lon = (u - 0.5) * 2pi, lat = (0.5 - v) * pi.
/// Throws DomainError when u or v is outside [0, 1) or not finite.
SphereCoord erp_to_sphere(const ErpCoord& c);

/// Exact inverse of erp_to_sphere. lon = pi is folded to -pi first.
/// lat = -pi/2 (which has no in-range preimage) clamps v just below 1.
ErpCoord sphere_to_erp(const SphereCoord& s);

/// Great-circle central angle between two sphere points, in [0, pi].
/// Haversine form, numerically stable for nearby and antipodal pairs.
double orthodromic_distance(const SphereCoord& a, const SphereCoord& b);

/// ERP coordinate of the center of pixel (col, row) on a W x H raster.
ErpCoord pixel_center(int col, int row, int width, int height);

/// Latitude of the center of raster row `row`.
double row_latitude(int row, int height);

/// Nearest raster pixel to an ERP coordinate (floor binning; the result
/// is the pixel whose center is closest to c). Returns col + row * width.
std::size_t nearest_pixel(const ErpCoord& c, int width, int height);

/// Per-pixel solid-angle compensation for the ERP oversampling of poles:
/// every pixel of row r gets cos(lat(r)). Equator rows carry the largest
/// weight; all weights are >= 0.
SaliencyMap solid_angle_weights(int width, int height);

} // namespace salypath
