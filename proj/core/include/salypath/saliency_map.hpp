#pragma once

#include <cstddef>
#include <vector>

namespace salypath {

/// Non-negative raster over the ERP plane, row-major with row 0 at the
/// top (v = 0). Values are kept in double precision internally; the
/// on-disk format stores 32-bit floats (see raster_io.hpp).
struct SaliencyMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    SaliencyMap() = default;
    SaliencyMap(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t size() const { return values.size(); }

    double& at(int col, int row) { return values[static_cast<std::size_t>(row) * width + col]; }
    double at(int col, int row) const { return values[static_cast<std::size_t>(row) * width + col]; }

    bool same_shape(const SaliencyMap& o) const {
        return width == o.width && height == o.height;
    }
};

/// Largest value in the map (0 for an empty map).
double map_max(const SaliencyMap& m);

/// Smallest value in the map (0 for an empty map).
double map_min(const SaliencyMap& m);

/// Index of the first pixel attaining the maximum.
std::size_t map_argmax(const SaliencyMap& m);

/// Scale so the peak becomes exactly 1. All-zero maps are left unchanged.
void max_normalize(SaliencyMap& m);

/// Return a copy scaled to unit sum. Throws DegenerateError on all-zero input.
SaliencyMap sum_normalized(const SaliencyMap& m);

/// Verify the type invariants (finite, non-negative, dims >= 1).
/// Throws DomainError on violation; `what` names the offending map.
void check_map(const SaliencyMap& m, const char* what);

} // namespace salypath
