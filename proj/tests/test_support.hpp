#pragma once

#include <cmath>
#include <vector>

#include "salypath/rng.hpp"
#include "salypath/saliency_map.hpp"
#include "salypath/scanpath.hpp"

namespace salypath::testing {

inline SaliencyMap random_map(Rng& rng, int w, int h, double lo = 0.0, double hi = 1.0) {
    SaliencyMap m(w, h);
    for (double& v : m.values) v = rng.uniform(lo, hi);
    return m;
}

/// Map whose values are dyadic rationals (k/4096), so small affine
/// transforms stay exact in double precision.
inline SaliencyMap random_dyadic_map(Rng& rng, int w, int h) {
    SaliencyMap m(w, h);
    for (double& v : m.values) {
        v = static_cast<double>(rng.uniform_index(4096)) / 4096.0;
    }
    return m;
}

inline Scanpath random_scanpath(Rng& rng, int n, const std::string& id = "u0") {
    Scanpath sp;
    sp.user_id = id;
    for (int i = 0; i < n; ++i) {
        Fixation f;
        f.coord.u = rng.uniform();
        f.coord.v = rng.uniform();
        sp.fixations.push_back(f);
    }
    return sp;
}

/// Binary map with n distinct random fixation pixels.
inline SaliencyMap random_fixation_map(Rng& rng, int w, int h, int n) {
    SaliencyMap m(w, h);
    int placed = 0;
    while (placed < n) {
        const std::size_t i = rng.uniform_index(m.size());
        if (m.values[i] == 0.0) {
            m.values[i] = 1.0;
            ++placed;
        }
    }
    return m;
}

/// Separable Gaussian blur on the ERP plane: wraps horizontally
/// (longitude is periodic), clamps vertically. Test-side corruption
/// utility, not part of the library surface.
inline SaliencyMap gaussian_blur(const SaliencyMap& in, double sigma_px) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_px)));
    std::vector<double> kernel(2 * radius + 1);
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * i * i / (sigma_px * sigma_px));
        total += kernel[i + radius];
    }
    for (double& k : kernel) k /= total;

    SaliencyMap tmp(in.width, in.height);
    for (int r = 0; r < in.height; ++r) {
        for (int c = 0; c < in.width; ++c) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int cc = (c + i) % in.width;
                if (cc < 0) cc += in.width;
                acc += kernel[i + radius] * in.at(cc, r);
            }
            tmp.at(c, r) = acc;
        }
    }
    SaliencyMap out(in.width, in.height);
    for (int r = 0; r < in.height; ++r) {
        for (int c = 0; c < in.width; ++c) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int rr = r + i;
                if (rr < 0) rr = 0;
                if (rr >= in.height) rr = in.height - 1;
                acc += kernel[i + radius] * tmp.at(c, rr);
            }
            out.at(c, r) = acc;
        }
    }
    return out;
}

} // namespace salypath::testing
