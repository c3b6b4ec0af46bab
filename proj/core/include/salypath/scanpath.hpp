#pragma once

#include <optional>
#include <string>
#include <vector>

#include "salypath/sphere.hpp"

namespace salypath {

/// Single viewport-center fixation. The timestamp is optional; when
/// present it must be non-negative and non-decreasing along a scanpath.
struct Fixation {
    ErpCoord coord;
    std::optional<double> t;
};

/// Ordered fixation sequence of one viewer. The dataset convention is
/// 100 fixations per scanpath, but no length is hard-coded anywhere.
struct Scanpath {
    std::string user_id;
    std::vector<Fixation> fixations;

    std::size_t size() const { return fixations.size(); }
};

} // namespace salypath
