#include "salypath/saliency_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "salypath/errors.hpp"

namespace salypath {

double map_max(const SaliencyMap& m) {
    if (m.values.empty()) return 0.0;
    return *std::max_element(m.values.begin(), m.values.end());
}

double map_min(const SaliencyMap& m) {
    if (m.values.empty()) return 0.0;
    return *std::min_element(m.values.begin(), m.values.end());
}

std::size_t map_argmax(const SaliencyMap& m) {
    return static_cast<std::size_t>(
        std::max_element(m.values.begin(), m.values.end()) - m.values.begin());
}

void max_normalize(SaliencyMap& m) {
    const double peak = map_max(m);
    if (peak <= 0.0) return;
    for (double& v : m.values) v /= peak;
}

SaliencyMap sum_normalized(const SaliencyMap& m) {
    double total = 0.0;
    for (double v : m.values) total += v;
    if (total <= 0.0) throw DegenerateError("sum_normalized: map has zero mass");
    SaliencyMap out = m;
    for (double& v : out.values) v /= total;
    return out;
}

void check_map(const SaliencyMap& m, const char* what) {
    if (m.width < 1 || m.height < 1 ||
        m.values.size() != static_cast<std::size_t>(m.width) * m.height) {
        throw DomainError(std::string(what) + ": inconsistent dimensions");
    }
    for (double v : m.values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError(std::string(what) + ": values must be finite and non-negative");
        }
    }
}

} // namespace salypath
