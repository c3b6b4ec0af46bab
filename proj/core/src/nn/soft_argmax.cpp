#include "salypath/nn/soft_argmax.hpp"

#include <algorithm>
#include <cmath>

#include "salypath/errors.hpp"

namespace salypath::nn {

SoftArgMax::SoftArgMax(double beta) : beta_(beta) {
    if (!(beta > 0.0)) throw DomainError("SoftArgMax: beta must be positive");
}

Tensor SoftArgMax::forward(const Tensor& x) {
    if (x.shape.size() != 3) throw ShapeError("SoftArgMax: expected a CHW tensor");
    const int channels = x.dim(0);
    const int height = x.dim(1);
    const int width = x.dim(2);
    const std::size_t plane = static_cast<std::size_t>(height) * width;

    weights_ = Tensor(x.shape);
    coords_ = Tensor({channels, 2});
    for (int c = 0; c < channels; ++c) {
        const double* in_plane = x.values.data() + c * plane;
        double* w_plane = weights_.values.data() + c * plane;

        // Shift by the max before exponentiating: numerically stable and
        // the source of the constant-shift invariance.
        const double m = *std::max_element(in_plane, in_plane + plane);
        double z = 0.0;
        for (std::size_t i = 0; i < plane; ++i) {
            w_plane[i] = std::exp(beta_ * (in_plane[i] - m));
            z += w_plane[i];
        }
        const double inv_z = 1.0 / z;
        double u = 0.0, v = 0.0;
        for (int j = 0; j < height; ++j) {
            const double vj = static_cast<double>(j) / height;
            for (int i = 0; i < width; ++i) {
                const double w = w_plane[static_cast<std::size_t>(j) * width + i] * inv_z;
                w_plane[static_cast<std::size_t>(j) * width + i] = w;
                u += w * (static_cast<double>(i) / width);
                v += w * vj;
            }
        }
        coords_.values[2 * c] = u;
        coords_.values[2 * c + 1] = v;
    }
    return coords_;
}

Tensor SoftArgMax::backward(const Tensor& grad_coords) {
    if (grad_coords.shape != coords_.shape) {
        throw ShapeError("SoftArgMax::backward: gradient shape mismatch");
    }
    const int channels = weights_.dim(0);
    const int height = weights_.dim(1);
    const int width = weights_.dim(2);
    const std::size_t plane = static_cast<std::size_t>(height) * width;

    Tensor grad_in(weights_.shape);
    for (int c = 0; c < channels; ++c) {
        const double* w_plane = weights_.values.data() + c * plane;
        double* g_plane = grad_in.values.data() + c * plane;
        const double gu = grad_coords.values[2 * c];
        const double gv = grad_coords.values[2 * c + 1];
        const double u = coords_.values[2 * c];
        const double v = coords_.values[2 * c + 1];
        for (int j = 0; j < height; ++j) {
            const double vj = static_cast<double>(j) / height;
            for (int i = 0; i < width; ++i) {
                const std::size_t at = static_cast<std::size_t>(j) * width + i;
                const double ui = static_cast<double>(i) / width;
                g_plane[at] = beta_ * w_plane[at] * (gu * (ui - u) + gv * (vj - v));
            }
        }
    }
    return grad_in;
}

} // namespace salypath::nn
