#include "salypath/nn/tensor.hpp"

#include <algorithm>

#include "salypath/errors.hpp"

namespace salypath::nn {

std::size_t shape_size(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int d : shape) {
        if (d < 1) throw ShapeError("Tensor: dimensions must be >= 1");
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

Tensor::Tensor(std::vector<int> s, bool req)
    : shape(std::move(s)), values(shape_size(shape), 0.0), requires_grad(req) {
    if (requires_grad) grad.assign(values.size(), 0.0);
}

void Tensor::require_grad() {
    requires_grad = true;
    grad.assign(values.size(), 0.0);
}

void Tensor::zero_grad() {
    if (requires_grad) grad.assign(values.size(), 0.0);
}

Tensor Tensor::from(std::vector<int> s, std::vector<double> v) {
    Tensor t;
    t.shape = std::move(s);
    if (shape_size(t.shape) != v.size()) {
        throw ShapeError("Tensor::from: value count does not match shape");
    }
    t.values = std::move(v);
    return t;
}

bool same_shape(const Tensor& a, const Tensor& b) {
    return a.shape == b.shape;
}

} // namespace salypath::nn
