#pragma once

#include <cstddef>
#include <vector>

namespace salypath::nn {

std::size_t shape_size(const std::vector<int>& shape);

/// Dense n-dimensional double tensor with an optional gradient slot.
/// Gradients are plain same-shape buffers filled by the explicit
/// backward passes of the layers in layers.hpp.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> values;
    std::vector<double> grad; // empty unless requires_grad
    bool requires_grad = false;

    Tensor() = default;
    explicit Tensor(std::vector<int> s, bool req = false);

    std::size_t size() const { return values.size(); }
    int dim(std::size_t i) const { return shape[i]; }

    /// Allocate (if needed) and zero the gradient slot.
    void require_grad();
    void zero_grad();

    static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }
    static Tensor from(std::vector<int> s, std::vector<double> v);
};

bool same_shape(const Tensor& a, const Tensor& b);

} // namespace salypath::nn
