#pragma once

#include "salypath/nn/tensor.hpp"

namespace salypath::nn {

/// Differentiable argmax surrogate. For each channel of a [C,h,w]
/// tensor, a temperature-beta softmax over all h*w cells weights the
/// normalized cell coordinates (i/w, j/h), i in 0..w-1, j in 0..h-1.
/// Outputs land strictly inside [0,1)^2 and gain sub-pixel precision
/// as the map sharpens; adding a constant to a channel changes nothing.
class SoftArgMax {
public:
    explicit SoftArgMax(double beta);

    /// x: [C,h,w] -> coords [C,2] as (u, v) rows.
    Tensor forward(const Tensor& x);
    /// grad_coords: [C,2] -> grad w.r.t. x.
    Tensor backward(const Tensor& grad_coords);

    double beta() const { return beta_; }

private:
    double beta_;
    Tensor weights_; // cached softmax, [C,h,w]
    Tensor coords_;  // cached output, [C,2]
};

} // namespace salypath::nn
