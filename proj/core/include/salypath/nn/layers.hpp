#pragma once

#include "salypath/nn/tensor.hpp"
#include "salypath/rng.hpp"

namespace salypath::nn {

// Explicit forward/backward layers over CHW tensors. Each layer caches
// whatever its backward pass needs from the most recent forward call,
// so one instance serves one forward/backward pair at a time (clone
// the network for parallel inference).

/// 2D convolution, square kernel, stride 1, zero padding chosen so the
/// output keeps the input's spatial size (padding = dilation * k/2).
class Conv2d {
public:
    Conv2d(int in_channels, int out_channels, int kernel_size, int dilation = 1);

    /// He-normal weights, zero biases.
    void init(Rng& rng);

    Tensor forward(const Tensor& x);
    /// Accumulates into weight.grad / bias.grad, returns grad w.r.t. x.
    Tensor backward(const Tensor& grad_out);

    int in_channels() const { return in_channels_; }
    int out_channels() const { return out_channels_; }

    Tensor weight; // [out, in, k, k]
    Tensor bias;   // [out]

private:
    int in_channels_, out_channels_, kernel_size_, dilation_;
    Tensor input_;
};

class ReLU {
public:
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);

private:
    Tensor input_;
};

class Sigmoid {
public:
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);

private:
    Tensor output_;
};

/// 2x2 max pooling, stride 2. Spatial dims must be even. Backward
/// routes each window's gradient to the first (row-major scan) maximal
/// element of that window.
class MaxPool2 {
public:
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);

private:
    std::vector<int> in_shape_;
    std::vector<std::size_t> argmax_;
};

/// 2x nearest-neighbor upsampling.
class Upsample2 {
public:
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);

private:
    std::vector<int> in_shape_;
};

} // namespace salypath::nn
