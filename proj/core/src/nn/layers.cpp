#include "salypath/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "salypath/errors.hpp"

namespace salypath::nn {

namespace {

void require_chw(const Tensor& x, const char* what) {
    if (x.shape.size() != 3) throw ShapeError(std::string(what) + ": expected a CHW tensor");
}

} // namespace

Conv2d::Conv2d(int in_channels, int out_channels, int kernel_size, int dilation)
    : weight({out_channels, in_channels, kernel_size, kernel_size}, true),
      bias({out_channels}, true),
      in_channels_(in_channels),
      out_channels_(out_channels),
      kernel_size_(kernel_size),
      dilation_(dilation) {
    if (kernel_size % 2 == 0) throw ShapeError("Conv2d: kernel size must be odd");
    if (dilation < 1) throw ShapeError("Conv2d: dilation must be >= 1");
}

void Conv2d::init(Rng& rng) {
    const double fan_in = static_cast<double>(in_channels_) * kernel_size_ * kernel_size_;
    const double stddev = std::sqrt(2.0 / fan_in);
    for (double& w : weight.values) w = rng.normal(0.0, stddev);
    // Nonzero biases keep pre-activations off the exact ReLU kink,
    // where finite differences and the subgradient disagree.
    const double bound = 1.0 / std::sqrt(fan_in);
    for (double& b : bias.values) b = rng.uniform(-bound, bound);
}

Tensor Conv2d::forward(const Tensor& x) {
    require_chw(x, "Conv2d");
    if (x.dim(0) != in_channels_) throw ShapeError("Conv2d: channel count mismatch");
    input_ = x;

    const int height = x.dim(1);
    const int width = x.dim(2);
    const int half = kernel_size_ / 2;
    const std::size_t plane = static_cast<std::size_t>(height) * width;

    Tensor out({out_channels_, height, width});
    for (int oc = 0; oc < out_channels_; ++oc) {
        std::fill_n(out.values.data() + oc * plane, plane, bias.values[oc]);
    }
    for (int oc = 0; oc < out_channels_; ++oc) {
        double* out_plane = out.values.data() + oc * plane;
        for (int ic = 0; ic < in_channels_; ++ic) {
            const double* in_plane = x.values.data() + ic * plane;
            const double* wbase =
                weight.values.data() +
                (static_cast<std::size_t>(oc) * in_channels_ + ic) * kernel_size_ * kernel_size_;
            for (int ky = 0; ky < kernel_size_; ++ky) {
                const int dy = (ky - half) * dilation_;
                const int y0 = std::max(0, -dy);
                const int y1 = std::min(height, height - dy);
                for (int kx = 0; kx < kernel_size_; ++kx) {
                    const double w = wbase[ky * kernel_size_ + kx];
                    if (w == 0.0) continue;
                    const int dx = (kx - half) * dilation_;
                    const int x0 = std::max(0, -dx);
                    const int x1 = std::min(width, width - dx);
                    for (int y = y0; y < y1; ++y) {
                        const double* irow = in_plane + static_cast<std::size_t>(y + dy) * width + dx;
                        double* orow = out_plane + static_cast<std::size_t>(y) * width;
                        for (int xi = x0; xi < x1; ++xi) orow[xi] += w * irow[xi];
                    }
                }
            }
        }
    }
    return out;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
    require_chw(grad_out, "Conv2d::backward");
    const int height = input_.dim(1);
    const int width = input_.dim(2);
    const int half = kernel_size_ / 2;
    const std::size_t plane = static_cast<std::size_t>(height) * width;

    Tensor grad_in({in_channels_, height, width});
    for (int oc = 0; oc < out_channels_; ++oc) {
        const double* gout_plane = grad_out.values.data() + oc * plane;
        double gb = 0.0;
        for (std::size_t i = 0; i < plane; ++i) gb += gout_plane[i];
        bias.grad[oc] += gb;

        for (int ic = 0; ic < in_channels_; ++ic) {
            const double* in_plane = input_.values.data() + ic * plane;
            double* gin_plane = grad_in.values.data() + ic * plane;
            const std::size_t wbase =
                (static_cast<std::size_t>(oc) * in_channels_ + ic) * kernel_size_ * kernel_size_;
            for (int ky = 0; ky < kernel_size_; ++ky) {
                const int dy = (ky - half) * dilation_;
                const int y0 = std::max(0, -dy);
                const int y1 = std::min(height, height - dy);
                for (int kx = 0; kx < kernel_size_; ++kx) {
                    const int dx = (kx - half) * dilation_;
                    const int x0 = std::max(0, -dx);
                    const int x1 = std::min(width, width - dx);
                    const double w = weight.values[wbase + ky * kernel_size_ + kx];
                    double gw = 0.0;
                    for (int y = y0; y < y1; ++y) {
                        const double* irow = in_plane + static_cast<std::size_t>(y + dy) * width + dx;
                        double* girow = gin_plane + static_cast<std::size_t>(y + dy) * width + dx;
                        const double* gorow = gout_plane + static_cast<std::size_t>(y) * width;
                        for (int xi = x0; xi < x1; ++xi) {
                            gw += gorow[xi] * irow[xi];
                            girow[xi] += w * gorow[xi];
                        }
                    }
                    weight.grad[wbase + ky * kernel_size_ + kx] += gw;
                }
            }
        }
    }
    return grad_in;
}

Tensor ReLU::forward(const Tensor& x) {
    input_ = x;
    Tensor out = x;
    for (double& v : out.values) v = v > 0.0 ? v : 0.0;
    return out;
}

Tensor ReLU::backward(const Tensor& grad_out) {
    Tensor grad_in = grad_out;
    for (std::size_t i = 0; i < grad_in.size(); ++i) {
        if (input_.values[i] <= 0.0) grad_in.values[i] = 0.0;
    }
    return grad_in;
}

Tensor Sigmoid::forward(const Tensor& x) {
    Tensor out = x;
    for (double& v : out.values) v = 1.0 / (1.0 + std::exp(-v));
    output_ = out;
    return out;
}

Tensor Sigmoid::backward(const Tensor& grad_out) {
    Tensor grad_in = grad_out;
    for (std::size_t i = 0; i < grad_in.size(); ++i) {
        const double s = output_.values[i];
        grad_in.values[i] *= s * (1.0 - s);
    }
    return grad_in;
}

Tensor MaxPool2::forward(const Tensor& x) {
    require_chw(x, "MaxPool2");
    const int channels = x.dim(0);
    const int height = x.dim(1);
    const int width = x.dim(2);
    if (height % 2 != 0 || width % 2 != 0) {
        throw ShapeError("MaxPool2: spatial dimensions must be even");
    }
    in_shape_ = x.shape;
    const int oh = height / 2;
    const int ow = width / 2;
    Tensor out({channels, oh, ow});
    argmax_.assign(out.size(), 0);

    for (int c = 0; c < channels; ++c) {
        const double* in_plane = x.values.data() + static_cast<std::size_t>(c) * height * width;
        for (int y = 0; y < oh; ++y) {
            for (int xo = 0; xo < ow; ++xo) {
                double best = -1.0;
                std::size_t best_i = 0;
                bool first = true;
                for (int dy = 0; dy < 2; ++dy) {
                    for (int dx = 0; dx < 2; ++dx) {
                        const std::size_t i =
                            static_cast<std::size_t>(2 * y + dy) * width + (2 * xo + dx);
                        if (first || in_plane[i] > best) {
                            best = in_plane[i];
                            best_i = i;
                            first = false;
                        }
                    }
                }
                const std::size_t o = static_cast<std::size_t>(c) * oh * ow +
                                      static_cast<std::size_t>(y) * ow + xo;
                out.values[o] = best;
                argmax_[o] = static_cast<std::size_t>(c) * height * width + best_i;
            }
        }
    }
    return out;
}

Tensor MaxPool2::backward(const Tensor& grad_out) {
    Tensor grad_in(in_shape_);
    for (std::size_t o = 0; o < grad_out.size(); ++o) {
        grad_in.values[argmax_[o]] += grad_out.values[o];
    }
    return grad_in;
}

Tensor Upsample2::forward(const Tensor& x) {
    require_chw(x, "Upsample2");
    in_shape_ = x.shape;
    const int channels = x.dim(0);
    const int height = x.dim(1);
    const int width = x.dim(2);
    Tensor out({channels, height * 2, width * 2});
    for (int c = 0; c < channels; ++c) {
        const double* in_plane = x.values.data() + static_cast<std::size_t>(c) * height * width;
        double* out_plane = out.values.data() + static_cast<std::size_t>(c) * height * width * 4;
        for (int y = 0; y < height; ++y) {
            for (int xi = 0; xi < width; ++xi) {
                const double v = in_plane[static_cast<std::size_t>(y) * width + xi];
                const std::size_t base = static_cast<std::size_t>(2 * y) * (2 * width) + 2 * xi;
                out_plane[base] = v;
                out_plane[base + 1] = v;
                out_plane[base + 2 * width] = v;
                out_plane[base + 2 * width + 1] = v;
            }
        }
    }
    return out;
}

Tensor Upsample2::backward(const Tensor& grad_out) {
    Tensor grad_in(in_shape_);
    const int channels = in_shape_[0];
    const int height = in_shape_[1];
    const int width = in_shape_[2];
    for (int c = 0; c < channels; ++c) {
        const double* gout_plane =
            grad_out.values.data() + static_cast<std::size_t>(c) * height * width * 4;
        double* gin_plane = grad_in.values.data() + static_cast<std::size_t>(c) * height * width;
        for (int y = 0; y < height; ++y) {
            for (int xi = 0; xi < width; ++xi) {
                const std::size_t base = static_cast<std::size_t>(2 * y) * (2 * width) + 2 * xi;
                gin_plane[static_cast<std::size_t>(y) * width + xi] =
                    gout_plane[base] + gout_plane[base + 1] + gout_plane[base + 2 * width] +
                    gout_plane[base + 2 * width + 1];
            }
        }
    }
    return grad_in;
}

} // namespace salypath::nn
