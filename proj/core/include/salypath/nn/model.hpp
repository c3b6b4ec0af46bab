#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "salypath/nn/layers.hpp"
#include "salypath/nn/soft_argmax.hpp"
#include "salypath/saliency_map.hpp"
#include "salypath/scanpath.hpp"

namespace salypath::nn {

/// Toy-scale configuration of the saliency+scanpath network. Spatial
/// dims must be divisible by 16 (four 2x2 poolings).
struct ModelConfig {
    int width = 64;
    int height = 32;
    std::array<int, 4> widths{8, 16, 32, 64}; // encoder block channels
    int aux_depth = 4;                        // convolutions in the aux head
    int aux_width = 64;
    int n_fixations = 100;
    double beta = 25.0; // soft-argmax temperature

    void validate() const;
};

enum class ParamGroup { Encoder, Attention, Decoder, Aux };

struct ParamRef {
    std::string name;
    ParamGroup group;
    Tensor* tensor;
};

/// Bottleneck refinement: a small dilated-convolution stack predicts a
/// single-channel sigmoid heatmap A from X, and the features become
///     X' = gamma * X * A + X
/// with gamma learnable (initialized to 0, so refinement starts as the
/// identity) and the product taken elementwise, A broadcast over
/// channels.
class AttentionRefine {
public:
    explicit AttentionRefine(int channels);

    void init(Rng& rng);
    Tensor forward(const Tensor& x);
    /// Accumulates parameter grads (incl. gamma), returns grad w.r.t. x.
    Tensor backward(const Tensor& grad_out);

    const Tensor& heatmap() const { return heatmap_; }

    Conv2d conv1, conv2, conv3;
    Tensor gamma; // [1]

private:
    ReLU act1_, act2_;
    Sigmoid sig_;
    Tensor input_;
    Tensor heatmap_; // A, [1,h,w]
};

/// Encoder-decoder saliency network with an auxiliary scanpath head.
/// Four conv blocks with 2x2 pooling encode, the attention module
/// refines the bottleneck, four blocks with 2x upsampling decode to a
/// single-channel sigmoid map, and a convolutional head plus
/// SoftArgMax turns the refined bottleneck into fixation coordinates.
///
/// Layers cache forward activations for the explicit backward passes:
/// an instance is single-threaded; clone the net to run inference in
/// parallel.
class SalyPathNet {
public:
    explicit SalyPathNet(const ModelConfig& cfg, std::uint64_t seed = 0);

    const ModelConfig& config() const { return cfg_; }

    /// Encoder + attention refinement; returns the refined bottleneck X'.
    Tensor encode(const Tensor& image);
    /// Decoder: refined bottleneck -> saliency map [1,H,W] in (0,1).
    Tensor decode(const Tensor& refined);
    /// Aux head: refined bottleneck -> fixation coords [n_fixations,2].
    Tensor predict_coords(const Tensor& refined);

    struct Output {
        Tensor saliency; // [1,H,W]
        Tensor coords;   // [n_fixations,2]
    };
    Output forward(const Tensor& image);

    /// Backward passes (run the matching forward first).
    Tensor decoder_backward(const Tensor& grad_saliency); // -> grad at X'
    Tensor aux_backward(const Tensor& grad_coords);       // -> grad at X'
    void bottleneck_backward(const Tensor& grad_refined); // attention + encoder

    void zero_grad();
    std::vector<ParamRef> parameters();
    std::vector<std::pair<std::string, const Tensor*>> named_parameters() const;

    bool frozen(ParamGroup g) const { return frozen_[index(g)]; }
    void set_frozen(ParamGroup g, bool f) { frozen_[index(g)] = f; }

    SaliencyMap saliency_to_map(const Tensor& saliency) const;
    Scanpath coords_to_scanpath(const Tensor& coords) const;

private:
    static std::size_t index(ParamGroup g) { return static_cast<std::size_t>(g); }

    ModelConfig cfg_;
    std::vector<Conv2d> enc_convs_; // 8: two per block
    std::vector<ReLU> enc_acts_;
    std::vector<MaxPool2> pools_;   // 4
    AttentionRefine attention_;
    std::vector<Upsample2> ups_;    // 4
    std::vector<Conv2d> dec_convs_; // 8
    std::vector<ReLU> dec_acts_;
    Conv2d out_conv_;               // -> 1 channel
    Sigmoid out_act_;
    std::vector<Conv2d> aux_convs_; // aux_depth
    std::vector<ReLU> aux_acts_;
    SoftArgMax soft_argmax_;
    std::array<bool, 4> frozen_{false, false, false, false};
};

} // namespace salypath::nn
