#include "salypath/nn/model.hpp"

#include <cmath>

#include "salypath/errors.hpp"

namespace salypath::nn {

void ModelConfig::validate() const {
    if (width < 16 || height < 16 || width % 16 != 0 || height % 16 != 0) {
        throw DomainError("ModelConfig: width and height must be positive multiples of 16");
    }
    for (int w : widths) {
        if (w < 1) throw DomainError("ModelConfig: channel widths must be >= 1");
    }
    if (aux_depth < 2) throw DomainError("ModelConfig: aux head needs at least 2 layers");
    if (aux_width < 1) throw DomainError("ModelConfig: aux_width must be >= 1");
    if (n_fixations < 1) throw DomainError("ModelConfig: n_fixations must be >= 1");
    if (!(beta > 0.0)) throw DomainError("ModelConfig: beta must be positive");
}

AttentionRefine::AttentionRefine(int channels)
    : conv1(channels, channels, 3, 4),
      conv2(channels, channels, 3, 4),
      conv3(channels, 1, 1),
      gamma({1}, true) {}

void AttentionRefine::init(Rng& rng) {
    conv1.init(rng);
    conv2.init(rng);
    conv3.init(rng);
    gamma.values[0] = 0.0;
}

Tensor AttentionRefine::forward(const Tensor& x) {
    input_ = x;
    heatmap_ = sig_.forward(conv3.forward(act2_.forward(conv2.forward(act1_.forward(conv1.forward(x))))));

    const int channels = x.dim(0);
    const std::size_t plane = static_cast<std::size_t>(x.dim(1)) * x.dim(2);
    const double g = gamma.values[0];
    Tensor out = x;
    for (int c = 0; c < channels; ++c) {
        double* o = out.values.data() + c * plane;
        const double* in = x.values.data() + c * plane;
        const double* a = heatmap_.values.data();
        for (std::size_t i = 0; i < plane; ++i) o[i] = g * in[i] * a[i] + in[i];
    }
    return out;
}

Tensor AttentionRefine::backward(const Tensor& grad_out) {
    const int channels = input_.dim(0);
    const std::size_t plane = static_cast<std::size_t>(input_.dim(1)) * input_.dim(2);
    const double g = gamma.values[0];

    // X' = g * X * A + X with A broadcast across channels.
    Tensor grad_a({1, input_.dim(1), input_.dim(2)});
    Tensor grad_x = grad_out;
    double grad_gamma = 0.0;
    for (int c = 0; c < channels; ++c) {
        const double* go = grad_out.values.data() + c * plane;
        const double* in = input_.values.data() + c * plane;
        double* gx = grad_x.values.data() + c * plane;
        const double* a = heatmap_.values.data();
        double* ga = grad_a.values.data();
        for (std::size_t i = 0; i < plane; ++i) {
            grad_gamma += go[i] * in[i] * a[i];
            ga[i] += g * in[i] * go[i];
            gx[i] = go[i] * (1.0 + g * a[i]);
        }
    }
    gamma.grad[0] += grad_gamma;

    // The attention stack also consumes X; its input gradient adds on.
    Tensor grad_stack =
        conv1.backward(act1_.backward(conv2.backward(act2_.backward(conv3.backward(sig_.backward(grad_a))))));
    for (std::size_t i = 0; i < grad_x.size(); ++i) grad_x.values[i] += grad_stack.values[i];
    return grad_x;
}

namespace {

std::vector<Conv2d> make_encoder(const ModelConfig& cfg) {
    std::vector<Conv2d> convs;
    convs.reserve(8);
    int in_ch = 3;
    for (int b = 0; b < 4; ++b) {
        const int out_ch = cfg.widths[b];
        convs.emplace_back(in_ch, out_ch, 3);
        convs.emplace_back(out_ch, out_ch, 3);
        in_ch = out_ch;
    }
    return convs;
}

std::vector<Conv2d> make_decoder(const ModelConfig& cfg) {
    std::vector<Conv2d> convs;
    convs.reserve(8);
    const std::array<int, 4> outs{cfg.widths[2], cfg.widths[1], cfg.widths[0], cfg.widths[0]};
    int in_ch = cfg.widths[3];
    for (int b = 0; b < 4; ++b) {
        convs.emplace_back(in_ch, outs[b], 3);
        convs.emplace_back(outs[b], outs[b], 3);
        in_ch = outs[b];
    }
    return convs;
}

std::vector<Conv2d> make_aux(const ModelConfig& cfg) {
    std::vector<Conv2d> convs;
    convs.reserve(cfg.aux_depth);
    int in_ch = cfg.widths[3];
    for (int i = 0; i < cfg.aux_depth - 1; ++i) {
        convs.emplace_back(in_ch, cfg.aux_width, 3);
        in_ch = cfg.aux_width;
    }
    convs.emplace_back(in_ch, cfg.n_fixations, 3);
    return convs;
}

} // namespace

SalyPathNet::SalyPathNet(const ModelConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      enc_convs_(make_encoder(cfg)),
      enc_acts_(8),
      pools_(4),
      attention_(cfg.widths[3]),
      ups_(4),
      dec_convs_(make_decoder(cfg)),
      dec_acts_(8),
      out_conv_(cfg.widths[0], 1, 3),
      aux_convs_(make_aux(cfg)),
      aux_acts_(cfg.aux_depth),
      soft_argmax_(cfg.beta) {
    cfg_.validate();
    Rng rng(seed);
    for (auto& conv : enc_convs_) conv.init(rng);
    attention_.init(rng);
    for (auto& conv : dec_convs_) conv.init(rng);
    out_conv_.init(rng);
    for (auto& conv : aux_convs_) conv.init(rng);
}

Tensor SalyPathNet::encode(const Tensor& image) {
    if (image.shape != std::vector<int>{3, cfg_.height, cfg_.width}) {
        throw ShapeError("SalyPathNet::encode: image must be [3,H,W] matching the config");
    }
    Tensor x = image;
    for (int b = 0; b < 4; ++b) {
        x = enc_acts_[2 * b].forward(enc_convs_[2 * b].forward(x));
        x = enc_acts_[2 * b + 1].forward(enc_convs_[2 * b + 1].forward(x));
        x = pools_[b].forward(x);
    }
    return attention_.forward(x);
}

Tensor SalyPathNet::decode(const Tensor& refined) {
    Tensor x = refined;
    for (int b = 0; b < 4; ++b) {
        x = ups_[b].forward(x);
        x = dec_acts_[2 * b].forward(dec_convs_[2 * b].forward(x));
        x = dec_acts_[2 * b + 1].forward(dec_convs_[2 * b + 1].forward(x));
    }
    return out_act_.forward(out_conv_.forward(x));
}

Tensor SalyPathNet::predict_coords(const Tensor& refined) {
    Tensor x = refined;
    for (int i = 0; i < cfg_.aux_depth; ++i) {
        x = aux_acts_[i].forward(aux_convs_[i].forward(x));
    }
    return soft_argmax_.forward(x);
}

SalyPathNet::Output SalyPathNet::forward(const Tensor& image) {
    const Tensor refined = encode(image);
    return Output{decode(refined), predict_coords(refined)};
}

Tensor SalyPathNet::decoder_backward(const Tensor& grad_saliency) {
    Tensor g = out_conv_.backward(out_act_.backward(grad_saliency));
    for (int b = 3; b >= 0; --b) {
        g = dec_convs_[2 * b + 1].backward(dec_acts_[2 * b + 1].backward(g));
        g = dec_convs_[2 * b].backward(dec_acts_[2 * b].backward(g));
        g = ups_[b].backward(g);
    }
    return g;
}

Tensor SalyPathNet::aux_backward(const Tensor& grad_coords) {
    Tensor g = soft_argmax_.backward(grad_coords);
    for (int i = cfg_.aux_depth - 1; i >= 0; --i) {
        g = aux_convs_[i].backward(aux_acts_[i].backward(g));
    }
    return g;
}

void SalyPathNet::bottleneck_backward(const Tensor& grad_refined) {
    Tensor g = attention_.backward(grad_refined);
    for (int b = 3; b >= 0; --b) {
        g = pools_[b].backward(g);
        g = enc_convs_[2 * b + 1].backward(enc_acts_[2 * b + 1].backward(g));
        g = enc_convs_[2 * b].backward(enc_acts_[2 * b].backward(g));
    }
}

void SalyPathNet::zero_grad() {
    for (const ParamRef& p : parameters()) p.tensor->zero_grad();
}

std::vector<ParamRef> SalyPathNet::parameters() {
    std::vector<ParamRef> out;
    auto add_conv = [&out](const std::string& name, ParamGroup g, Conv2d& c) {
        out.push_back({name + ".w", g, &c.weight});
        out.push_back({name + ".b", g, &c.bias});
    };
    for (std::size_t i = 0; i < enc_convs_.size(); ++i) {
        add_conv("enc.conv" + std::to_string(i), ParamGroup::Encoder, enc_convs_[i]);
    }
    add_conv("att.conv0", ParamGroup::Attention, attention_.conv1);
    add_conv("att.conv1", ParamGroup::Attention, attention_.conv2);
    add_conv("att.conv2", ParamGroup::Attention, attention_.conv3);
    out.push_back({"att.gamma", ParamGroup::Attention, &attention_.gamma});
    for (std::size_t i = 0; i < dec_convs_.size(); ++i) {
        add_conv("dec.conv" + std::to_string(i), ParamGroup::Decoder, dec_convs_[i]);
    }
    add_conv("dec.out", ParamGroup::Decoder, out_conv_);
    for (std::size_t i = 0; i < aux_convs_.size(); ++i) {
        add_conv("aux.conv" + std::to_string(i), ParamGroup::Aux, aux_convs_[i]);
    }
    return out;
}

std::vector<std::pair<std::string, const Tensor*>> SalyPathNet::named_parameters() const {
    auto* self = const_cast<SalyPathNet*>(this);
    std::vector<std::pair<std::string, const Tensor*>> out;
    for (const ParamRef& p : self->parameters()) out.emplace_back(p.name, p.tensor);
    return out;
}

SaliencyMap SalyPathNet::saliency_to_map(const Tensor& saliency) const {
    if (saliency.shape != std::vector<int>{1, cfg_.height, cfg_.width}) {
        throw ShapeError("saliency_to_map: unexpected tensor shape");
    }
    SaliencyMap map(cfg_.width, cfg_.height);
    map.values = saliency.values;
    return map;
}

Scanpath SalyPathNet::coords_to_scanpath(const Tensor& coords) const {
    if (coords.shape.size() != 2 || coords.dim(1) != 2) {
        throw ShapeError("coords_to_scanpath: expected an [N,2] tensor");
    }
    Scanpath sp;
    sp.user_id = "pred";
    sp.fixations.reserve(static_cast<std::size_t>(coords.dim(0)));
    for (int i = 0; i < coords.dim(0); ++i) {
        Fixation f;
        f.coord.u = coords.values[2 * i];
        f.coord.v = coords.values[2 * i + 1];
        sp.fixations.push_back(f);
    }
    return sp;
}

} // namespace salypath::nn
