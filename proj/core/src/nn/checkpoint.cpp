#include "salypath/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "salypath/errors.hpp"

namespace salypath::nn {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'W', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
    out.write(b, 4);
}

void put_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(bits >> (8 * i));
    out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw FormatError("checkpoint: truncated while reading u32");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

float get_f32(std::istream& in) {
    const std::uint32_t bits = get_u32(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

double get_f64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw FormatError("checkpoint: truncated while reading f64");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

} // namespace

void save_checkpoint(const SalyPathNet& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("save_checkpoint: cannot open " + path);

    const ModelConfig& cfg = net.config();
    out.write(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(cfg.width));
    put_u32(out, static_cast<std::uint32_t>(cfg.height));
    put_u32(out, static_cast<std::uint32_t>(cfg.widths.size()));
    for (int w : cfg.widths) put_u32(out, static_cast<std::uint32_t>(w));
    put_u32(out, static_cast<std::uint32_t>(cfg.aux_depth));
    put_u32(out, static_cast<std::uint32_t>(cfg.aux_width));
    put_u32(out, static_cast<std::uint32_t>(cfg.n_fixations));
    put_f64(out, cfg.beta);

    const auto params = net.named_parameters();
    put_u32(out, static_cast<std::uint32_t>(params.size()));
    for (const auto& [name, tensor] : params) {
        put_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        put_u32(out, static_cast<std::uint32_t>(tensor->size()));
        for (double v : tensor->values) put_f32(out, static_cast<float>(v));
    }
    if (!out) throw FormatError("save_checkpoint: write failed for " + path);
}

SalyPathNet load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("load_checkpoint: cannot open " + path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw FormatError("load_checkpoint: bad magic, expected SPW1");
    }

    ModelConfig cfg;
    cfg.width = static_cast<int>(get_u32(in));
    cfg.height = static_cast<int>(get_u32(in));
    const std::uint32_t n_widths = get_u32(in);
    if (n_widths != cfg.widths.size()) {
        throw FormatError("load_checkpoint: unexpected width count " + std::to_string(n_widths));
    }
    for (auto& w : cfg.widths) w = static_cast<int>(get_u32(in));
    cfg.aux_depth = static_cast<int>(get_u32(in));
    cfg.aux_width = static_cast<int>(get_u32(in));
    cfg.n_fixations = static_cast<int>(get_u32(in));
    cfg.beta = get_f64(in);

    SalyPathNet net(cfg);
    auto params = net.parameters();
    const std::uint32_t group_count = get_u32(in);
    if (group_count != params.size()) {
        throw FormatError("load_checkpoint: parameter group count mismatch");
    }
    for (ParamRef& p : params) {
        const std::uint32_t name_len = get_u32(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        if (!in || name != p.name) {
            throw FormatError("load_checkpoint: expected group '" + p.name + "'");
        }
        const std::uint32_t count = get_u32(in);
        if (count != p.tensor->size()) {
            throw FormatError("load_checkpoint: size mismatch in group '" + p.name + "'");
        }
        for (std::uint32_t i = 0; i < count; ++i) {
            p.tensor->values[i] = static_cast<double>(get_f32(in));
        }
    }
    return net;
}

} // namespace salypath::nn
