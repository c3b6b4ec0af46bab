#include "salypath/raster_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>

#include "salypath/errors.hpp"

namespace salypath {

namespace {

constexpr char kMagic[4] = {'S', 'A', 'L', '1'};

static_assert(std::endian::native == std::endian::little,
              "raster_io assumes a little-endian host");

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
}

} // namespace

std::vector<std::uint8_t> write_raster(const SaliencyMap& map) {
    check_map(map, "write_raster");
    std::vector<std::uint8_t> out;
    out.reserve(12 + map.size() * 4);
    out.insert(out.end(), kMagic, kMagic + 4);
    append_u32(out, static_cast<std::uint32_t>(map.width));
    append_u32(out, static_cast<std::uint32_t>(map.height));
    for (double v : map.values) {
        const float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        append_u32(out, bits);
    }
    return out;
}

SaliencyMap read_raster(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 12) {
        throw FormatError("read_raster: header truncated, need 12 bytes, got " +
                          std::to_string(bytes.size()));
    }
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw FormatError("read_raster: bad magic, expected SAL1");
    }
    const std::uint32_t w = read_u32(bytes.data() + 4);
    const std::uint32_t h = read_u32(bytes.data() + 8);
    if (w == 0 || h == 0) throw FormatError("read_raster: zero dimension");
    const std::size_t expected = 12 + std::size_t(w) * h * 4;
    if (bytes.size() != expected) {
        throw FormatError("read_raster: payload truncated, expected " +
                          std::to_string(expected) + " bytes, got " +
                          std::to_string(bytes.size()));
    }
    SaliencyMap map(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < map.size(); ++i) {
        const std::uint32_t bits = read_u32(bytes.data() + 12 + i * 4);
        float f;
        std::memcpy(&f, &bits, 4);
        if (!std::isfinite(f)) {
            throw FormatError("read_raster: non-finite value at index " + std::to_string(i));
        }
        if (f < 0.0f) {
            throw DomainError("read_raster: negative value at index " + std::to_string(i));
        }
        map.values[i] = static_cast<double>(f);
    }
    return map;
}

SaliencyMap load_raster(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("load_raster: cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return read_raster(bytes);
}

void save_raster(const SaliencyMap& map, const std::string& path) {
    const auto bytes = write_raster(map);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("save_raster: cannot open " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("save_raster: write failed for " + path);
}

void quantize_to_f32(SaliencyMap& map) {
    for (double& v : map.values) v = static_cast<double>(static_cast<float>(v));
}

void write_pgm16(const SaliencyMap& map, std::ostream& out) {
    check_map(map, "write_pgm16");
    const double peak = map_max(map);
    const double scale = peak > 0.0 ? 65535.0 / peak : 0.0;
    out << "P5\n" << map.width << " " << map.height << "\n65535\n";
    for (double v : map.values) {
        const auto q = static_cast<std::uint16_t>(std::lround(v * scale));
        const char hi = static_cast<char>(q >> 8);
        const char lo = static_cast<char>(q & 0xff);
        out.put(hi);
        out.put(lo);
    }
}

void save_pgm16(const SaliencyMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("save_pgm16: cannot open " + path);
    write_pgm16(map, out);
    if (!out) throw FormatError("save_pgm16: write failed for " + path);
}

} // namespace salypath
