#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "salypath/saliency_map.hpp"

namespace salypath {

// SAL1 raster layout:
//   bytes 0..3   magic "SAL1"
//   bytes 4..7   width,  uint32 little-endian
//   bytes 8..11  height, uint32 little-endian
//   then width*height IEEE-754 binary32 little-endian values,
//   row-major, row 0 = top of the raster (v = 0).

/// Serialize a map to SAL1 bytes. Values are rounded to binary32.
std::vector<std::uint8_t> write_raster(const SaliencyMap& map);

/// Parse SAL1 bytes. Throws FormatError for bad magic, truncated
/// payloads (the message names expected and actual byte counts) and
/// non-finite values; DomainError for negative values or zero dims.
SaliencyMap read_raster(const std::vector<std::uint8_t>& bytes);

SaliencyMap load_raster(const std::string& path);
void save_raster(const SaliencyMap& map, const std::string& path);

/// Round every value to the nearest binary32. Composed CLI runs stay
/// bit-reproducible because in-memory intermediates then match their
/// serialized form exactly.
void quantize_to_f32(SaliencyMap& map);

/// 16-bit binary PGM export (P5, maxval 65535, big-endian samples).
/// Lossy: the map is max-normalized onto [0, 65535].
void write_pgm16(const SaliencyMap& map, std::ostream& out);
void save_pgm16(const SaliencyMap& map, const std::string& path);

} // namespace salypath
