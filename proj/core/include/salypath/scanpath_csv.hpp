#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "salypath/scanpath.hpp"

namespace salypath {

// Canonical scanpath CSV schema:
//   user,idx,u,v,t
// UTF-8, LF line endings, '.' decimal separator. u and v are
// normalized ERP coordinates; t (seconds) may be left empty. Rows of
// one user must carry strictly increasing idx values; users may
// interleave. Converters from upstream challenge layouts are expected
// to target this schema rather than the library guessing at them.

struct ScanpathParseResult {
    std::vector<Scanpath> scanpaths; // ordered by first appearance
    int clamp_warnings = 0;          // coordinates pulled back into [0,1)
};

/// Parse the canonical CSV. Throws FormatError with a line number for
/// malformed rows, wrong headers, non-monotone idx or decreasing t.
ScanpathParseResult parse_scanpath_csv(std::istream& in);
ScanpathParseResult parse_scanpath_csv(const std::string& text);

/// Serialize scanpaths in the canonical schema. Coordinates round-trip
/// value-identically (17 significant digits).
void write_scanpath_csv(const std::vector<Scanpath>& paths, std::ostream& out);
std::string write_scanpath_csv(const std::vector<Scanpath>& paths);

ScanpathParseResult load_scanpath_csv(const std::string& path);
void save_scanpath_csv(const std::vector<Scanpath>& paths, const std::string& path);

} // namespace salypath
