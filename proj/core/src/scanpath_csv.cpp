#include "salypath/scanpath_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "salypath/errors.hpp"

namespace salypath {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

double parse_double(std::string_view field, int line_no, const char* name) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw FormatError("scanpath csv line " + std::to_string(line_no) + ": bad " +
                          name + " value '" + std::string(field) + "'");
    }
    return value;
}

long parse_index(std::string_view field, int line_no) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw FormatError("scanpath csv line " + std::to_string(line_no) +
                          ": bad idx value '" + std::string(field) + "'");
    }
    return value;
}

double clamp_unit(double v, int* warnings) {
    if (v < 0.0) {
        ++*warnings;
        return 0.0;
    }
    if (v >= 1.0) {
        ++*warnings;
        return std::nextafter(1.0, 0.0);
    }
    return v;
}

void format_double(std::string& out, double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, static_cast<std::size_t>(n));
}

} // namespace

ScanpathParseResult parse_scanpath_csv(std::istream& in) {
    ScanpathParseResult result;
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) {
        throw FormatError("scanpath csv: empty input, header line expected");
    }
    ++line_no;
    if (trim(line) != "user,idx,u,v,t") {
        throw FormatError("scanpath csv line 1: expected header 'user,idx,u,v,t'");
    }

    std::map<std::string, std::size_t> path_of_user;
    std::map<std::string, long> last_idx;

    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = trim(line);
        if (trimmed.empty()) continue;

        const auto fields = split_fields(trimmed);
        if (fields.size() != 5) {
            throw FormatError("scanpath csv line " + std::to_string(line_no) +
                              ": expected 5 fields, got " + std::to_string(fields.size()));
        }
        const std::string user(fields[0]);
        if (user.empty()) {
            throw FormatError("scanpath csv line " + std::to_string(line_no) + ": empty user id");
        }
        const long idx = parse_index(fields[1], line_no);

        Fixation fix;
        fix.coord.u = clamp_unit(parse_double(fields[2], line_no, "u"), &result.clamp_warnings);
        fix.coord.v = clamp_unit(parse_double(fields[3], line_no, "v"), &result.clamp_warnings);
        if (!fields[4].empty()) {
            const double t = parse_double(fields[4], line_no, "t");
            if (t < 0.0) {
                throw FormatError("scanpath csv line " + std::to_string(line_no) +
                                  ": negative timestamp");
            }
            fix.t = t;
        }

        auto it = path_of_user.find(user);
        if (it == path_of_user.end()) {
            it = path_of_user.emplace(user, result.scanpaths.size()).first;
            result.scanpaths.push_back(Scanpath{user, {}});
        } else {
            if (idx <= last_idx[user]) {
                throw FormatError("scanpath csv line " + std::to_string(line_no) +
                                  ": non-monotone idx for user '" + user + "'");
            }
            const auto& prev = result.scanpaths[it->second].fixations.back();
            if (prev.t && fix.t && *fix.t < *prev.t) {
                throw FormatError("scanpath csv line " + std::to_string(line_no) +
                                  ": decreasing timestamp for user '" + user + "'");
            }
        }
        last_idx[user] = idx;
        result.scanpaths[it->second].fixations.push_back(fix);
    }
    return result;
}

ScanpathParseResult parse_scanpath_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_scanpath_csv(in);
}

void write_scanpath_csv(const std::vector<Scanpath>& paths, std::ostream& out) {
    std::string buf = "user,idx,u,v,t\n";
    for (const auto& sp : paths) {
        for (std::size_t i = 0; i < sp.fixations.size(); ++i) {
            const auto& f = sp.fixations[i];
            buf += sp.user_id;
            buf += ',';
            buf += std::to_string(i);
            buf += ',';
            format_double(buf, f.coord.u);
            buf += ',';
            format_double(buf, f.coord.v);
            buf += ',';
            if (f.t) format_double(buf, *f.t);
            buf += '\n';
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::string write_scanpath_csv(const std::vector<Scanpath>& paths) {
    std::ostringstream out;
    write_scanpath_csv(paths, out);
    return out.str();
}

ScanpathParseResult load_scanpath_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("load_scanpath_csv: cannot open " + path);
    return parse_scanpath_csv(in);
}

void save_scanpath_csv(const std::vector<Scanpath>& paths, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("save_scanpath_csv: cannot open " + path);
    write_scanpath_csv(paths, out);
    if (!out) throw FormatError("save_scanpath_csv: write failed for " + path);
}

} // namespace salypath
