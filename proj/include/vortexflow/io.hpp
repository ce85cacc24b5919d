// File formats: fixed-precision CSV, atomic writes, the profile cache and
// imported field grids.

#ifndef VORTEXFLOW_IO_HPP
#define VORTEXFLOW_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "vortexflow/errors.hpp"
#include "vortexflow/profile.hpp"
#include "vortexflow/reconstruct.hpp"

namespace vortexflow::io {

/// Round-trip exact decimal form of a double ("%.17g").
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partially written file.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw IoError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path.string());
    return ss.str();
}

/// Accumulates CSV text with a header row; all reals use format_real.
class CsvBuilder {
  public:
    explicit CsvBuilder(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) text_ += ',';
            text_ += header[i];
        }
        text_ += '\n';
    }

    CsvBuilder& row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) text_ += ',';
            text_ += format_real(values[i]);
        }
        text_ += '\n';
        return *this;
    }

    const std::string& str() const { return text_; }

  private:
    std::string text_;
};

namespace detail {

inline std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    for (auto& s : out) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    }
    return out;
}

inline double parse_real(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": cannot parse number '" + s + "'");
    }
}

inline std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace detail

// Profile cache:
//   epsilon,r0,dr,nodes
//   <epsilon>,<r0>,<dr>,<N+1>
//   f
//   <f_0>
//   ...
inline std::string profile_to_csv(const RadialProfile& p) {
    std::string text = "epsilon,r0,dr,nodes\n";
    text += format_real(p.epsilon) + ',' + format_real(p.r0) + ',' + format_real(p.dr) + ',' +
            std::to_string(p.values.size()) + "\nf\n";
    for (double v : p.values) text += format_real(v) + '\n';
    return text;
}

inline RadialProfile profile_from_csv(const std::string& text, const std::string& origin = "profile") {
    const auto lines = detail::lines_of(text);
    if (lines.size() < 3 || lines[0] != "epsilon,r0,dr,nodes" || lines[2] != "f") {
        throw ConfigError(origin + ": not a profile cache file");
    }
    const auto head = detail::split(lines[1], ',');
    if (head.size() != 4) throw ConfigError(origin + ": malformed header values");
    RadialProfile p;
    p.epsilon = detail::parse_real(head[0], origin);
    p.r0 = detail::parse_real(head[1], origin);
    p.dr = detail::parse_real(head[2], origin);
    const double nodes = detail::parse_real(head[3], origin);
    if (!(p.epsilon > 0.0) || !(p.r0 > 0.0) || !(p.dr > 0.0) || nodes < 4 ||
        nodes != static_cast<double>(lines.size() - 3)) {
        throw ConfigError(origin + ": inconsistent header");
    }
    p.values.reserve(lines.size() - 3);
    for (std::size_t i = 3; i < lines.size(); ++i) p.values.push_back(detail::parse_real(lines[i], origin));
    return p;
}

inline void save_profile(const std::filesystem::path& path, const RadialProfile& p) {
    write_atomic(path, profile_to_csv(p));
}

inline RadialProfile load_profile(const std::filesystem::path& path) {
    return profile_from_csv(read_file(path), path.string());
}

/// Complex order parameter on the nodes of `spec` read from CSV with columns
/// x,y,re_u,im_u and an optional h column. Rows list the unmasked nodes in
/// storage order; coordinates must match the grid to within 1e-9.
inline FieldGrid field_from_csv(const std::string& text, const GridSpec& spec, const std::string& origin = "field") {
    spec.validate();
    const auto lines = detail::lines_of(text);
    if (lines.empty()) throw ConfigError(origin + ": empty field file");
    const auto header = detail::split(lines[0], ',');
    const bool with_h = header.size() == 5 && header[4] == "h";
    if (!(header.size() == 4 || with_h) || header[0] != "x" || header[1] != "y" || header[2] != "re_u" ||
        header[3] != "im_u") {
        throw ConfigError(origin + ": expected header x,y,re_u,im_u[,h]");
    }
    FieldGrid g;
    g.spec = spec;
    g.mask = vortexflow::detail::disk_mask(spec);
    g.u.assign(spec.size(), complex{});
    if (with_h) g.h.assign(spec.size(), 0.0);

    std::size_t row = 1;
    for (int jj = 0; jj < spec.ny; ++jj) {
        for (int i = 0; i < spec.nx; ++i) {
            const std::size_t k = spec.index(i, jj);
            if (!g.mask[k]) continue;
            if (row >= lines.size()) throw ConfigError(origin + ": fewer rows than grid nodes inside the disk");
            const auto cols = detail::split(lines[row], ',');
            const std::string where = origin + " row " + std::to_string(row);
            if (cols.size() != header.size()) throw ConfigError(where + ": wrong column count");
            const double x = detail::parse_real(cols[0], where);
            const double y = detail::parse_real(cols[1], where);
            if (std::abs(x - spec.x(i)) > 1e-9 || std::abs(y - spec.y(jj)) > 1e-9) {
                throw ConfigError(where + ": coordinates do not match the grid");
            }
            g.u[k] = {detail::parse_real(cols[2], where), detail::parse_real(cols[3], where)};
            if (with_h) g.h[k] = detail::parse_real(cols[4], where);
            ++row;
        }
    }
    if (row != lines.size()) throw ConfigError(origin + ": more rows than grid nodes inside the disk");
    return g;
}

inline std::string field_to_csv(const FieldGrid& g) {
    const bool with_h = g.has_h();
    CsvBuilder csv(with_h ? std::vector<std::string>{"x", "y", "re_u", "im_u", "h"}
                          : std::vector<std::string>{"x", "y", "re_u", "im_u"});
    for (int jj = 0; jj < g.spec.ny; ++jj) {
        for (int i = 0; i < g.spec.nx; ++i) {
            const std::size_t k = g.spec.index(i, jj);
            if (!g.mask[k]) continue;
            std::vector<double> row{g.spec.x(i), g.spec.y(jj), g.u[k].real(), g.u[k].imag()};
            if (with_h) row.push_back(g.h[k]);
            csv.row(row);
        }
    }
    return csv.str();
}

}  // namespace vortexflow::io

#endif
