#pragma once

#include <bit>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/samplers.hpp"
#include "crofton/vec.hpp"

namespace crofton {

// Point positions with optional per-point normals (all or none) and the
// free-form header comments, one of which may be "seed N".
struct CloudData {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::vector<std::string> comments;

  bool has_normals() const { return !normals.empty(); }

  std::optional<std::uint64_t> seed() const {
    for (const auto& c : comments) {
      if (c.rfind("seed ", 0) == 0) {
        std::uint64_t s = 0;
        const auto r = std::from_chars(c.data() + 5, c.data() + c.size(), s);
        if (r.ec == std::errc()) return s;
      }
    }
    return std::nullopt;
  }
};

enum class CloudFormat { Xyz, PlyAscii, PlyBinary };

// Normals are kept only when every point has one.
inline CloudData to_cloud_data(const std::vector<CloudPoint>& cloud, std::vector<std::string> comments = {}) {
  CloudData d;
  d.comments = std::move(comments);
  d.points.reserve(cloud.size());
  bool all_normals = !cloud.empty();
  for (const auto& p : cloud) {
    d.points.push_back(p.position);
    all_normals = all_normals && p.normal.has_value();
  }
  if (all_normals) {
    d.normals.reserve(cloud.size());
    for (const auto& p : cloud) d.normals.push_back(p.normal->vec());
  }
  return d;
}

namespace detail {

inline void put_double(std::string& out, double x) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  out.append(buf, static_cast<std::size_t>(n));
}

inline void put_row(std::string& out, const Vec3& p, const Vec3* n) {
  put_double(out, p.x);
  out += ' ';
  put_double(out, p.y);
  out += ' ';
  put_double(out, p.z);
  if (n) {
    for (double c : {n->x, n->y, n->z}) {
      out += ' ';
      put_double(out, c);
    }
  }
  out += '\n';
}

inline void check_normals(const CloudData& d) {
  if (d.has_normals() && d.normals.size() != d.points.size()) {
    throw InvalidArgument("cloud: normal count does not match point count");
  }
}

// Whitespace-separated doubles of one line; false on any malformed token.
inline bool parse_doubles(std::string_view line, std::vector<double>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    double v = 0.0;
    const auto r = std::from_chars(line.data() + i, line.data() + j, v);
    if (r.ec != std::errc() || r.ptr != line.data() + j) return false;
    out.push_back(v);
    i = j;
  }
  return true;
}

inline std::uint64_t to_le(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) {
    return x;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((x >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
}

inline void put_binary(std::string& out, double x) {
  const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(x));
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.append(buf, 8);
}

}  // namespace detail

// One "x y z [nx ny nz]" line per point after '#' comment lines.
inline void write_xyz(std::ostream& out, const CloudData& d) {
  detail::check_normals(d);
  std::string buf;
  for (const auto& c : d.comments) buf += "# " + c + "\n";
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    detail::put_row(buf, d.points[i], d.has_normals() ? &d.normals[i] : nullptr);
  }
  out << buf;
}

inline CloudData read_xyz(std::istream& in) {
  CloudData d;
  std::string line;
  std::vector<double> values;
  std::size_t number = 0;
  std::optional<std::size_t> columns;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') {
      std::string c = line.substr(1);
      if (!c.empty() && c[0] == ' ') c.erase(0, 1);
      d.comments.push_back(c);
      continue;
    }
    if (!detail::parse_doubles(line, values) || (values.size() != 3 && values.size() != 6)) {
      throw ParseError("XYZ: malformed point (line " + std::to_string(number) + ")");
    }
    if (columns && *columns != values.size()) {
      throw ParseError("XYZ: inconsistent column count (line " + std::to_string(number) + ")");
    }
    columns = values.size();
    d.points.push_back({values[0], values[1], values[2]});
    if (values.size() == 6) d.normals.push_back({values[3], values[4], values[5]});
  }
  return d;
}

inline void write_ply(std::ostream& out, const CloudData& d, bool binary) {
  detail::check_normals(d);
  std::string buf = "ply\n";
  buf += binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n";
  for (const auto& c : d.comments) buf += "comment " + c + "\n";
  buf += "element vertex " + std::to_string(d.points.size()) + "\n";
  buf += "property double x\nproperty double y\nproperty double z\n";
  if (d.has_normals()) buf += "property double nx\nproperty double ny\nproperty double nz\n";
  buf += "end_header\n";
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    const Vec3& p = d.points[i];
    if (binary) {
      for (double c : {p.x, p.y, p.z}) detail::put_binary(buf, c);
      if (d.has_normals()) {
        const Vec3& n = d.normals[i];
        for (double c : {n.x, n.y, n.z}) detail::put_binary(buf, c);
      }
    } else {
      detail::put_row(buf, p, d.has_normals() ? &d.normals[i] : nullptr);
    }
  }
  out << buf;
}

// Reads the vertex element of an ASCII or binary little-endian PLY with
// double (or float) x y z and optional nx ny nz properties. Errors name the
// header line or, for binary bodies, the byte offset.
inline CloudData read_ply(std::istream& in) {
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CloudData d;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string& line) {
    if (pos >= content.size()) return false;
    const std::size_t end = content.find('\n', pos);
    const std::size_t stop = end == std::string::npos ? content.size() : end;
    line = content.substr(pos, stop - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = end == std::string::npos ? content.size() : end + 1;
    ++line_no;
    return true;
  };
  auto fail = [&](const std::string& what) -> void {
    throw ParseError("PLY: " + what + " (line " + std::to_string(line_no) + ")");
  };

  std::string line;
  if (!next_line(line) || line != "ply") fail("missing 'ply' magic");
  bool binary = false;
  bool have_format = false;
  std::size_t count = 0;
  bool in_vertex = false;
  bool seen_vertex = false;
  std::vector<std::string> props;
  std::vector<std::size_t> prop_size;
  for (;;) {
    if (!next_line(line)) fail("missing end_header");
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "end_header") break;
    if (word == "comment") {
      const auto at = line.find("comment");
      std::string c = line.substr(at + 7);
      if (!c.empty() && c[0] == ' ') c.erase(0, 1);
      d.comments.push_back(c);
    } else if (word == "format") {
      std::string kind;
      ls >> kind;
      if (kind == "ascii") {
        binary = false;
      } else if (kind == "binary_little_endian") {
        binary = true;
      } else {
        fail("unsupported format '" + kind + "'");
      }
      have_format = true;
    } else if (word == "element") {
      std::string name;
      std::size_t n = 0;
      if (!(ls >> name >> n)) fail("bad element line");
      if (seen_vertex) fail("elements after vertex are not supported");
      if (name != "vertex") fail("unsupported element '" + name + "'");
      in_vertex = true;
      seen_vertex = true;
      count = n;
    } else if (word == "property") {
      if (!in_vertex) fail("property outside vertex element");
      std::string type;
      std::string name;
      if (!(ls >> type >> name)) fail("bad property line");
      if (type == "double" || type == "float64") {
        prop_size.push_back(8);
      } else if (type == "float" || type == "float32") {
        prop_size.push_back(4);
      } else {
        fail("unsupported property type '" + type + "'");
      }
      props.push_back(name);
    } else if (word != "obj_info") {
      fail("unexpected header keyword '" + word + "'");
    }
  }
  if (!have_format) fail("missing format line");
  auto index_of = [&](const char* name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (props[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto ix = index_of("x");
  const auto iy = index_of("y");
  const auto iz = index_of("z");
  if (!ix || !iy || !iz) fail("vertex element lacks x, y, z");
  const auto inx = index_of("nx");
  const auto iny = index_of("ny");
  const auto inz = index_of("nz");
  const bool normals = inx && iny && inz;

  d.points.reserve(count);
  if (normals) d.normals.reserve(count);
  std::vector<double> row(props.size());
  if (binary) {
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t k = 0; k < props.size(); ++k) {
        if (pos + prop_size[k] > content.size()) {
          throw ParseError("PLY: truncated binary data at byte offset " + std::to_string(pos) + " (vertex " +
                           std::to_string(i) + " of " + std::to_string(count) + ")");
        }
        if (prop_size[k] == 8) {
          std::uint64_t bits = 0;
          std::memcpy(&bits, content.data() + pos, 8);
          row[k] = std::bit_cast<double>(detail::to_le(bits));
        } else {
          std::uint32_t bits = 0;
          std::memcpy(&bits, content.data() + pos, 4);
          if constexpr (std::endian::native != std::endian::little) bits = __builtin_bswap32(bits);
          row[k] = static_cast<double>(std::bit_cast<float>(bits));
        }
        pos += prop_size[k];
      }
      d.points.push_back({row[*ix], row[*iy], row[*iz]});
      if (normals) d.normals.push_back({row[*inx], row[*iny], row[*inz]});
    }
  } else {
    std::vector<double> values;
    for (std::size_t i = 0; i < count; ++i) {
      if (!next_line(line)) {
        throw ParseError("PLY: truncated data, expected " + std::to_string(count) + " vertices, got " +
                         std::to_string(i) + " (byte offset " + std::to_string(pos) + ")");
      }
      if (!detail::parse_doubles(line, values) || values.size() != props.size()) fail("malformed vertex row");
      d.points.push_back({values[*ix], values[*iy], values[*iz]});
      if (normals) d.normals.push_back({values[*inx], values[*iny], values[*inz]});
    }
  }
  return d;
}

inline void write_cloud(std::ostream& out, const CloudData& d, CloudFormat format) {
  switch (format) {
    case CloudFormat::Xyz: write_xyz(out, d); break;
    case CloudFormat::PlyAscii: write_ply(out, d, false); break;
    case CloudFormat::PlyBinary: write_ply(out, d, true); break;
  }
}

// PLY when the stream starts with "ply", XYZ otherwise.
inline CloudData read_cloud(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 3);
  const bool is_ply = in.gcount() == 3 && std::string_view(magic, 3) == "ply";
  in.clear();
  in.seekg(0);
  return is_ply ? read_ply(in) : read_xyz(in);
}

}  // namespace crofton
