#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/surfaces.hpp"
#include "crofton/vec.hpp"

namespace crofton {

namespace detail {

// Line reader that skips blank lines and '#' comments and tracks line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::istringstream& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.clear();
      out.str(line);
      return true;
    }
    return false;
  }

  std::size_t line_number() const { return number_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " (line " + std::to_string(number_) + ")");
  }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

}  // namespace detail

// ASCII OFF. Polygons with more than three vertices are fanned from their
// first vertex.
inline TriangulatedSurface read_off(std::istream& in) {
  detail::LineReader reader(in);
  std::istringstream ls;
  if (!reader.next(ls)) throw ParseError("OFF: empty input");
  std::string magic;
  ls >> magic;
  if (magic != "OFF") reader.fail("OFF: missing 'OFF' header");
  std::size_t nv = 0;
  std::size_t nf = 0;
  // counts may share the header line
  if (!(ls >> nv >> nf)) {
    if (!reader.next(ls) || !(ls >> nv >> nf)) reader.fail("OFF: expected vertex and face counts");
  }
  std::vector<Vec3> verts;
  verts.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    Vec3 v;
    if (!reader.next(ls) || !(ls >> v.x >> v.y >> v.z)) reader.fail("OFF: bad vertex " + std::to_string(i));
    verts.push_back(v);
  }
  std::vector<Triangle> tris;
  for (std::size_t f = 0; f < nf; ++f) {
    std::size_t k = 0;
    if (!reader.next(ls) || !(ls >> k)) reader.fail("OFF: bad face " + std::to_string(f));
    if (k < 3) reader.fail("OFF: face with fewer than 3 vertices");
    std::vector<std::size_t> idx(k);
    for (auto& i : idx) {
      if (!(ls >> i)) reader.fail("OFF: bad face " + std::to_string(f));
      if (i >= nv) reader.fail("OFF: vertex index " + std::to_string(i) + " out of range");
    }
    for (std::size_t j = 1; j + 1 < k; ++j) tris.push_back({verts[idx[0]], verts[idx[j]], verts[idx[j + 1]]});
  }
  return TriangulatedSurface(std::move(tris));
}

// ASCII STL; facet normals are ignored and recomputed from vertex order.
inline TriangulatedSurface read_stl_ascii(std::istream& in) {
  detail::LineReader reader(in);
  std::istringstream ls;
  std::string word;
  if (!reader.next(ls) || !(ls >> word) || word != "solid") reader.fail("STL: missing 'solid' header");
  std::vector<Triangle> tris;
  std::vector<Vec3> pending;
  bool ended = false;
  while (reader.next(ls)) {
    ls >> word;
    if (word == "vertex") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z)) reader.fail("STL: bad vertex");
      pending.push_back(v);
    } else if (word == "endfacet") {
      if (pending.size() != 3) reader.fail("STL: facet without exactly 3 vertices");
      tris.push_back({pending[0], pending[1], pending[2]});
      pending.clear();
    } else if (word == "endsolid") {
      ended = true;
      break;
    } else if (word != "facet" && word != "outer" && word != "endloop") {
      reader.fail("STL: unexpected '" + word + "'");
    }
  }
  if (!ended) reader.fail("STL: missing 'endsolid'");
  return TriangulatedSurface(std::move(tris));
}

// Dispatches on the extension (.off or .stl).
inline TriangulatedSurface load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open mesh file '" + path + "'");
  auto ends_with = [&](const std::string& ext) {
    if (path.size() < ext.size()) return false;
    for (std::size_t i = 0; i < ext.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(path[path.size() - ext.size() + i])) != ext[i]) return false;
    }
    return true;
  };
  if (ends_with(".off")) return read_off(in);
  if (ends_with(".stl")) return read_stl_ascii(in);
  throw InvalidArgument("unsupported mesh format '" + path + "' (expected .off or .stl)");
}

inline void write_off(std::ostream& out, const TriangulatedSurface& s) {
  out.precision(17);
  out << "OFF\n" << 3 * s.size() << ' ' << s.size() << " 0\n";
  for (const auto& t : s.triangles()) {
    for (const Vec3* v : {&t.v1, &t.v2, &t.v3}) out << v->x << ' ' << v->y << ' ' << v->z << '\n';
  }
  for (std::size_t i = 0; i < s.size(); ++i) out << "3 " << 3 * i << ' ' << 3 * i + 1 << ' ' << 3 * i + 2 << '\n';
}

}  // namespace crofton
