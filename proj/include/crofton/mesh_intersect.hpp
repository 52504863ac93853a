#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "crofton/geometry.hpp"
#include "crofton/surfaces.hpp"
#include "crofton/vec.hpp"

namespace crofton {

// Crossings closer than this in t are one crossing (a line through a shared
// edge or vertex otherwise counts once per incident triangle).
inline constexpr double kSharedEdgeTolerance = 1e-9;

// Barycentric solve of line/triangle with inclusive edges. Returns the line
// parameter t, or nullopt when the line misses or is parallel to the
// triangle's plane.
inline std::optional<double> intersect_line_triangle(const OrientedLine& line, const Triangle& tri) {
  const Vec3& dir = line.v.vec();
  const Vec3 e1 = tri.v2 - tri.v1;
  const Vec3 e2 = tri.v3 - tri.v1;
  const Vec3 pvec = cross(dir, e2);
  const double det = dot(e1, pvec);
  if (std::abs(det) <= 1e-14 * norm(e1) * norm(e2) || det == 0.0) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 tvec = line.p - tri.v1;
  const double u = dot(tvec, pvec) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 qvec = cross(tvec, e1);
  const double w = dot(dir, qvec) * inv;
  if (w < 0.0 || u + w > 1.0) return std::nullopt;
  return dot(e2, qvec) * inv;
}

// Bounding-volume hierarchy over a triangle list for whole-line queries.
class MeshIntersector {
 public:
  explicit MeshIntersector(const TriangulatedSurface& mesh) : mesh_(&mesh) {
    const std::size_t n = mesh.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::uint32_t{0});
    centroids_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& t = mesh[i];
      centroids_[i] = (t.v1 + t.v2 + t.v3) / 3.0;
    }
    nodes_.reserve(2 * n / kLeafSize + 2);
    build(0, static_cast<std::uint32_t>(n));
  }

  // Crossing points sorted by t, with near-duplicates merged.
  std::vector<LinePoint> intersect(const OrientedLine& line) const {
    std::vector<LinePoint> hits;
    if (nodes_.empty()) return hits;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!line_hits_box(line, node.lo, node.hi)) continue;
      if (node.count > 0) {
        for (std::uint32_t k = node.first; k < node.first + node.count; ++k) {
          if (auto t = intersect_line_triangle(line, (*mesh_)[order_[k]])) hits.push_back({*t, line.at(*t)});
        }
      } else {
        stack[top++] = node.left;
        stack[top++] = node.right;
      }
    }
    std::sort(hits.begin(), hits.end(), [](const LinePoint& a, const LinePoint& b) { return a.t < b.t; });
    std::vector<LinePoint> merged;
    merged.reserve(hits.size());
    for (const auto& h : hits) {
      if (!merged.empty() && h.t - merged.back().t < kSharedEdgeTolerance) continue;
      merged.push_back(h);
    }
    return merged;
  }

 private:
  static constexpr std::uint32_t kLeafSize = 4;

  struct Node {
    Vec3 lo;
    Vec3 hi;
    std::uint32_t first = 0;  // leaves: range [first, first + count) of order_
    std::uint32_t count = 0;  // 0 for inner nodes
    std::uint32_t left = 0;
    std::uint32_t right = 0;
  };

  static bool line_hits_box(const OrientedLine& line, const Vec3& lo, const Vec3& hi) {
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < 3; ++a) {
      const double d = line.v[a];
      const double o = line.p[a];
      if (d == 0.0) {
        if (o < lo[a] || o > hi[a]) return false;
        continue;
      }
      double t0 = (lo[a] - o) / d;
      double t1 = (hi[a] - o) / d;
      if (t0 > t1) std::swap(t0, t1);
      tmin = std::max(tmin, t0);
      tmax = std::min(tmax, t1);
    }
    // Pad so edge-grazing lines are not culled by rounding.
    return tmin <= tmax + 1e-9 * (1.0 + std::abs(tmax));
  }

  std::uint32_t build(std::uint32_t first, std::uint32_t count) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi = -lo;
    Vec3 clo = lo;
    Vec3 chi = hi;
    for (std::uint32_t k = first; k < first + count; ++k) {
      const auto& t = (*mesh_)[order_[k]];
      for (const Vec3* v : {&t.v1, &t.v2, &t.v3}) {
        for (std::size_t a = 0; a < 3; ++a) {
          lo[a] = std::min(lo[a], (*v)[a]);
          hi[a] = std::max(hi[a], (*v)[a]);
        }
      }
      const Vec3& c = centroids_[order_[k]];
      for (std::size_t a = 0; a < 3; ++a) {
        clo[a] = std::min(clo[a], c[a]);
        chi[a] = std::max(chi[a], c[a]);
      }
    }
    nodes_[index].lo = lo;
    nodes_[index].hi = hi;
    if (count <= kLeafSize) {
      nodes_[index].first = first;
      nodes_[index].count = count;
      return index;
    }
    std::size_t axis = 0;
    for (std::size_t a = 1; a < 3; ++a) {
      if (chi[a] - clo[a] > chi[axis] - clo[axis]) axis = a;
    }
    const std::uint32_t mid = first + count / 2;
    std::nth_element(order_.begin() + first, order_.begin() + mid, order_.begin() + first + count,
                     [&](std::uint32_t a, std::uint32_t b) { return centroids_[a][axis] < centroids_[b][axis]; });
    const std::uint32_t left = build(first, mid - first);
    const std::uint32_t right = build(mid, first + count - mid);
    nodes_[index].left = left;
    nodes_[index].right = right;
    nodes_[index].count = 0;
    return index;
  }

  const TriangulatedSurface* mesh_;
  std::vector<std::uint32_t> order_;
  std::vector<Vec3> centroids_;
  std::vector<Node> nodes_;
};

}  // namespace crofton
