#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "crofton/rng.hpp"
#include "crofton/samplers.hpp"
#include "crofton/surfaces.hpp"
#include "crofton/vec.hpp"

namespace crofton {

// Advisory findings; none of them stops sampling.
struct ValidationReport {
  std::vector<std::string> warnings;

  // triangulated surfaces
  std::size_t boundary_edges = 0;
  std::size_t overshared_edges = 0;  // edges of three or more triangles
  std::size_t degenerate_triangles = 0;
  std::size_t bad_boundary_vertices = 0;
  std::size_t vertices_inside_edges = 0;

  // implicit surfaces
  std::size_t critical_probes = 0;
  std::vector<Vec3> critical_points;

  // parametric surfaces
  std::size_t rank_deficient_points = 0;

  bool clean() const { return warnings.empty(); }
};

inline constexpr double kCriticalGradient = 1e-8;

struct ValidateOptions {
  std::size_t probe_count = 256;  // implicit: cloud points probed
  std::uint64_t seed = 0;
  std::vector<Vec3> extra_probes;  // implicit: caller-chosen probe points
  std::size_t t_junction_limit = 20000000;  // skip the O(V * E) check above this
};

namespace detail {

inline std::string format_point(const Vec3& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

inline void validate_implicit(const ImplicitSurface& s, const ValidateOptions& opt, ValidationReport& rep) {
  std::vector<Vec3> probes = opt.extra_probes;
  if (opt.probe_count > 0) {
    auto src = ScalarSource::pseudo(opt.seed);
    ImplicitSamplerConfig cfg;
    cfg.with_normals = false;
    cfg.line_budget = 20000;
    try {
      const auto cloud = cloud_implicit(s, src, opt.probe_count, cfg);
      for (const auto& p : cloud.points) probes.push_back(p.position);
    } catch (const NumericError& e) {
      rep.warnings.push_back(std::string("no probe points: ") + e.what());
    }
  }
  for (const auto& x : probes) {
    if (norm(s.gradient_at(x)) < kCriticalGradient) {
      ++rep.critical_probes;
      rep.critical_points.push_back(x);
    }
  }
  if (rep.critical_probes > 0) {
    rep.warnings.push_back("vanishing gradient at " + std::to_string(rep.critical_probes) + " probe point(s), first " +
                           format_point(rep.critical_points.front()));
  }
}

// Squared distance from x to segment [a, b] and the segment parameter.
inline std::pair<double, double> segment_distance2(const Vec3& x, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return {dot(x - a, x - a), 0.0};
  double s = dot(x - a, d) / len2;
  s = std::clamp(s, 0.0, 1.0);
  const Vec3 e = x - (a + s * d);
  return {dot(e, e), s};
}

inline void validate_mesh(const TriangulatedSurface& s, const ValidateOptions& opt, ValidationReport& rep) {
  // Vertices are identified by exact coordinates.
  std::map<std::tuple<double, double, double>, std::size_t> ids;
  std::vector<Vec3> verts;
  auto id_of = [&](const Vec3& v) {
    auto [it, inserted] = ids.try_emplace({v.x, v.y, v.z}, verts.size());
    if (inserted) verts.push_back(v);
    return it->second;
  };
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_use;
  for (const auto& t : s.triangles()) {
    if (triangle_area(t) == 0.0) ++rep.degenerate_triangles;
    const std::array<std::size_t, 3> id{id_of(t.v1), id_of(t.v2), id_of(t.v3)};
    for (int k = 0; k < 3; ++k) {
      std::size_t a = id[k];
      std::size_t b = id[(k + 1) % 3];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      ++edge_use[{a, b}];
    }
  }
  std::vector<std::size_t> boundary_degree(verts.size(), 0);
  for (const auto& [edge, uses] : edge_use) {
    if (uses == 1) {
      ++rep.boundary_edges;
      ++boundary_degree[edge.first];
      ++boundary_degree[edge.second];
    } else if (uses > 2) {
      ++rep.overshared_edges;
    }
  }
  for (std::size_t deg : boundary_degree) {
    if (deg != 0 && deg != 2) ++rep.bad_boundary_vertices;
  }
  if (verts.size() * edge_use.size() <= opt.t_junction_limit) {
    for (std::size_t v = 0; v < verts.size(); ++v) {
      for (const auto& [edge, uses] : edge_use) {
        if (edge.first == v || edge.second == v) continue;
        const Vec3& a = verts[edge.first];
        const Vec3& b = verts[edge.second];
        const auto [d2, t] = segment_distance2(verts[v], a, b);
        const double scale = dot(b - a, b - a);
        if (t > 0.0 && t < 1.0 && d2 <= 1e-24 * scale) {
          ++rep.vertices_inside_edges;
          break;
        }
      }
    }
  } else {
    rep.warnings.push_back("mesh too large, vertex-on-edge check skipped");
  }
  if (rep.degenerate_triangles > 0) {
    rep.warnings.push_back(std::to_string(rep.degenerate_triangles) + " zero-area triangle(s)");
  }
  if (rep.boundary_edges > 0) {
    rep.warnings.push_back(std::to_string(rep.boundary_edges) + " boundary edge(s)");
  }
  if (rep.overshared_edges > 0) {
    rep.warnings.push_back(std::to_string(rep.overshared_edges) + " edge(s) shared by more than two triangles");
  }
  if (rep.bad_boundary_vertices > 0) {
    rep.warnings.push_back(std::to_string(rep.bad_boundary_vertices) +
                           " vertex(es) not on exactly two boundary edges");
  }
  if (rep.vertices_inside_edges > 0) {
    rep.warnings.push_back(std::to_string(rep.vertices_inside_edges) + " vertex(es) inside another edge");
  }
}

inline void validate_parametric(const ParametricSurface& s, ValidationReport& rep) {
  const double hu = 1e-5 * s.u_step();
  const double hv = 1e-5 * s.v_step();
  std::ostringstream first;
  for (int i = 0; i < s.u_res; ++i) {
    for (int j = 0; j < s.v_res; ++j) {
      const double u = s.u_at(i);
      const double v = s.v_at(j);
      // one-sided at the domain edges
      const double u0 = i == 0 ? u : u - hu;
      const double u1 = i == s.u_res - 1 ? u : u + hu;
      const double v0 = j == 0 ? v : v - hv;
      const double v1 = j == s.v_res - 1 ? v : v + hv;
      const Vec3 du = (s.map(u1, v) - s.map(u0, v)) / (u1 - u0);
      const Vec3 dv = (s.map(u, v1) - s.map(u, v0)) / (v1 - v0);
      // relative to the longer column, so a collapsing column counts too
      const double longest = std::max(norm(du), norm(dv));
      const double scale = longest * longest;
      if (!(norm(cross(du, dv)) > 1e-6 * scale) || scale == 0.0) {
        if (rep.rank_deficient_points == 0) first << "(u=" << u << ", v=" << v << ")";
        ++rep.rank_deficient_points;
      }
    }
  }
  if (rep.rank_deficient_points > 0) {
    rep.warnings.push_back("Jacobian rank < 2 at " + std::to_string(rep.rank_deficient_points) +
                           " grid point(s), first " + first.str());
  }
}

}  // namespace detail

inline ValidationReport validate(const Surface& surface, const ValidateOptions& opt = {}) {
  ValidationReport rep;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ImplicitSurface>) {
          detail::validate_implicit(s, opt, rep);
        } else if constexpr (std::is_same_v<T, TriangulatedSurface>) {
          detail::validate_mesh(s, opt, rep);
        } else {
          detail::validate_parametric(s, rep);
        }
      },
      surface);
  return rep;
}

}  // namespace crofton
