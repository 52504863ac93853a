#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/geometry.hpp"
#include "crofton/interval_search.hpp"
#include "crofton/rng.hpp"
#include "crofton/surfaces.hpp"
#include "crofton/vec.hpp"

namespace crofton {

struct LineHit {
  std::size_t line = 0;
  double t = 0.0;
};

struct TriangleHit {
  std::size_t triangle = 0;
};

using Provenance = std::variant<LineHit, TriangleHit>;

struct CloudPoint {
  Vec3 position;
  std::optional<UnitVector> normal;
  Provenance provenance;
};

enum class RootMethod { Bisection, RegulaFalsi };

struct ImplicitSamplerConfig {
  int scan_steps = 256;
  double root_tol = 1e-10;
  int max_iterations = 200;
  RootMethod method = RootMethod::Bisection;
  // Lines drawn without a single hit before the surface is declared absent.
  std::size_t line_budget = 100000;
  bool with_normals = true;

  void validate() const {
    if (scan_steps < 2) throw InvalidArgument("ImplicitSamplerConfig: scan_steps must be >= 2");
    if (!(root_tol > 0.0)) throw InvalidArgument("ImplicitSamplerConfig: root_tol must be > 0");
    if (max_iterations < 1) throw InvalidArgument("ImplicitSamplerConfig: max_iterations must be >= 1");
    if (line_budget < 1) throw InvalidArgument("ImplicitSamplerConfig: line_budget must be >= 1");
  }
};

namespace detail {

inline double eval_on_line(const ImplicitSurface& s, const OrientedLine& line, double t) {
  const double g = s.field(line.at(t));
  if (!std::isfinite(g)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "implicit field is non-finite at t=" << t << " on line v=" << line.v.vec() << " p=" << line.p;
    throw NumericError(msg.str());
  }
  return g;
}

// Refines a sign-change bracket [a, b] (ga * gb < 0) to width < tol.
inline double refine_root(const ImplicitSurface& s, const OrientedLine& line, double a, double b, double ga,
                          double gb, const ImplicitSamplerConfig& cfg) {
  if (cfg.method == RootMethod::Bisection) {
    for (int it = 0; it < cfg.max_iterations && (b - a) >= cfg.root_tol; ++it) {
      const double m = 0.5 * (a + b);
      const double gm = eval_on_line(s, line, m);
      if (gm == 0.0) return m;
      if ((gm < 0.0) == (ga < 0.0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  }
  // Regula falsi with the Illinois modification: halve the retained
  // endpoint's value when the same side is kept twice in a row.
  int kept = 0;
  for (int it = 0; it < cfg.max_iterations && (b - a) >= cfg.root_tol; ++it) {
    double m = (a * gb - b * ga) / (gb - ga);
    if (!(m > a && m < b)) m = 0.5 * (a + b);
    const double gm = eval_on_line(s, line, m);
    if (gm == 0.0) return m;
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
      if (kept == -1) gb *= 0.5;
      kept = -1;
    } else {
      b = m;
      gb = gm;
      if (kept == 1) ga *= 0.5;
      kept = 1;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Transverse crossings of the line with the implicit surface inside the
// clip ball, ascending in t. The chord is scanned in cfg.scan_steps equal
// pieces; each sign change is refined. A run of exact zeros at scan nodes
// between opposite signs counts as one crossing (at the run's midpoint);
// touching zeros without a sign change are dropped.
inline std::vector<LinePoint> intersect_line_implicit(const ImplicitSurface& s, const OrientedLine& line,
                                                      const ImplicitSamplerConfig& cfg = {}) {
  std::vector<LinePoint> hits;
  const double r = s.clip_radius;
  const double p2 = dot(line.p, line.p);
  if (!(p2 < r * r)) return hits;
  const double half = std::sqrt(r * r - p2);
  const int k = cfg.scan_steps;
  const double lo = -half;
  const double width = 2.0 * half;
  auto node = [&](int i) { return i == k ? half : lo + width * (static_cast<double>(i) / k); };

  int prev = -1;
  double g_prev = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double ti = node(i);
    const double gi = detail::eval_on_line(s, line, ti);
    if (gi == 0.0) continue;
    if (prev >= 0 && ((gi < 0.0) != (g_prev < 0.0))) {
      double t;
      if (i == prev + 1) {
        t = detail::refine_root(s, line, node(prev), ti, g_prev, gi, cfg);
      } else {
        t = 0.5 * (node(prev + 1) + node(i - 1));
      }
      hits.push_back({t, line.at(t)});
    }
    prev = i;
    g_prev = gi;
  }
  return hits;
}

struct CloudResult {
  std::vector<CloudPoint> points;
  std::size_t lines_used = 0;
  // sigma_j: crossings contributed by line j, for every line drawn.
  std::vector<std::uint32_t> hits_per_line;

  double mean_hits_per_line() const {
    return lines_used == 0 ? 0.0 : static_cast<double>(points.size()) / static_cast<double>(lines_used);
  }
};

namespace detail {

inline std::optional<UnitVector> implicit_normal(const ImplicitSurface& s, const Vec3& x) {
  const Vec3 g = s.gradient_at(x);
  const double len = norm(g);
  if (!(len > 1e-8) || !std::isfinite(len)) return std::nullopt;
  return UnitVector::unchecked(g / len);
}

template <class DrawLine>
CloudResult cloud_from_lines(const ImplicitSurface& s, std::size_t target, const ImplicitSamplerConfig& cfg,
                             DrawLine&& draw_line) {
  if (target < 1) throw InvalidArgument("cloud: target point count must be >= 1");
  cfg.validate();
  CloudResult out;
  out.points.reserve(target + 8);
  while (out.points.size() < target) {
    if (out.points.empty() && out.lines_used >= cfg.line_budget) {
      throw NumericError("surface not found in ball: no crossings after " + std::to_string(cfg.line_budget) +
                         " lines");
    }
    const OrientedLine line = draw_line();
    const std::size_t j = out.lines_used++;
    const auto hits = intersect_line_implicit(s, line, cfg);
    out.hits_per_line.push_back(static_cast<std::uint32_t>(hits.size()));
    for (const auto& h : hits) {
      CloudPoint cp{h.x, std::nullopt, LineHit{j, h.t}};
      if (cfg.with_normals) cp.normal = implicit_normal(s, h.x);
      out.points.push_back(cp);
    }
  }
  return out;
}

}  // namespace detail

// Point cloud on an implicit surface from kinematically random lines: each
// line's crossings are appended in increasing t until at least `target`
// points exist.
inline CloudResult cloud_implicit(const ImplicitSurface& s, ScalarSource& src, std::size_t target,
                                  const ImplicitSamplerConfig& cfg = {}) {
  return detail::cloud_from_lines(s, target, cfg, [&] { return sample_line(src, s.clip_radius); });
}

// The legacy sampler: directions restricted to the six signed coordinate
// axes, foot points uniform in the radius-r disk of v-perp. Local density
// on the surface goes as |nu_1| + |nu_2| + |nu_3|.
inline CloudResult cloud_axis_aligned(const ImplicitSurface& s, ScalarSource& src, std::size_t target,
                                      const ImplicitSamplerConfig& cfg = {}) {
  return detail::cloud_from_lines(s, target, cfg, [&] {
    const auto axis = std::min(static_cast<int>(6.0 * src.next_unit()), 5);
    const auto [a, b] = sample_disk(src, s.clip_radius);
    const std::size_t k = static_cast<std::size_t>(axis / 2);
    Vec3 v;
    v[k] = (axis % 2 == 0) ? 1.0 : -1.0;
    Vec3 p;
    p[(k + 1) % 3] = a;
    p[(k + 2) % 3] = b;
    return OrientedLine{UnitVector::unchecked(v), p};
  });
}

// x drawn from [0, total) and clamped below the exclusive upper bound.
inline double clamp_area_draw(double x, double total) {
  const double cap = total * (1.0 - 0x1.0p-52);
  return x < 0.0 ? 0.0 : (x > cap ? cap : x);
}

// (u, v) uniform in the standard 2-simplex by rejection from [0,1)^2.
inline std::pair<double, double> sample_simplex(ScalarSource& src) {
  return sample_rejection([&] { return std::pair{src.next_unit(), src.next_unit()}; },
                          [](const std::pair<double, double>& uv) { return uv.first + uv.second <= 1.0; })
      .point;
}

// Area-weighted triangle choice followed by a uniform point in the triangle.
inline std::vector<CloudPoint> cloud_triangulated(const TriangulatedSurface& s, ScalarSource& src,
                                                  std::size_t target) {
  if (target < 1) throw InvalidArgument("cloud_triangulated: target point count must be >= 1");
  const auto& cumulative = s.cumulative_areas();
  const double total = s.total_area();
  std::vector<CloudPoint> out;
  out.reserve(target);
  for (std::size_t n = 0; n < target; ++n) {
    const std::size_t j = find_interval(cumulative, clamp_area_draw(total * src.next_unit(), total));
    const auto [u, v] = sample_simplex(src);
    const Triangle& t = s[j];
    const Vec3 nrm = triangle_normal(t);
    const double len = norm(nrm);
    std::optional<UnitVector> normal;
    if (len > 0.0) normal = UnitVector::unchecked(nrm / len);
    out.push_back({barycentric_point(t, u, v), normal, TriangleHit{j}});
  }
  return out;
}

namespace detail {

inline std::optional<UnitVector> parametric_normal(const ParametricSurface& s, double u, double v) {
  const double hu = 1e-6 * (s.domain.high(0) - s.domain.low(0));
  const double hv = 1e-6 * (s.domain.high(1) - s.domain.low(1));
  const Vec3 du = (s.map(u + hu, v) - s.map(u - hu, v)) / (2.0 * hu);
  const Vec3 dv = (s.map(u, v + hv) - s.map(u, v - hv)) / (2.0 * hv);
  const Vec3 n = cross(du, dv);
  const double len = norm(n);
  if (!(len > 1e-10) || !std::isfinite(len)) return std::nullopt;
  return UnitVector::unchecked(n / len);
}

}  // namespace detail

// Triangle choice by the proxy's areas, but the simplex point is placed in
// the parameter triangle and pushed through Phi, so points lie on the
// surface itself.
inline std::vector<CloudPoint> cloud_parametric(const ParametricSurface& s, const ParametricTriangulation& tri,
                                                ScalarSource& src, std::size_t target) {
  if (target < 1) throw InvalidArgument("cloud_parametric: target point count must be >= 1");
  const auto& cumulative = tri.mesh.cumulative_areas();
  const double total = tri.mesh.total_area();
  std::vector<CloudPoint> out;
  out.reserve(target);
  for (std::size_t n = 0; n < target; ++n) {
    const std::size_t j = find_interval(cumulative, clamp_area_draw(total * src.next_unit(), total));
    const auto [a, b] = sample_simplex(src);
    const ParameterTriangle& pt = tri.parameter_triangles[j];
    const double c = 1.0 - a - b;
    const double u = a * pt[0].u + b * pt[1].u + c * pt[2].u;
    const double v = a * pt[0].v + b * pt[1].v + c * pt[2].v;
    const Vec3 x = s.map(u, v);
    if (!is_finite(x)) {
      std::ostringstream msg;
      msg << "cloud_parametric: non-finite value at (u=" << u << ", v=" << v << ")";
      throw NumericError(msg.str());
    }
    auto normal = detail::parametric_normal(s, u, v);
    if (!normal) {
      const Vec3 nrm = triangle_normal(tri.mesh[j]);
      if (norm(nrm) > 0.0) normal = UnitVector::unchecked(nrm / norm(nrm));
    }
    out.push_back({x, normal, TriangleHit{j}});
  }
  return out;
}

inline std::vector<CloudPoint> cloud_parametric(const ParametricSurface& s, ScalarSource& src, std::size_t target) {
  return cloud_parametric(s, triangulate_parametric(s), src, target);
}

}  // namespace crofton
