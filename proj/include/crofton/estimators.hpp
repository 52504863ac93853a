#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/geometry.hpp"
#include "crofton/mesh_intersect.hpp"
#include "crofton/rng.hpp"
#include "crofton/samplers.hpp"
#include "crofton/surfaces.hpp"

namespace crofton {

// Monte Carlo estimate over m random lines (or line pairs).
struct CroftonEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t lines_used = 0;
  // hit count k -> number of lines meeting the surface exactly k times
  std::map<std::size_t, std::uint64_t> histogram;
  std::vector<std::string> warnings;

  double mean_hits() const {
    std::uint64_t lines = 0;
    std::uint64_t hits = 0;
    for (const auto& [k, count] : histogram) {
      lines += count;
      hits += k * count;
    }
    return lines == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(lines);
  }
};

// Crossing points of a line with a surface, ordered along the line.
using LineIntersector = std::function<std::vector<LinePoint>(const OrientedLine&)>;

// Intersector for any surface representation. Parametric surfaces are
// intersected through their grid triangulation.
inline LineIntersector make_intersector(const Surface& surface, const ImplicitSamplerConfig& cfg = {}) {
  return std::visit(
      [&](const auto& s) -> LineIntersector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ImplicitSurface>) {
          cfg.validate();
          return [s, cfg](const OrientedLine& line) { return intersect_line_implicit(s, line, cfg); };
        } else if constexpr (std::is_same_v<T, TriangulatedSurface>) {
          auto mesh = std::make_shared<const TriangulatedSurface>(s);
          auto bvh = std::make_shared<const MeshIntersector>(*mesh);
          return [mesh, bvh](const OrientedLine& line) { return bvh->intersect(line); };
        } else {
          auto mesh = std::make_shared<const TriangulatedSurface>(triangulate_parametric(s).mesh);
          auto bvh = std::make_shared<const MeshIntersector>(*mesh);
          return [mesh, bvh](const OrientedLine& line) { return bvh->intersect(line); };
        }
      },
      surface);
}

// Converts a mean over normalized kinematic measure on L^3_r to the Crofton
// integral: kinematic_mass(3, r) / (2 kappa_2) = 2 pi r^2.
inline double crofton_constant(double r) { return kinematic_mass(3, r) / (2.0 * unit_ball_volume(2)); }

namespace detail {

// Welford running mean / variance.
struct RunningStats {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  double sample_sd() const { return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0; }
};

inline void check_clip(const std::vector<LinePoint>& hits, double r, bool& warned,
                       std::vector<std::string>& warnings) {
  if (warned) return;
  for (const auto& h : hits) {
    if (norm(h.x) >= r * (1.0 - 1e-9)) {
      warnings.push_back("clip radius may truncate surface");
      warned = true;
      return;
    }
  }
}

inline void check_args(std::size_t m, double r) {
  if (m < 1) throw InvalidArgument("estimator: need at least one line");
  if (!(r > 0.0)) throw InvalidArgument("estimator: clip radius must be > 0");
}

}  // namespace detail

// Integral of f over the surface from the sums of f over each random line's
// crossings, scaled by 2 pi r^2. The surface must lie inside the r-ball.
template <class F>
CroftonEstimate estimate_surface_integral(const LineIntersector& intersect, F&& f, ScalarSource& src,
                                          std::size_t m, double r) {
  detail::check_args(m, r);
  CroftonEstimate est;
  detail::RunningStats stats;
  bool warned = false;
  for (std::size_t j = 0; j < m; ++j) {
    const OrientedLine line = sample_line(src, r);
    const auto hits = intersect(line);
    double sum = 0.0;
    for (const auto& h : hits) sum += f(h.x);
    stats.add(sum);
    ++est.histogram[hits.size()];
    detail::check_clip(hits, r, warned, est.warnings);
  }
  const double c = crofton_constant(r);
  est.value = c * stats.mean;
  est.standard_error = c * stats.sample_sd() / std::sqrt(static_cast<double>(m));
  est.lines_used = m;
  return est;
}

template <class F>
CroftonEstimate estimate_surface_integral(const Surface& surface, F&& f, ScalarSource& src, std::size_t m, double r,
                                          const ImplicitSamplerConfig& cfg = {}) {
  return estimate_surface_integral(make_intersector(surface, cfg), std::forward<F>(f), src, m, r);
}

// Area by the Crofton formula: 2 pi r^2 times the mean crossing count.
inline CroftonEstimate estimate_area(const LineIntersector& intersect, ScalarSource& src, std::size_t m, double r) {
  return estimate_surface_integral(intersect, [](const Vec3&) { return 1.0; }, src, m, r);
}

inline CroftonEstimate estimate_area(const Surface& surface, ScalarSource& src, std::size_t m, double r,
                                     const ImplicitSamplerConfig& cfg = {}) {
  return estimate_area(make_intersector(surface, cfg), src, m, r);
}

// Double integral of f(x, y) over surface x surface from m independent line
// pairs, scaled by (2 pi r^2)^2. lines_used and the histogram count both
// lines of every pair.
template <class F>
CroftonEstimate estimate_double_integral(const LineIntersector& intersect, F&& f, ScalarSource& src,
                                         std::size_t m, double r) {
  detail::check_args(m, r);
  CroftonEstimate est;
  detail::RunningStats stats;
  bool warned = false;
  for (std::size_t j = 0; j < m; ++j) {
    const OrientedLine first = sample_line(src, r);
    const OrientedLine second = sample_line(src, r);
    const auto a = intersect(first);
    const auto b = intersect(second);
    double sum = 0.0;
    for (const auto& p : a) {
      for (const auto& q : b) sum += f(p.x, q.x);
    }
    stats.add(sum);
    ++est.histogram[a.size()];
    ++est.histogram[b.size()];
    detail::check_clip(a, r, warned, est.warnings);
    detail::check_clip(b, r, warned, est.warnings);
  }
  const double c = crofton_constant(r);
  est.value = c * c * stats.mean;
  est.standard_error = c * c * stats.sample_sd() / std::sqrt(static_cast<double>(m));
  est.lines_used = 2 * m;
  return est;
}

template <class F>
CroftonEstimate estimate_double_integral(const Surface& surface, F&& f, ScalarSource& src, std::size_t m, double r,
                                         const ImplicitSamplerConfig& cfg = {}) {
  return estimate_double_integral(make_intersector(surface, cfg), std::forward<F>(f), src, m, r);
}

}  // namespace crofton
