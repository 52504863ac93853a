#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/rng.hpp"
#include "crofton/vec.hpp"

namespace crofton {

using ScalarField = std::function<double(const Vec3&)>;
using GradientField = std::function<Vec3(const Vec3&)>;

// Finite-difference step for gradients: h = 1e-5 * (1 + |x|).
inline double fd_step(const Vec3& x) { return 1e-5 * (1.0 + norm(x)); }

// Central-difference gradient of a scalar field.
inline Vec3 fd_gradient(const ScalarField& f, const Vec3& x) {
  const double h = fd_step(x);
  Vec3 g;
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3 a = x;
    Vec3 b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

// The zero set of `field`, clipped to the closed ball of radius clip_radius
// about the origin.
struct ImplicitSurface {
  ScalarField field;
  GradientField gradient;  // empty when no analytic gradient is known
  double clip_radius = 1.0;

  ImplicitSurface() = default;
  ImplicitSurface(ScalarField f, GradientField g, double r)
      : field(std::move(f)), gradient(std::move(g)), clip_radius(r) {
    if (!field) throw InvalidArgument("ImplicitSurface: field is empty");
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("ImplicitSurface: clip radius must be > 0");
  }

  bool has_analytic_gradient() const { return static_cast<bool>(gradient); }

  Vec3 gradient_at(const Vec3& x) const { return gradient ? gradient(x) : fd_gradient(field, x); }
};

using ParametricMap = std::function<Vec3(double, double)>;

// Phi(u, v) over a parameter rectangle, sampled on a u_res x v_res grid of
// parameter points.
struct ParametricSurface {
  ParametricMap map;
  BoxDomain domain = BoxDomain({0.0, 0.0}, {1.0, 1.0});
  int u_res = 2;
  int v_res = 2;

  ParametricSurface() = default;
  ParametricSurface(ParametricMap phi, BoxDomain dom, int ures, int vres)
      : map(std::move(phi)), domain(std::move(dom)), u_res(ures), v_res(vres) {
    if (!map) throw InvalidArgument("ParametricSurface: map is empty");
    if (domain.dim() != 2) throw InvalidArgument("ParametricSurface: domain must be 2-dimensional");
    if (u_res < 2 || v_res < 2) throw InvalidArgument("ParametricSurface: resolutions must be >= 2");
  }

  double u_step() const { return (domain.high(0) - domain.low(0)) / (u_res - 1); }
  double v_step() const { return (domain.high(1) - domain.low(1)) / (v_res - 1); }
  double u_at(int i) const { return i == u_res - 1 ? domain.high(0) : domain.low(0) + i * u_step(); }
  double v_at(int j) const { return j == v_res - 1 ? domain.high(1) : domain.low(1) + j * v_step(); }
};

struct Triangle {
  Vec3 v1;
  Vec3 v2;
  Vec3 v3;
};

namespace detail {

inline bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

}  // namespace detail

// 1/2 |(v2 - v1) x (v3 - v2)|. The vertex cycle is first rotated to start at
// the lexicographically smallest vertex so that cyclic relabelings give
// bit-identical results.
inline double triangle_area(const Triangle& t) {
  std::array<Vec3, 3> v{t.v1, t.v2, t.v3};
  std::size_t first = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (detail::lex_less(v[i], v[first])) first = i;
  }
  std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(first), v.end());
  return 0.5 * norm(cross(v[1] - v[0], v[2] - v[1]));
}

// Unnormalized normal (v2 - v1) x (v3 - v1); its orientation follows the
// vertex order.
inline Vec3 triangle_normal(const Triangle& t) { return cross(t.v2 - t.v1, t.v3 - t.v1); }

// u*v1 + v*v2 + (1-u-v)*v3 for (u, v) in the standard 2-simplex.
inline Vec3 barycentric_point(const Triangle& t, double u, double v) {
  constexpr double kSlack = 1e-12;
  if (!(u >= 0.0) || !(v >= 0.0) || !(u + v <= 1.0 + kSlack)) {
    throw InvalidArgument("barycentric_point: (u, v) outside the standard simplex");
  }
  return u * t.v1 + v * t.v2 + (1.0 - u - v) * t.v3;
}

// An ordered triangle list with its prefix-summed areas.
class TriangulatedSurface {
 public:
  TriangulatedSurface() = default;

  explicit TriangulatedSurface(std::vector<Triangle> triangles) : triangles_(std::move(triangles)) {
    cumulative_.reserve(triangles_.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < triangles_.size(); ++i) {
      const auto& t = triangles_[i];
      if (!is_finite(t.v1) || !is_finite(t.v2) || !is_finite(t.v3)) {
        throw InvalidArgument("TriangulatedSurface: triangle " + std::to_string(i) + " has non-finite vertices");
      }
      sum += triangle_area(t);
      cumulative_.push_back(sum);
    }
    if (!(sum > 0.0)) throw InvalidArgument("TriangulatedSurface: total area must be > 0");
  }

  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<double>& cumulative_areas() const { return cumulative_; }
  double total_area() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  std::size_t size() const { return triangles_.size(); }
  const Triangle& operator[](std::size_t i) const { return triangles_[i]; }

  double bounding_radius() const {
    double r = 0.0;
    for (const auto& t : triangles_) r = std::max({r, norm(t.v1), norm(t.v2), norm(t.v3)});
    return r;
  }

 private:
  std::vector<Triangle> triangles_;
  std::vector<double> cumulative_;
};

struct ParameterPoint {
  double u = 0.0;
  double v = 0.0;
};

using ParameterTriangle = std::array<ParameterPoint, 3>;

// A parametric surface's piecewise-linear proxy plus, for each surface
// triangle, the parameter-space triangle it came from.
struct ParametricTriangulation {
  TriangulatedSurface mesh;
  std::vector<ParameterTriangle> parameter_triangles;
};

// Each parameter sub-rectangle r_ij is split into
//   (g_ij, g_i+1,j+1, g_i,j+1) and (g_ij, g_i+1,j, g_i+1,j+1),
// and mapped through Phi. Triangles are ordered by (i, j), "+" before "-".
inline ParametricTriangulation triangulate_parametric(const ParametricSurface& s) {
  const int nu = s.u_res;
  const int nv = s.v_res;
  std::vector<Vec3> grid(static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv));
  auto at = [&](int i, int j) -> Vec3& { return grid[static_cast<std::size_t>(i) * nv + j]; };
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double u = s.u_at(i);
      const double v = s.v_at(j);
      const Vec3 x = s.map(u, v);
      if (!is_finite(x)) {
        std::ostringstream msg;
        msg << "triangulate_parametric: non-finite value at grid point (i=" << i << ", j=" << j << ", u=" << u
            << ", v=" << v << ")";
        throw NumericError(msg.str());
      }
      at(i, j) = x;
    }
  }
  std::vector<Triangle> triangles;
  std::vector<ParameterTriangle> params;
  const std::size_t count = 2 * static_cast<std::size_t>(nu - 1) * static_cast<std::size_t>(nv - 1);
  triangles.reserve(count);
  params.reserve(count);
  for (int i = 0; i + 1 < nu; ++i) {
    for (int j = 0; j + 1 < nv; ++j) {
      const ParameterPoint g00{s.u_at(i), s.v_at(j)};
      const ParameterPoint g10{s.u_at(i + 1), s.v_at(j)};
      const ParameterPoint g11{s.u_at(i + 1), s.v_at(j + 1)};
      const ParameterPoint g01{s.u_at(i), s.v_at(j + 1)};
      triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
      params.push_back({g00, g11, g01});
      triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      params.push_back({g00, g10, g11});
    }
  }
  return {TriangulatedSurface(std::move(triangles)), std::move(params)};
}

using Surface = std::variant<ImplicitSurface, ParametricSurface, TriangulatedSurface>;

}  // namespace crofton
