#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>

#include "crofton/error.hpp"
#include "crofton/rng.hpp"
#include "crofton/stats.hpp"
#include "crofton/surfaces.hpp"
#include "crofton/vec.hpp"

namespace crofton {

// A subset of a surface with its analytic share of the total area.
using Region = RegionTest<Vec3>;

// A named test surface in whichever representations it has, with its exact
// area and regions of known area fraction.
struct CatalogSurface {
  std::string name;
  std::optional<ImplicitSurface> implicit;
  std::optional<ParametricSurface> parametric;
  std::optional<TriangulatedSurface> mesh;
  double area = 0.0;         // area of the smooth surface (the mesh itself for polyhedra)
  double clip_radius = 2.0;  // ball containing the surface, for line sampling
  std::vector<Region> regions;
  // Polyhedra only: face label of a surface point and per-face areas.
  std::function<std::size_t(const Vec3&)> face_of;
  std::vector<double> face_areas;
  // A partition into cells of known area fraction (octants, quadrants or
  // faces), for serial tests on cell labels.
  std::function<std::size_t(const Vec3&)> cell_of;
  std::vector<double> cell_fractions;
  // Density bins with their areas; bin_of returns bin_areas.size() outside
  // every bin. Empty when the surface has none.
  std::function<std::size_t(const Vec3&)> bin_of;
  std::vector<double> bin_areas;
};

inline constexpr int kDefaultCatalogResolution = 257;

// Area of the ellipsoid with semi-axes a, b, c (any order).
inline double ellipsoid_area(double a, double b, double c) {
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end(), std::greater<>());
  const double A = s[0];
  const double B = s[1];
  const double C = s[2];
  if (!(C > 0.0)) throw InvalidArgument("ellipsoid_area: semi-axes must be > 0");
  const double pi = std::numbers::pi;
  if (A == C) return 4.0 * pi * A * A;
  const double phi = std::acos(C / A);
  const double k = std::sqrt((A * A * (B * B - C * C)) / (B * B * (A * A - C * C)));
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  const double e = boost::math::ellint_2(k, phi);
  const double f = boost::math::ellint_1(k, phi);
  return 2.0 * pi * C * C + 2.0 * pi * A * B / sp * (e * sp * sp + f * cp * cp);
}

namespace detail {

inline std::vector<Region> octant_regions() {
  std::vector<Region> out;
  for (int k = 0; k < 8; ++k) {
    const double sx = (k & 1) ? -1.0 : 1.0;
    const double sy = (k & 2) ? -1.0 : 1.0;
    const double sz = (k & 4) ? -1.0 : 1.0;
    std::string name = "octant";
    name += sx > 0 ? '+' : '-';
    name += sy > 0 ? '+' : '-';
    name += sz > 0 ? '+' : '-';
    out.push_back({name, [=](const Vec3& x) { return sx * x.x > 0.0 && sy * x.y > 0.0 && sz * x.z > 0.0; }, 0.125});
  }
  return out;
}

// Bit 0, 1, 2 set for a negative x, y, z; matches octant_regions() order.
inline std::size_t octant_of(const Vec3& x) {
  return (x.x < 0.0 ? 1u : 0u) | (x.y < 0.0 ? 2u : 0u) | (x.z < 0.0 ? 4u : 0u);
}

inline void use_octants(CatalogSurface& s) {
  s.cell_of = octant_of;
  s.cell_fractions.assign(8, 0.125);
}

inline void use_quadrants(CatalogSurface& s) {
  s.cell_of = [](const Vec3& x) -> std::size_t { return (x.x < 0.0 ? 1u : 0u) | (x.y < 0.0 ? 2u : 0u); };
  s.cell_fractions.assign(4, 0.25);
}

inline constexpr double kSphereCapDegrees = 10.0;

// Two bins on the unit sphere: caps around the six coordinate axes and caps
// around the eight diagonals.
inline void use_sphere_caps(CatalogSurface& s) {
  const double c = std::cos(kSphereCapDegrees * std::numbers::pi / 180.0);
  const double cap = 2.0 * std::numbers::pi * (1.0 - c);
  s.bin_of = [c](const Vec3& x) -> std::size_t {
    const double len = norm(x);
    const double m = std::max({std::abs(x.x), std::abs(x.y), std::abs(x.z)});
    if (m >= c * len) return 0;
    if (std::abs(x.x) + std::abs(x.y) + std::abs(x.z) >= c * std::sqrt(3.0) * len) return 1;
    return 2;
  };
  s.bin_areas = {6.0 * cap, 8.0 * cap};
}

// Triangle list of a polyhedron with vertex-index faces.
inline std::vector<Triangle> faces_to_triangles(const std::vector<Vec3>& v, const std::vector<std::array<int, 3>>& f) {
  std::vector<Triangle> out;
  for (const auto& face : f) out.push_back({v[face[0]], v[face[1]], v[face[2]]});
  return out;
}

// max_i (<n_i, x> - d_i): zero set is the boundary of the convex polytope.
inline ImplicitSurface polytope_field(std::vector<Vec3> normals, std::vector<double> offsets, double r) {
  auto argmax = [normals, offsets](const Vec3& x) {
    std::size_t best = 0;
    double value = dot(normals[0], x) - offsets[0];
    for (std::size_t i = 1; i < normals.size(); ++i) {
      const double d = dot(normals[i], x) - offsets[i];
      if (d > value) {
        value = d;
        best = i;
      }
    }
    return std::pair{best, value};
  };
  return ImplicitSurface([argmax](const Vec3& x) { return argmax(x).second; },
                         [argmax, normals](const Vec3& x) { return normals[argmax(x).first]; }, r);
}

// Face with the smallest plane distance.
inline std::function<std::size_t(const Vec3&)> nearest_plane(std::vector<Vec3> normals, std::vector<double> offsets) {
  return [normals, offsets](const Vec3& x) {
    std::size_t best = 0;
    double dist = std::abs(dot(normals[0], x) - offsets[0]);
    for (std::size_t i = 1; i < normals.size(); ++i) {
      const double d = std::abs(dot(normals[i], x) - offsets[i]);
      if (d < dist) {
        dist = d;
        best = i;
      }
    }
    return best;
  };
}

inline std::vector<Region> face_regions(const CatalogSurface& s) {
  std::vector<Region> out;
  double total = 0.0;
  for (double a : s.face_areas) total += a;
  for (std::size_t i = 0; i < s.face_areas.size(); ++i) {
    auto face_of = s.face_of;
    out.push_back({"face" + std::to_string(i), [face_of, i](const Vec3& x) { return face_of(x) == i; },
                   s.face_areas[i] / total});
  }
  return out;
}

inline CatalogSurface make_sphere(int res) {
  CatalogSurface s;
  s.name = "sphere";
  s.implicit = ImplicitSurface([](const Vec3& x) { return dot(x, x) - 1.0; }, [](const Vec3& x) { return 2.0 * x; },
                               2.0);
  const double pi = std::numbers::pi;
  // u = latitude, v = longitude
  s.parametric = ParametricSurface(
      [](double u, double v) { return Vec3{std::cos(u) * std::cos(v), std::cos(u) * std::sin(v), std::sin(u)}; },
      BoxDomain({-pi / 2, -pi}, {pi / 2, pi}), res, res);
  s.mesh = triangulate_parametric(*s.parametric).mesh;
  s.area = 4.0 * pi;
  s.clip_radius = 2.0;
  s.regions = octant_regions();
  use_octants(s);
  use_sphere_caps(s);
  s.regions.push_back({"cap z>1/2", [](const Vec3& x) { return x.z > 0.5; }, 0.25});
  s.regions.push_back({"cap x<-0.8", [](const Vec3& x) { return x.x < -0.8; }, 0.1});
  s.regions.push_back({"band |y|<0.3", [](const Vec3& x) { return std::abs(x.y) < 0.3; }, 0.3});
  return s;
}

inline constexpr double kTorusMajor = 2.0;
inline constexpr double kTorusMinor = 0.5;

inline CatalogSurface make_torus(int res) {
  CatalogSurface s;
  s.name = "torus";
  constexpr double R = kTorusMajor;
  constexpr double rho = kTorusMinor;
  s.implicit = ImplicitSurface(
      [](const Vec3& x) {
        const double q = dot(x, x) + R * R - rho * rho;
        return q * q - 4.0 * R * R * (x.x * x.x + x.y * x.y);
      },
      [](const Vec3& x) {
        const double q = dot(x, x) + R * R - rho * rho;
        return Vec3{4.0 * q * x.x - 8.0 * R * R * x.x, 4.0 * q * x.y - 8.0 * R * R * x.y, 4.0 * q * x.z};
      },
      3.0);
  const double pi = std::numbers::pi;
  s.parametric = ParametricSurface(
      [](double u, double v) {
        const double w = R + rho * std::cos(v);
        return Vec3{w * std::cos(u), w * std::sin(u), rho * std::sin(v)};
      },
      BoxDomain({-pi, -pi}, {pi, pi}), res, res);
  s.mesh = triangulate_parametric(*s.parametric).mesh;
  s.area = 4.0 * pi * pi * R * rho;
  s.clip_radius = 3.0;
  s.regions = octant_regions();
  use_octants(s);
  // area element (R + rho cos v) rho du dv; cos v > 0 on the outer half
  s.regions.push_back(
      {"outer half", [](const Vec3& x) { return x.x * x.x + x.y * x.y > R * R; }, 0.5 + rho / (pi * R)});
  s.regions.push_back({"wedge 0<angle<1", [](const Vec3& x) {
                         const double a = std::atan2(x.y, x.x);
                         return a > 0.0 && a < 1.0;
                       },
                       1.0 / (2.0 * pi)});
  return s;
}

inline constexpr std::array<double, 3> kEllipsoidAxes{1.5, 1.0, 0.5};

inline CatalogSurface make_ellipsoid(int res) {
  CatalogSurface s;
  s.name = "ellipsoid";
  constexpr double a = kEllipsoidAxes[0];
  constexpr double b = kEllipsoidAxes[1];
  constexpr double c = kEllipsoidAxes[2];
  s.implicit = ImplicitSurface(
      [](const Vec3& x) { return (x.x / a) * (x.x / a) + (x.y / b) * (x.y / b) + (x.z / c) * (x.z / c) - 1.0; },
      [](const Vec3& x) { return Vec3{2.0 * x.x / (a * a), 2.0 * x.y / (b * b), 2.0 * x.z / (c * c)}; }, 2.0);
  const double pi = std::numbers::pi;
  s.parametric = ParametricSurface(
      [](double u, double v) {
        return Vec3{a * std::cos(u) * std::cos(v), b * std::cos(u) * std::sin(v), c * std::sin(u)};
      },
      BoxDomain({-pi / 2, -pi}, {pi / 2, pi}), res, res);
  s.mesh = triangulate_parametric(*s.parametric).mesh;
  s.area = ellipsoid_area(a, b, c);
  s.clip_radius = 2.0;
  s.regions = octant_regions();
  use_octants(s);
  return s;
}

inline CatalogSurface make_plane() {
  CatalogSurface s;
  s.name = "plane";
  s.parametric =
      ParametricSurface([](double u, double v) { return Vec3{u, v, 0.0}; }, BoxDomain({-0.5, -0.5}, {0.5, 0.5}), 2, 2);
  s.mesh = triangulate_parametric(*s.parametric).mesh;
  s.area = 1.0;
  s.clip_radius = 1.0;
  s.regions.push_back({"x>0", [](const Vec3& x) { return x.x > 0.0; }, 0.5});
  use_quadrants(s);
  s.regions.push_back({"quadrant", [](const Vec3& x) { return x.x > 0.0 && x.y > 0.0; }, 0.25});
  s.regions.push_back(
      {"disk 0.3", [](const Vec3& x) { return x.x * x.x + x.y * x.y < 0.09; }, std::numbers::pi * 0.09});
  return s;
}

// The plane z = 0 clipped to the unit ball.
inline CatalogSurface make_disk() {
  CatalogSurface s;
  s.name = "disk";
  s.implicit =
      ImplicitSurface([](const Vec3& x) { return x.z; }, [](const Vec3&) { return Vec3{0.0, 0.0, 1.0}; }, 1.0);
  s.area = std::numbers::pi;
  s.clip_radius = 1.0;
  s.regions.push_back({"x>0", [](const Vec3& x) { return x.x > 0.0; }, 0.5});
  use_quadrants(s);
  s.regions.push_back({"quadrant", [](const Vec3& x) { return x.x > 0.0 && x.y > 0.0; }, 0.25});
  s.regions.push_back({"inner disk", [](const Vec3& x) { return x.x * x.x + x.y * x.y < 0.25; }, 0.25});
  return s;
}

// Regular tetrahedron inscribed in the unit sphere.
inline CatalogSurface make_tetrahedron() {
  CatalogSurface s;
  s.name = "tetrahedron";
  const double k = 1.0 / std::sqrt(3.0);
  const std::vector<Vec3> v{{k, k, k}, {k, -k, -k}, {-k, k, -k}, {-k, -k, k}};
  // face i is opposite vertex i, wound outward
  const std::vector<std::array<int, 3>> faces{{1, 3, 2}, {0, 2, 3}, {0, 3, 1}, {0, 1, 2}};
  s.mesh = TriangulatedSurface(faces_to_triangles(v, faces));
  std::vector<Vec3> normals;
  std::vector<double> offsets;
  for (const auto& p : v) {
    normals.push_back(-p);
    offsets.push_back(1.0 / 3.0);
  }
  s.implicit = polytope_field(normals, offsets, 1.05);
  s.face_of = nearest_plane(normals, offsets);
  for (std::size_t i = 0; i < 4; ++i) s.face_areas.push_back(triangle_area((*s.mesh)[i]));
  s.area = s.mesh->total_area();
  s.clip_radius = 1.05;
  s.regions = face_regions(s);
  s.cell_of = s.face_of;
  for (double a : s.face_areas) s.cell_fractions.push_back(a / s.area);
  s.bin_of = s.face_of;
  s.bin_areas = s.face_areas;
  return s;
}

// Corner of the unit cube: vertices O, e1, e2, e3. Faces 0-2 lie in the
// coordinate planes x=0, y=0, z=0; face 3 is the slanted face x+y+z=1.
inline CatalogSurface make_pyramid() {
  CatalogSurface s;
  s.name = "pyramid";
  const std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const std::vector<std::array<int, 3>> faces{{0, 3, 2}, {0, 1, 3}, {0, 2, 1}, {1, 2, 3}};
  s.mesh = TriangulatedSurface(faces_to_triangles(v, faces));
  const double k = 1.0 / std::sqrt(3.0);
  const std::vector<Vec3> normals{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}, {k, k, k}};
  const std::vector<double> offsets{0.0, 0.0, 0.0, k};
  s.implicit = polytope_field(normals, offsets, 1.05);
  s.face_of = nearest_plane(normals, offsets);
  for (std::size_t i = 0; i < 4; ++i) s.face_areas.push_back(triangle_area((*s.mesh)[i]));
  s.area = s.mesh->total_area();
  s.clip_radius = 1.05;
  s.regions = face_regions(s);
  s.cell_of = s.face_of;
  for (double a : s.face_areas) s.cell_fractions.push_back(a / s.area);
  s.bin_of = s.face_of;
  s.bin_areas = s.face_areas;
  return s;
}

}  // namespace detail

inline std::vector<std::string> catalog_names() {
  return {"sphere", "torus", "ellipsoid", "plane", "disk", "tetrahedron", "pyramid"};
}

// `res` is the parametric grid resolution in both directions.
inline CatalogSurface catalog_surface(const std::string& name, int res = kDefaultCatalogResolution) {
  if (name == "sphere") return detail::make_sphere(res);
  if (name == "torus") return detail::make_torus(res);
  if (name == "ellipsoid") return detail::make_ellipsoid(res);
  if (name == "plane") return detail::make_plane();
  if (name == "disk") return detail::make_disk();
  if (name == "tetrahedron") return detail::make_tetrahedron();
  if (name == "pyramid") return detail::make_pyramid();
  throw InvalidArgument("unknown catalog surface '" + name + "'");
}

}  // namespace crofton
