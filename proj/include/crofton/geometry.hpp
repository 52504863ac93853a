#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/rng.hpp"
#include "crofton/vec.hpp"

namespace crofton {

// Oriented line t -> t*v + p in R^3, stored canonically: v unit, p the foot
// of the perpendicular from the origin (so <p, v> = 0).
struct OrientedLine {
  UnitVector v;
  Vec3 p;

  Vec3 at(double t) const { return t * v.vec() + p; }
};

// Canonical (v, p) for the line through q with direction v.
inline OrientedLine make_line(const UnitVector& v, const Vec3& q) {
  if (std::abs(norm(v.vec()) - 1.0) > UnitVector::kTolerance) {
    throw InvalidArgument("make_line: direction is not a unit vector");
  }
  const Vec3& u = v.vec();
  Vec3 p = q - dot(q, u) * u;
  // second pass removes the residual left by cancellation when |q| >> |p|
  p -= dot(p, u) * u;
  return {v, p};
}

inline OrientedLine make_line(const Vec3& v, const Vec3& q) { return make_line(UnitVector(v), q); }

// A point on a line together with its line parameter.
struct LinePoint {
  double t = 0.0;
  Vec3 x;
};

inline bool is_canonical(const OrientedLine& line) {
  return std::abs(dot(line.p, line.v.vec())) <= 1e-10 * (1.0 + norm(line.p));
}

// The same object in R^n.
struct LineN {
  VecN v;
  VecN p;
};

struct Rotation3 {
  std::array<std::array<double, 3>, 3> m{};

  static Rotation3 identity() {
    Rotation3 r;
    for (int i = 0; i < 3; ++i) r.m[i][i] = 1.0;
    return r;
  }

  Vec3 operator*(const Vec3& x) const {
    return {m[0][0] * x.x + m[0][1] * x.y + m[0][2] * x.z, m[1][0] * x.x + m[1][1] * x.y + m[1][2] * x.z,
            m[2][0] * x.x + m[2][1] * x.y + m[2][2] * x.z};
  }

  Rotation3 transposed() const {
    Rotation3 t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t.m[i][j] = m[j][i];
    return t;
  }

  double determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  // max_ij |(R^T R - I)_ij|
  double orthogonality_error() const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += m[k][i] * m[k][j];
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    }
    return worst;
  }
};

// Threshold on <s, s> = |uI + uF|^2 below which uF is treated as -uI.
inline constexpr double kAntipodalTolerance = 1e-16;

// The rotation R with R uI = uF that fixes the orthogonal complement of
// span{uI, uF}:
//   R = I + 2 uF uI^T - (2 / <s,s>) s s^T,  s = uI + uF.
// Follows the operation order of the published C listing except that <s,s>
// is summed from s itself: 2 + 2<uI,uF> cancels badly near uF = -uI.
// Returns nullopt when uF is (numerically) -uI.
inline std::optional<Rotation3> try_rotation_from_to(const UnitVector& initial, const UnitVector& final_dir) {
  const Vec3& uI = initial.vec();
  const Vec3& uF = final_dir.vec();

  const double s0 = uF.x + uI.x;
  const double s1 = uF.y + uI.y;
  const double s2 = uF.z + uI.z;

  const double uFF0 = uF.x + uF.x;
  const double uFF1 = uF.y + uF.y;
  const double uFF2 = uF.z + uF.z;

  // diagonal of 2 uF uI^T
  const double out00 = uFF0 * uI.x;
  const double out11 = uFF1 * uI.y;
  const double out22 = uFF2 * uI.z;
  const double s_dot_s = s0 * s0 + s1 * s1 + s2 * s2;
  if (!(s_dot_s > kAntipodalTolerance)) return std::nullopt;

  const double k = 2.0 / s_dot_s;
  const double out01 = uFF0 * uI.y;
  const double out12 = uFF1 * uI.z;
  const double out20 = uFF2 * uI.x;
  const double out10 = uFF1 * uI.x;
  const double out21 = uFF2 * uI.y;
  const double out02 = uFF0 * uI.z;

  const double ks0 = k * s0;
  const double ks1 = k * s1;
  const double ks2 = k * s2;
  const double ks00 = ks0 * s0;
  const double ks01 = ks0 * s1;
  const double ks11 = ks1 * s1;
  const double ks12 = ks1 * s2;
  const double ks22 = ks2 * s2;
  const double ks20 = ks2 * s0;

  Rotation3 r;
  r.m[0][0] = 1.0 + out00 - ks00;
  r.m[1][1] = 1.0 + out11 - ks11;
  r.m[2][2] = 1.0 + out22 - ks22;
  r.m[0][1] = out01 - ks01;
  r.m[1][2] = out12 - ks12;
  r.m[2][0] = out20 - ks20;
  r.m[1][0] = out10 - ks01;
  r.m[2][1] = out21 - ks12;
  r.m[0][2] = out02 - ks20;
  return r;
}

inline Rotation3 rotation_from_to(const UnitVector& initial, const UnitVector& final_dir) {
  auto r = try_rotation_from_to(initial, final_dir);
  if (!r) throw NumericError("rotation_from_to: antipodal pair, rotation not unique");
  return *r;
}

inline const UnitVector kE3 = UnitVector::unchecked({0.0, 0.0, 1.0});

// Orthonormal basis of v-perp in R^n by Gram-Schmidt, seeded with the n-1
// coordinate axes least aligned with v (stable sort by |v_i|, so ties break
// toward lower indices).
inline std::vector<VecN> orthonormal_complement(const VecN& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(v[a]) < std::abs(v[b]); });
  std::vector<VecN> basis;
  basis.reserve(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    VecN e(n, 0.0);
    e[order[k]] = 1.0;
    // Project out v and previous basis vectors twice for stability.
    for (int pass = 0; pass < 2; ++pass) {
      const double cv = dot(e, v);
      for (std::size_t i = 0; i < n; ++i) e[i] -= cv * v[i];
      for (const auto& b : basis) {
        const double c = dot(e, b);
        for (std::size_t i = 0; i < n; ++i) e[i] -= c * b[i];
      }
    }
    const double len = norm(e);
    for (double& x : e) x /= len;
    basis.push_back(std::move(e));
  }
  return basis;
}

// Random line of L^3_r under normalized kinematic measure: v uniform on S^2,
// p uniform in the radius-r disk of v-perp. The disk point is drawn in
// e3-perp and carried into v-perp by the rotation taking e3 to v; the
// probability-zero draw v = -e3 is redrawn.
inline OrientedLine sample_line(ScalarSource& src, double r) {
  if (!(r > 0.0)) throw InvalidArgument("sample_line: clip radius must be > 0");
  for (;;) {
    const UnitVector v = sample_sphere3(src);
    const auto rot = try_rotation_from_to(kE3, v);
    const auto [a, b] = sample_disk(src, r);
    if (!rot) continue;
    Vec3 p = (*rot) * Vec3{a, b, 0.0};
    return {v, p};
  }
}

// General-dimension version. n = 3 delegates to the rotation construction
// above; other n use a Gram-Schmidt basis of v-perp.
inline LineN sample_line(ScalarSource& src, int n, double r) {
  if (n < 2) throw InvalidArgument("sample_line: dimension must be >= 2");
  if (!(r > 0.0)) throw InvalidArgument("sample_line: clip radius must be > 0");
  if (n == 3) {
    const OrientedLine line = sample_line(src, r);
    return {{line.v[0], line.v[1], line.v[2]}, {line.p.x, line.p.y, line.p.z}};
  }
  LineN line;
  line.v = sample_sphere(src, n);
  VecN disk;
  if (n - 1 == 1) {
    disk = {r * (2.0 * src.next_unit() - 1.0)};
  } else {
    disk = sample_ball(src, n - 1);
    for (double& x : disk) x *= r;
  }
  const auto basis = orthonormal_complement(line.v);
  line.p.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (std::size_t i = 0; i < line.p.size(); ++i) line.p[i] += disk[k] * basis[k][i];
  }
  return line;
}

// Kinematic measure of L^n_r: |S^(n-1)| * kappa_(n-1) * r^(n-1).
inline double kinematic_mass(int n, double r) {
  if (n < 2) throw InvalidArgument("kinematic_mass: dimension must be >= 2");
  if (!(r > 0.0)) throw InvalidArgument("kinematic_mass: clip radius must be > 0");
  return unit_sphere_area(n) * unit_ball_volume(n - 1) * std::pow(r, n - 1);
}

}  // namespace crofton
