#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "crofton/error.hpp"

namespace crofton {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

// Direction on S^2. Construction checks ||v|| = 1 within 1e-12.
class UnitVector {
 public:
  static constexpr double kTolerance = 1e-12;

  UnitVector() = default;

  explicit UnitVector(const Vec3& v) : v_(v) {
    if (std::abs(norm(v) - 1.0) > kTolerance) {
      throw InvalidArgument("UnitVector: vector is not unit length");
    }
  }

  // Normalizes v. Throws on zero or non-finite input.
  static UnitVector normalized(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw NumericError("UnitVector: cannot normalize a zero or non-finite vector");
    }
    UnitVector u;
    u.v_ = v / n;
    return u;
  }

  // For callers that have already produced a unit vector (negation, rotation
  // of a unit vector). No check.
  static UnitVector unchecked(const Vec3& v) {
    UnitVector u;
    u.v_ = v;
    return u;
  }

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

  friend bool operator==(const UnitVector&, const UnitVector&) = default;

 private:
  Vec3 v_{0.0, 0.0, 1.0};
};

inline UnitVector operator-(const UnitVector& u) { return UnitVector::unchecked(-u.vec()); }

// n-dimensional helpers for the general line-space machinery.
using VecN = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace crofton
