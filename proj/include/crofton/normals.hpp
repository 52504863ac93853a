#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/rng.hpp"
#include "crofton/surfaces.hpp"
#include "crofton/vec.hpp"

namespace crofton {

// Unit normal of an implicit surface: the normalized gradient.
inline UnitVector normal_implicit(const ImplicitSurface& s, const Vec3& x) {
  const Vec3 g = s.gradient_at(x);
  const double len = norm(g);
  if (!(len >= 1e-8) || !std::isfinite(len)) throw NumericError("normal_implicit: critical point");
  return UnitVector::unchecked(g / len);
}

// Orthonormal e1, e2 completing nu, by Gram-Schmidt from the two coordinate
// axes least aligned with nu.
inline std::pair<UnitVector, UnitVector> tangent_frame(const UnitVector& nu) {
  const Vec3& n = nu.vec();
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(n[a]) < std::abs(n[b]); });
  auto project = [&](Vec3 f, const Vec3* e1) {
    for (int pass = 0; pass < 2; ++pass) {
      f -= dot(f, n) * n;
      if (e1) f -= dot(f, *e1) * *e1;
    }
    return f / norm(f);
  };
  Vec3 f1;
  f1[order[0]] = 1.0;
  Vec3 f2;
  f2[order[1]] = 1.0;
  const Vec3 e1 = project(f1, nullptr);
  const Vec3 e2 = project(f2, &e1);
  return {UnitVector::unchecked(e1), UnitVector::unchecked(e2)};
}

struct Neighbor {
  std::size_t index = 0;
  double dist2 = 0.0;
};

// Uniform-grid spatial hash over a fixed point set for k-nearest-neighbor
// queries. Ties in distance go to the lower index.
class NeighborIndex {
 public:
  explicit NeighborIndex(std::vector<Vec3> points) : points_(std::move(points)) {
    if (points_.empty()) throw InvalidArgument("NeighborIndex: no points");
    lo_ = hi_ = points_[0];
    for (const auto& p : points_) {
      if (!is_finite(p)) throw InvalidArgument("NeighborIndex: non-finite point");
      for (std::size_t a = 0; a < 3; ++a) {
        lo_[a] = std::min(lo_[a], p[a]);
        hi_[a] = std::max(hi_[a], p[a]);
      }
    }
    h_ = cell_size();
    for (std::size_t a = 0; a < 3; ++a) {
      dims_[a] = static_cast<std::size_t>(std::floor((hi_[a] - lo_[a]) / h_)) + 1;
    }
    const std::size_t cells = dims_[0] * dims_[1] * dims_[2];
    start_.assign(cells + 1, 0);
    std::vector<std::size_t> cell_of(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      cell_of[i] = linear(cell_coords(points_[i]));
      ++start_[cell_of[i] + 1];
    }
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    items_.resize(points_.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < points_.size(); ++i) items_[fill[cell_of[i]]++] = i;
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<Vec3>& points() const { return points_; }
  double cell_width() const { return h_; }

  // The k nearest points to q, ascending by (distance, index), skipping
  // index `exclude` when given. Returns fewer than k only if the set is
  // too small.
  std::vector<Neighbor> nearest(const Vec3& q, std::size_t k,
                                std::optional<std::size_t> exclude = std::nullopt) const {
    std::vector<Neighbor> found;
    const std::size_t available = points_.size() - (exclude && *exclude < points_.size() ? 1 : 0);
    k = std::min(k, available);
    if (k == 0) return found;
    const auto c = cell_coords(q);
    const std::size_t max_ring = std::max({dims_[0], dims_[1], dims_[2]});
    for (std::size_t ring = 0;; ++ring) {
      visit_shell(c, ring, [&](std::size_t cell) {
        for (std::size_t s = start_[cell]; s < start_[cell + 1]; ++s) {
          const std::size_t i = items_[s];
          if (exclude && i == *exclude) continue;
          const Vec3 d = points_[i] - q;
          found.push_back({i, dot(d, d)});
        }
      });
      if (found.size() >= k) {
        std::sort(found.begin(), found.end(), less);
        // Points outside the scanned block are farther than ring * h from q.
        const double safe = static_cast<double>(ring) * h_;
        if (found[k - 1].dist2 <= safe * safe || ring >= max_ring) break;
      } else if (ring >= max_ring) {
        break;
      }
    }
    found.resize(k);
    return found;
  }

  std::vector<Neighbor> nearest_to(std::size_t i, std::size_t k) const { return nearest(points_.at(i), k, i); }

  static bool less(const Neighbor& a, const Neighbor& b) {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
  }

 private:
  // (box volume / N)^(1/3), falling back to the box's lower-dimensional
  // measure when it is flat in some direction.
  double cell_size() const {
    const double n = static_cast<double>(points_.size());
    std::vector<double> extents;
    double largest = 0.0;
    for (std::size_t a = 0; a < 3; ++a) largest = std::max(largest, hi_[a] - lo_[a]);
    if (largest == 0.0) return 1.0;
    for (std::size_t a = 0; a < 3; ++a) {
      const double e = hi_[a] - lo_[a];
      if (e > 1e-9 * largest) extents.push_back(e);
    }
    double measure = 1.0;
    for (double e : extents) measure *= e;
    double h = std::pow(measure / n, 1.0 / static_cast<double>(extents.size()));
    // keep the cell count within a small multiple of N
    for (;;) {
      double cells = 1.0;
      for (std::size_t a = 0; a < 3; ++a) cells *= std::floor((hi_[a] - lo_[a]) / h) + 1.0;
      if (cells <= 8.0 * n + 64.0) break;
      h *= 1.5;
    }
    return h;
  }

  std::array<std::size_t, 3> cell_coords(const Vec3& p) const {
    std::array<std::size_t, 3> c{};
    for (std::size_t a = 0; a < 3; ++a) {
      const double f = std::floor((p[a] - lo_[a]) / h_);
      c[a] = f <= 0.0 ? 0 : std::min(static_cast<std::size_t>(f), dims_[a] - 1);
    }
    return c;
  }

  std::size_t linear(const std::array<std::size_t, 3>& c) const { return (c[0] * dims_[1] + c[1]) * dims_[2] + c[2]; }

  // Calls f on every cell at Chebyshev distance exactly `ring` from c.
  template <class F>
  void visit_shell(const std::array<std::size_t, 3>& c, std::size_t ring, F&& f) const {
    const auto r = static_cast<long>(ring);
    std::array<long, 3> lo{};
    std::array<long, 3> hi{};
    for (std::size_t a = 0; a < 3; ++a) {
      lo[a] = std::max(0L, static_cast<long>(c[a]) - r);
      hi[a] = std::min(static_cast<long>(dims_[a]) - 1, static_cast<long>(c[a]) + r);
    }
    for (long x = lo[0]; x <= hi[0]; ++x) {
      for (long y = lo[1]; y <= hi[1]; ++y) {
        for (long z = lo[2]; z <= hi[2]; ++z) {
          const long dx = std::abs(x - static_cast<long>(c[0]));
          const long dy = std::abs(y - static_cast<long>(c[1]));
          const long dz = std::abs(z - static_cast<long>(c[2]));
          if (std::max({dx, dy, dz}) != r) continue;
          f(linear({static_cast<std::size_t>(x), static_cast<std::size_t>(y), static_cast<std::size_t>(z)}));
        }
      }
    }
  }

  std::vector<Vec3> points_;
  Vec3 lo_;
  Vec3 hi_;
  double h_ = 1.0;
  std::array<std::size_t, 3> dims_{1, 1, 1};
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

inline constexpr std::size_t kDefaultNeighbors = 12;
inline constexpr std::size_t kDefaultPairs = 8;

// Normal at point i of a bare cloud: normalized cross products
// (q - p) x (r - p) over q pseudo-random distinct pairs of its k nearest
// neighbors, each flipped to agree with the first usable one, then
// averaged with weight sin(angle between q - p and r - p), so nearly
// collinear pairs count little. Locally consistent only; the global sign
// is arbitrary.
inline UnitVector normal_cloud(const NeighborIndex& index, std::size_t i, std::size_t k = kDefaultNeighbors,
                               std::size_t q = kDefaultPairs, std::uint64_t seed = 0) {
  if (k < 2) throw InvalidArgument("normal_cloud: k must be >= 2");
  if (q < 1) throw InvalidArgument("normal_cloud: need at least one pair");
  if (index.size() < k + 1) throw InvalidArgument("normal_cloud: cloud has fewer than k + 1 points");
  const Vec3& p = index.points().at(i);
  const auto nb = index.nearest_to(i, k);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) pairs.emplace_back(a, b);
  }
  q = std::min(q, pairs.size());
  // partial Fisher-Yates with a stream fixed by (seed, i)
  auto src = ScalarSource::pseudo(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 1)));
  for (std::size_t s = 0; s < q; ++s) {
    const std::size_t remaining = pairs.size() - s;
    const std::size_t pick = s + std::min(static_cast<std::size_t>(src.next_unit() * static_cast<double>(remaining)),
                                          remaining - 1);
    std::swap(pairs[s], pairs[pick]);
  }

  Vec3 sum;
  std::optional<Vec3> reference;
  for (std::size_t s = 0; s < q; ++s) {
    const Vec3 a = index.points()[nb[pairs[s].first].index] - p;
    const Vec3 b = index.points()[nb[pairs[s].second].index] - p;
    Vec3 c = cross(a, b);
    const double len = norm(c);
    if (!(len > 1e-12 * norm(a) * norm(b)) || len == 0.0) continue;
    c = c / (norm(a) * norm(b));  // unit normal weighted by sin of the pair angle
    if (!reference) {
      reference = c;
    } else if (dot(c, *reference) < 0.0) {
      c = -c;
    }
    sum += c;
  }
  const double len = norm(sum);
  if (!reference || !(len > 0.0)) throw NumericError("normal_cloud: degenerate neighborhood");
  return UnitVector::unchecked(sum / len);
}

// normal_cloud at every point, with one shared index.
inline std::vector<UnitVector> normals_cloud(const NeighborIndex& index, std::size_t k = kDefaultNeighbors,
                                             std::size_t q = kDefaultPairs, std::uint64_t seed = 0) {
  std::vector<UnitVector> out;
  out.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) out.push_back(normal_cloud(index, i, k, q, seed));
  return out;
}

}  // namespace crofton
