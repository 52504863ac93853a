#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/interval_search.hpp"
#include "crofton/vec.hpp"

namespace crofton {

// splitmix64: add the golden-ratio increment, then two xor-shift-multiply
// rounds and a final xor-shift. Period 2^64.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  std::uint64_t state_;
};

enum class SourceKind { Pseudo, VanDerCorput, VanDerCorputRearranged };

// A stream of scalars in [0, 1). The emitted sequence is a pure function of
// the kind and its seed or radix.
class ScalarSource {
 public:
  static ScalarSource pseudo(std::uint64_t seed) {
    ScalarSource s(SourceKind::Pseudo);
    s.mix_ = SplitMix64(seed);
    s.seed_ = seed;
    return s;
  }

  static ScalarSource van_der_corput(unsigned radix = 2) {
    if (radix < 2) throw InvalidArgument("van_der_corput: radix must be >= 2");
    ScalarSource s(SourceKind::VanDerCorput);
    s.radix_ = radix;
    return s;
  }

  // The binary van der Corput values regrouped so that each block of odd
  // numerators over 2^k comes out in increasing order. Not equidistributed;
  // kept as a negative fixture for the statistics module.
  static ScalarSource van_der_corput_rearranged() {
    ScalarSource s(SourceKind::VanDerCorputRearranged);
    s.radix_ = 2;
    return s;
  }

  SourceKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  unsigned radix() const { return radix_; }

  double next_unit() {
    switch (kind_) {
      case SourceKind::Pseudo:
        return static_cast<double>(mix_() >> 11) * 0x1.0p-53;
      case SourceKind::VanDerCorput:
        return radical_inverse(++index_, radix_);
      case SourceKind::VanDerCorputRearranged:
        return next_rearranged();
    }
    return 0.0;
  }

  double operator()() { return next_unit(); }

  // Radical inverse of n in the given radix: digits of n reflected across
  // the radix point.
  static double radical_inverse(std::uint64_t n, unsigned radix) {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;
    while (n > 0) {
      numerator = numerator * radix + n % radix;
      denominator *= radix;
      n /= radix;
    }
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }

 private:
  explicit ScalarSource(SourceKind kind) : kind_(kind) {}

  double next_rearranged() {
    // block_ k holds the 2^(k-1) odd numerators over 2^k.
    const double value = std::ldexp(static_cast<double>(2 * offset_ + 1), -static_cast<int>(block_));
    if (++offset_ == (std::uint64_t{1} << (block_ - 1))) {
      ++block_;
      offset_ = 0;
    }
    return value;
  }

  SourceKind kind_;
  SplitMix64 mix_{0};
  std::uint64_t seed_ = 0;
  unsigned radix_ = 0;
  std::uint64_t index_ = 0;
  unsigned block_ = 1;
  std::uint64_t offset_ = 0;
};

inline double next_unit(ScalarSource& src) { return src.next_unit(); }

// Axis-aligned box [lows, highs) in R^n.
class BoxDomain {
 public:
  BoxDomain(std::vector<double> lows, std::vector<double> highs)
      : lows_(std::move(lows)), highs_(std::move(highs)) {
    if (lows_.empty() || lows_.size() != highs_.size()) {
      throw InvalidArgument("BoxDomain: lows and highs must be non-empty and the same length");
    }
    for (std::size_t i = 0; i < lows_.size(); ++i) {
      if (!(lows_[i] < highs_[i]) || !std::isfinite(lows_[i]) || !std::isfinite(highs_[i])) {
        throw InvalidArgument("BoxDomain: need finite lows[i] < highs[i] (i=" + std::to_string(i) + ")");
      }
    }
  }

  static BoxDomain cube(std::size_t n, double low, double high) {
    return BoxDomain(std::vector<double>(n, low), std::vector<double>(n, high));
  }

  std::size_t dim() const { return lows_.size(); }
  double low(std::size_t i) const { return lows_[i]; }
  double high(std::size_t i) const { return highs_[i]; }

  double volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= highs_[i] - lows_[i];
    return v;
  }

 private:
  std::vector<double> lows_;
  std::vector<double> highs_;
};

// Consumes exactly dom.dim() scalars.
inline void sample_box(ScalarSource& src, const BoxDomain& dom, std::span<double> out) {
  for (std::size_t i = 0; i < dom.dim(); ++i) {
    out[i] = dom.low(i) + (dom.high(i) - dom.low(i)) * src.next_unit();
  }
}

inline VecN sample_box(ScalarSource& src, const BoxDomain& dom) {
  VecN out(dom.dim());
  sample_box(src, dom, out);
  return out;
}

inline constexpr std::size_t kDefaultRejectionCap = 10000;

template <class Point>
struct RejectionSample {
  Point point;
  std::size_t rejections = 0;
};

// Draws candidates until `accept` holds. Throws NumericError once
// `max_attempts` candidates have been rejected.
template <class Draw, class Accept>
auto sample_rejection(Draw&& draw, Accept&& accept, std::size_t max_attempts = kDefaultRejectionCap)
    -> RejectionSample<std::decay_t<decltype(draw())>> {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    auto candidate = draw();
    if (accept(std::as_const(candidate))) return {std::move(candidate), attempt};
  }
  throw NumericError("sample_rejection: no candidate accepted after " + std::to_string(max_attempts) +
                     " attempts");
}

template <class Accept>
RejectionSample<VecN> sample_rejection(ScalarSource& src, const BoxDomain& dom, Accept&& accept,
                                       std::size_t max_attempts = kDefaultRejectionCap) {
  return sample_rejection([&] { return sample_box(src, dom); }, std::forward<Accept>(accept), max_attempts);
}

template <class Point>
struct UnionPart {
  double weight = 0.0;
  std::function<Point(ScalarSource&)> sampler;
};

template <class Point>
struct UnionSample {
  Point point;
  std::size_t part = 0;
};

// Picks part l with probability weight_l / sum(weights) from one scalar, then
// delegates to that part's sampler.
template <class Point>
UnionSample<Point> sample_union(ScalarSource& src, std::span<const UnionPart<Point>> parts) {
  std::vector<double> cumulative;
  cumulative.reserve(parts.size());
  double total = 0.0;
  for (const auto& part : parts) {
    if (!(part.weight >= 0.0) || !std::isfinite(part.weight)) {
      throw InvalidArgument("sample_union: weights must be finite and >= 0");
    }
    total += part.weight;
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw InvalidArgument("sample_union: all weights are zero");
  const double x = total * src.next_unit();
  const std::size_t l = find_interval(cumulative, std::min(x, std::nextafter(total, 0.0)));
  return {parts[l].sampler(src), l};
}

template <class Point>
UnionSample<Point> sample_union(ScalarSource& src, const std::vector<UnionPart<Point>>& parts) {
  return sample_union<Point>(src, std::span<const UnionPart<Point>>(parts));
}

// Volume of the unit n-ball, pi^(n/2) / Gamma(n/2 + 1).
inline double unit_ball_volume(int n) {
  if (n < 0) throw InvalidArgument("unit_ball_volume: negative dimension");
  if (n == 0) return 1.0;
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Surface measure of S^(n-1), which is n times the unit ball volume.
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

// Two independent standard normal deviates by the Marsaglia polar method.
inline std::pair<double, double> sample_normal_pair(ScalarSource& src) {
  struct Candidate {
    double u, v, s;
  };
  const auto sample = sample_rejection(
      [&] {
        const double u = 2.0 * src.next_unit() - 1.0;
        const double v = 2.0 * src.next_unit() - 1.0;
        return Candidate{u, v, u * u + v * v};
      },
      [](const Candidate& c) { return c.s > 0.0 && c.s < 1.0; });
  const auto& c = sample.point;
  const double factor = std::sqrt(-2.0 * std::log(c.s) / c.s);
  return {c.u * factor, c.v * factor};
}

// Dimension from which the ball and sphere samplers switch from cube
// rejection to the Gaussian construction.
inline constexpr int kGaussianRouteDim = 5;

inline VecN sample_sphere(ScalarSource& src, int n);

// Uniform point of the open punctured unit ball 0 < |x| < 1 in R^n.
inline VecN sample_ball(ScalarSource& src, int n) {
  if (n < 1) throw InvalidArgument("sample_ball: dimension must be >= 1");
  if (n < kGaussianRouteDim) {
    const auto cube = BoxDomain::cube(static_cast<std::size_t>(n), -1.0, 1.0);
    return sample_rejection(src, cube, [](const VecN& x) {
             const double r2 = dot(x, x);
             return r2 > 0.0 && r2 < 1.0;
           }).point;
  }
  for (;;) {
    VecN x = sample_sphere(src, n);
    const double scale = std::pow(src.next_unit(), 1.0 / n);
    if (scale == 0.0) continue;
    for (double& xi : x) xi *= scale;
    return x;
  }
}

// Uniform point of S^(n-1).
inline VecN sample_sphere(ScalarSource& src, int n) {
  if (n < 2) throw InvalidArgument("sample_sphere: dimension must be >= 2");
  VecN x;
  if (n < kGaussianRouteDim) {
    x = sample_ball(src, n);
  } else {
    x.resize(static_cast<std::size_t>(n));
    do {
      for (int i = 0; i < n; i += 2) {
        const auto [a, b] = sample_normal_pair(src);
        x[static_cast<std::size_t>(i)] = a;
        if (i + 1 < n) x[static_cast<std::size_t>(i + 1)] = b;
      }
    } while (dot(x, x) == 0.0);
  }
  const double len = norm(x);
  for (double& xi : x) xi /= len;
  return x;
}

// Uniform direction on S^2 by cube rejection and normalization; the
// allocation-free specialization of sample_sphere(src, 3).
inline UnitVector sample_sphere3(ScalarSource& src) {
  const auto sample = sample_rejection(
      [&] {
        return Vec3{2.0 * src.next_unit() - 1.0, 2.0 * src.next_unit() - 1.0, 2.0 * src.next_unit() - 1.0};
      },
      [](const Vec3& x) {
        const double r2 = dot(x, x);
        return r2 > 0.0 && r2 < 1.0;
      });
  return UnitVector::unchecked(sample.point / norm(sample.point));
}

// Uniform point of the open disk of the given radius in R^2.
inline std::pair<double, double> sample_disk(ScalarSource& src, double radius) {
  const auto sample = sample_rejection(
      [&] { return std::pair{2.0 * src.next_unit() - 1.0, 2.0 * src.next_unit() - 1.0}; },
      [](const std::pair<double, double>& p) { return p.first * p.first + p.second * p.second < 1.0; });
  return {radius * sample.point.first, radius * sample.point.second};
}

}  // namespace crofton
