#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "crofton/error.hpp"
#include "crofton/rng.hpp"

namespace crofton {

// A region of X with its analytic share of the measure.
template <class T>
struct RegionTest {
  std::string name;
  std::function<bool(const T&)> contains;
  double fraction = 0.0;
};

struct RegionResult {
  std::string name;
  std::size_t count = 0;
  std::size_t n = 0;
  double fraction = 0.0;
  double z = 0.0;
  bool pass = false;
};

inline constexpr double kZThreshold = 3.0;

// z = (count - N p) / sqrt(N p (1 - p)) per region; pass when |z| < 3.
template <class T>
std::vector<RegionResult> region_test(std::span<const T> seq, const std::vector<RegionTest<T>>& tests) {
  std::vector<RegionResult> out;
  out.reserve(tests.size());
  for (const auto& t : tests) {
    if (!(t.fraction > 0.0 && t.fraction < 1.0)) {
      throw InvalidArgument("region_test: fraction of '" + t.name + "' must lie in (0, 1)");
    }
    RegionResult r;
    r.name = t.name;
    r.n = seq.size();
    r.fraction = t.fraction;
    for (const auto& x : seq) r.count += t.contains(x) ? 1 : 0;
    const double n = static_cast<double>(r.n);
    const double sd = std::sqrt(n * t.fraction * (1.0 - t.fraction));
    const double diff = static_cast<double>(r.count) - n * t.fraction;
    r.z = sd > 0.0 ? diff / sd : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
    r.pass = std::abs(r.z) < kZThreshold;
    out.push_back(r);
  }
  return out;
}

template <class T>
std::vector<RegionResult> region_test(const std::vector<T>& seq, const std::vector<RegionTest<T>>& tests) {
  return region_test(std::span<const T>(seq), tests);
}

struct ChiSquareResult {
  std::size_t k = 0;
  std::size_t cells = 0;
  std::size_t windows = 0;
  double statistic = 0.0;
  double dof = 0.0;
  double threshold = 0.0;  // 99.9th percentile
  bool pass = false;
};

inline constexpr std::size_t kMaxTupleCells = 1000000;
inline constexpr double kChiSquareLevel = 0.999;

inline double chi_square_quantile(double dof, double p) {
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), p);
}

// Pearson statistic of overlapping windows (l_n, ..., l_{n+k-1}) of a label
// sequence against independent cells with label probabilities `probs`.
// Compared with the chi-square quantile at g^k - 1 degrees of freedom.
inline ChiSquareResult label_ktuple_test(std::span<const std::size_t> labels, std::span<const double> probs,
                                         std::size_t k) {
  if (k < 1) throw InvalidArgument("ktuple_test: k must be >= 1");
  const std::size_t g = probs.size();
  if (g < 2) throw InvalidArgument("ktuple_test: need at least two cells");
  std::size_t cells = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (cells > kMaxTupleCells / g) throw InvalidArgument("ktuple_test: g^k exceeds the 10^6 cell budget");
    cells *= g;
  }
  if (labels.size() < k) throw InvalidArgument("ktuple_test: sequence shorter than k");
  for (double p : probs) {
    if (!(p > 0.0)) throw InvalidArgument("ktuple_test: cell probabilities must be > 0");
  }
  std::vector<std::uint64_t> counts(cells, 0);
  const std::size_t windows = labels.size() - k + 1;
  for (std::size_t n = 0; n < windows; ++n) {
    std::size_t cell = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t l = labels[n + j];
      if (l >= g) throw InvalidArgument("ktuple_test: label out of range");
      cell = cell * g + l;
    }
    ++counts[cell];
  }
  double stat = 0.0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    double p = 1.0;
    for (std::size_t c = cell, j = 0; j < k; ++j, c /= g) p *= probs[c % g];
    const double expected = static_cast<double>(windows) * p;
    const double d = static_cast<double>(counts[cell]) - expected;
    stat += d * d / expected;
  }
  ChiSquareResult r;
  r.k = k;
  r.cells = cells;
  r.windows = windows;
  r.statistic = stat;
  r.dof = static_cast<double>(cells - 1);
  r.threshold = chi_square_quantile(r.dof, kChiSquareLevel);
  r.pass = stat <= r.threshold;
  return r;
}

// k-tuple test of a [0,1) sequence on the g^k grid of [0,1)^k.
inline ChiSquareResult ktuple_test(std::span<const double> seq, std::size_t k, std::size_t g) {
  if (g < 2) throw InvalidArgument("ktuple_test: grid resolution must be >= 2");
  std::vector<std::size_t> labels(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const double x = seq[i];
    if (!(x >= 0.0 && x < 1.0)) throw InvalidArgument("ktuple_test: values must lie in [0, 1)");
    labels[i] = std::min(static_cast<std::size_t>(x * static_cast<double>(g)), g - 1);
  }
  const std::vector<double> probs(g, 1.0 / static_cast<double>(g));
  return label_ktuple_test(labels, probs, k);
}

// sup over a of |#{x_i < a}/N - a|, from the sorted sample:
//   max_i max(i/N - x_(i), x_(i) - (i-1)/N).
inline double star_discrepancy_1d(std::span<const double> seq) {
  if (seq.empty()) throw InvalidArgument("star_discrepancy_1d: empty sequence");
  std::vector<double> x(seq.begin(), seq.end());
  for (double v : x) {
    if (!(v >= 0.0 && v < 1.0)) throw InvalidArgument("star_discrepancy_1d: values must lie in [0, 1)");
  }
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - x[i];
    const double below = x[i] - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

struct DensityResult {
  std::vector<std::size_t> counts;
  std::vector<double> densities;  // count / (N * bin area)
  double ratio = 0.0;             // max / min density
  double standard_error = 0.0;    // bootstrap
  std::size_t unassigned = 0;
};

inline constexpr std::size_t kBootstrapResamples = 200;

namespace detail {

inline double density_ratio(std::span<const std::size_t> counts, std::span<const double> areas) {
  double lo = INFINITY;
  double hi = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const double d = static_cast<double>(counts[b]) / areas[b];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi / lo;
}

}  // namespace detail

// Local density per bin (labels index `areas`; labels >= areas.size() are
// points outside every bin) and the max/min ratio with a bootstrap SE.
inline DensityResult density_variation(std::span<const std::size_t> labels, std::span<const double> areas,
                                       std::uint64_t seed = 0, std::size_t resamples = kBootstrapResamples) {
  if (areas.empty()) throw InvalidArgument("density_variation: no bins");
  for (double a : areas) {
    if (!(a > 0.0)) throw InvalidArgument("density_variation: bin areas must be > 0");
  }
  DensityResult r;
  r.counts.assign(areas.size(), 0);
  std::vector<std::size_t> assigned;
  assigned.reserve(labels.size());
  for (std::size_t l : labels) {
    if (l < areas.size()) {
      ++r.counts[l];
      assigned.push_back(l);
    } else {
      ++r.unassigned;
    }
  }
  for (std::size_t b = 0; b < areas.size(); ++b) {
    if (r.counts[b] == 0) {
      throw NumericError("density_variation: bin " + std::to_string(b) + " is empty; use more points");
    }
  }
  const double n = static_cast<double>(labels.size());
  for (std::size_t b = 0; b < areas.size(); ++b) r.densities.push_back(static_cast<double>(r.counts[b]) / (n * areas[b]));
  r.ratio = detail::density_ratio(r.counts, areas);

  if (resamples > 1 && !assigned.empty()) {
    // Resample all N points; outside points only shrink the bins together.
    auto src = ScalarSource::pseudo(seed);
    double sum = 0.0;
    double sum2 = 0.0;
    std::size_t used = 0;
    std::vector<std::size_t> counts(areas.size());
    for (std::size_t rep = 0; rep < resamples; ++rep) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto j = std::min(static_cast<std::size_t>(src.next_unit() * n), labels.size() - 1);
        if (labels[j] < areas.size()) ++counts[labels[j]];
      }
      if (std::find(counts.begin(), counts.end(), 0) != counts.end()) continue;
      const double q = detail::density_ratio(counts, areas);
      sum += q;
      sum2 += q * q;
      ++used;
    }
    if (used > 1) {
      const double mean = sum / static_cast<double>(used);
      r.standard_error = std::sqrt(std::max(0.0, (sum2 - static_cast<double>(used) * mean * mean) /
                                                     static_cast<double>(used - 1)));
    }
  }
  return r;
}

struct BenchRow {
  std::string method;  // "monte-carlo" or "riemann"
  std::size_t evaluations = 0;
  double error = 0.0;  // RMS over seeds (Monte Carlo) or absolute (Riemann)
  double bias = 0.0;   // Monte Carlo: mean of estimate - truth
  double bias_se = 0.0;
};

struct BenchResult {
  int dim = 0;
  double truth = 0.0;
  std::vector<BenchRow> rows;
  double mc_slope = 0.0;  // least-squares slope of log RMS error vs log N
};

struct BenchConfig {
  std::vector<std::size_t> budgets{100, 1000, 10000, 100000, 1000000};
  std::size_t seeds = 32;
  std::uint64_t seed = 0;
};

// Least-squares slope of y on x.
inline double regression_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("regression_slope: need >= 2 paired values");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Midpoint rule on the k^n grid of [0,1]^n.
template <class F>
double midpoint_rule(F&& f, int dim, std::size_t k) {
  if (dim < 1 || k < 1) throw InvalidArgument("midpoint_rule: need dim >= 1 and k >= 1");
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> x(static_cast<std::size_t>(dim));
  const double h = 1.0 / static_cast<double>(k);
  double sum = 0.0;
  for (;;) {
    for (std::size_t i = 0; i < idx.size(); ++i) x[i] = (static_cast<double>(idx[i]) + 0.5) * h;
    sum += f(std::span<const double>(x));
    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == k) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  return sum * std::pow(h, dim);
}

// Monte Carlo (mean of f over N uniform points, several seeds) against the
// midpoint rule on the largest k^n grid within each budget.
template <class F>
BenchResult curse_benchmark(F&& f, int dim, double truth, const BenchConfig& cfg = {}) {
  if (dim < 1) throw InvalidArgument("curse_benchmark: dim must be >= 1");
  if (cfg.seeds < 2) throw InvalidArgument("curse_benchmark: need at least two seeds");
  BenchResult out;
  out.dim = dim;
  out.truth = truth;
  std::vector<double> x(static_cast<std::size_t>(dim));
  std::vector<double> log_n;
  std::vector<double> log_err;
  for (std::size_t budget : cfg.budgets) {
    double sq = 0.0;
    double sum = 0.0;
    for (std::size_t s = 0; s < cfg.seeds; ++s) {
      auto src = ScalarSource::pseudo(cfg.seed + s);
      double acc = 0.0;
      for (std::size_t i = 0; i < budget; ++i) {
        for (double& c : x) c = src.next_unit();
        acc += f(std::span<const double>(x));
      }
      const double e = acc / static_cast<double>(budget) - truth;
      sq += e * e;
      sum += e;
    }
    const double m = static_cast<double>(cfg.seeds);
    BenchRow row;
    row.method = "monte-carlo";
    row.evaluations = budget;
    row.error = std::sqrt(sq / m);
    row.bias = sum / m;
    row.bias_se = std::sqrt(std::max(0.0, (sq - m * row.bias * row.bias) / (m - 1.0)) / m);
    out.rows.push_back(row);
    if (row.error > 0.0) {
      log_n.push_back(std::log(static_cast<double>(budget)));
      log_err.push_back(std::log(row.error));
    }
  }
  for (std::size_t budget : cfg.budgets) {
    auto k = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(budget), 1.0 / dim) + 1e-9));
    if (k < 1) continue;
    std::size_t evals = 1;
    for (int d = 0; d < dim; ++d) evals *= k;
    BenchRow row;
    row.method = "riemann";
    row.evaluations = evals;
    row.error = std::abs(midpoint_rule(f, dim, k) - truth);
    out.rows.push_back(row);
  }
  out.mc_slope = log_n.size() >= 2 ? regression_slope(log_n, log_err) : 0.0;
  return out;
}

}  // namespace crofton
