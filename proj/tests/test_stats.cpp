#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "crofton/catalog.hpp"
#include "crofton/samplers.hpp"
#include "crofton/stats.hpp"

namespace {

using crofton::RegionTest;
using crofton::ScalarSource;
using crofton::Vec3;

std::vector<double> draw(ScalarSource src, std::size_t n) {
  std::vector<double> out(n);
  for (double& x : out) x = src.next_unit();
  return out;
}

RegionTest<double> interval(double a, double b) {
  return {"[a,b)", [a, b](double x) { return x >= a && x < b; }, b - a};
}

// O(N^2): for every sample point, count strictly below and at-or-below.
double brute_star_discrepancy(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (double a : x) {
    std::size_t below = 0;
    std::size_t at_or_below = 0;
    for (double y : x) {
      below += y < a ? 1 : 0;
      at_or_below += y <= a ? 1 : 0;
    }
    d = std::max({d, static_cast<double>(at_or_below) / n - a, a - static_cast<double>(below) / n});
  }
  return d;
}

TEST(RegionTestOp, UniformHalfInterval) {
  const auto seq = draw(ScalarSource::pseudo(1), 1000000);
  const auto r = crofton::region_test(seq, {interval(0.0, 0.5)});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].pass) << r[0].z;
  EXPECT_EQ(r[0].n, 1000000u);
  EXPECT_NEAR(r[0].z, (static_cast<double>(r[0].count) - 500000.0) / 500.0, 1e-12);
}

TEST(RegionTestOp, ConstantSequenceFails) {
  const std::vector<double> seq(1000, 0.3);
  const auto r = crofton::region_test(seq, {interval(0.0, 0.5), interval(0.5, 1.0)});
  EXPECT_EQ(r[0].count, 1000u);
  EXPECT_FALSE(r[0].pass);
  EXPECT_GT(r[0].z, 30.0);
  EXPECT_EQ(r[1].count, 0u);
  EXPECT_FALSE(r[1].pass);
}

TEST(RegionTestOp, VanDerCorputDyadicBalance) {
  const auto seq = draw(ScalarSource::van_der_corput(2), 1u << 12);
  for (int j = 0; j < 16; ++j) {
    const auto r = crofton::region_test(seq, {interval(j / 16.0, (j + 1) / 16.0)});
    EXPECT_EQ(r[0].count, 256u);
    EXPECT_EQ(r[0].z, 0.0);
  }
}

TEST(RegionTestOp, DegenerateFractionRejected) {
  const std::vector<double> seq{0.1};
  EXPECT_THROW(crofton::region_test(seq, {interval(0.0, 1.0)}), crofton::InvalidArgument);
  EXPECT_THROW(crofton::region_test(seq, {interval(0.5, 0.5)}), crofton::InvalidArgument);
}

TEST(KTupleTest, PseudoPairsPass) {
  const auto seq = draw(ScalarSource::pseudo(2), 1000000);
  const auto r = crofton::ktuple_test(seq, 2, 8);
  EXPECT_TRUE(r.pass) << r.statistic;
  EXPECT_EQ(r.cells, 64u);
  EXPECT_EQ(r.dof, 63.0);
  EXPECT_EQ(r.windows, 999999u);
  EXPECT_NEAR(r.threshold, 103.4424, 1e-3);
}

TEST(KTupleTest, DuplicatedStreamFailsPairsOnly) {
  const auto base = draw(ScalarSource::pseudo(3), 50000);
  std::vector<double> seq;
  for (double x : base) {
    seq.push_back(x);
    seq.push_back(x);
  }
  EXPECT_TRUE(crofton::ktuple_test(seq, 1, 8).pass);
  const auto pairs = crofton::ktuple_test(seq, 2, 8);
  EXPECT_FALSE(pairs.pass);
  EXPECT_GT(pairs.statistic, 10 * pairs.threshold);
}

TEST(KTupleTest, VanDerCorputSinglets) {
  const auto seq = draw(ScalarSource::van_der_corput(2), 1u << 16);
  const auto r = crofton::ktuple_test(seq, 1, 16);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.statistic, 0.0);
}

TEST(KTupleTest, LabelProbabilities) {
  // labels 0,0,1 repeating with probs {2/3, 1/3}: exact singlet fit
  std::vector<std::size_t> labels;
  for (int i = 0; i < 3000; ++i) labels.push_back(i % 3 == 2 ? 1 : 0);
  const std::vector<double> probs{2.0 / 3.0, 1.0 / 3.0};
  EXPECT_NEAR(crofton::label_ktuple_test(labels, probs, 1).statistic, 0.0, 1e-9);
  EXPECT_FALSE(crofton::label_ktuple_test(labels, probs, 2).pass);
}

TEST(KTupleTest, Errors) {
  const std::vector<double> seq(100, 0.5);
  EXPECT_THROW(crofton::ktuple_test(seq, 3, 101), crofton::InvalidArgument);  // 101^3 > 1e6 cells
  EXPECT_THROW(crofton::ktuple_test(seq, 0, 8), crofton::InvalidArgument);
  EXPECT_THROW(crofton::ktuple_test(seq, 1, 1), crofton::InvalidArgument);
  EXPECT_THROW(crofton::ktuple_test(std::vector<double>{1.0}, 1, 8), crofton::InvalidArgument);
}

TEST(KTupleTest, Deterministic) {
  const auto seq = draw(ScalarSource::pseudo(4), 10000);
  const auto a = crofton::ktuple_test(seq, 3, 4);
  const auto b = crofton::ktuple_test(seq, 3, 4);
  EXPECT_EQ(a.statistic, b.statistic);
}

TEST(StarDiscrepancy, SinglePoint) {
  EXPECT_EQ(crofton::star_discrepancy_1d(std::vector<double>{0.5}), 0.5);
  EXPECT_EQ(crofton::star_discrepancy_1d(std::vector<double>{0.0}), 1.0);
}

TEST(StarDiscrepancy, Errors) {
  EXPECT_THROW(crofton::star_discrepancy_1d(std::vector<double>{}), crofton::InvalidArgument);
  EXPECT_THROW(crofton::star_discrepancy_1d(std::vector<double>{0.2, 1.0}), crofton::InvalidArgument);
  EXPECT_THROW(crofton::star_discrepancy_1d(std::vector<double>{-0.1}), crofton::InvalidArgument);
}

TEST(StarDiscrepancy, MatchesBruteForce) {
  auto src = ScalarSource::pseudo(5);
  for (std::size_t n = 1; n <= 512; n += n < 16 ? 1 : 37) {
    std::vector<double> x(n);
    // quantized so ties occur
    for (double& v : x) v = std::floor(src.next_unit() * 64.0) / 64.0;
    ASSERT_EQ(crofton::star_discrepancy_1d(x), brute_star_discrepancy(x)) << n;
    for (double& v : x) v = src.next_unit();
    ASSERT_EQ(crofton::star_discrepancy_1d(x), brute_star_discrepancy(x)) << n;
  }
  const auto rearranged = draw(ScalarSource::van_der_corput_rearranged(), 512);
  EXPECT_EQ(crofton::star_discrepancy_1d(rearranged), brute_star_discrepancy(rearranged));
}

TEST(StarDiscrepancy, VanDerCorputBound) {
  for (int m = 1; m <= 14; ++m) {
    const std::size_t n = std::size_t{1} << m;
    const auto seq = draw(ScalarSource::van_der_corput(2), n);
    EXPECT_LE(crofton::star_discrepancy_1d(seq), (m + 2.0) / static_cast<double>(n));
  }
}

TEST(StarDiscrepancy, RearrangedSequenceIsNotUniform) {
  const auto seq = draw(ScalarSource::van_der_corput_rearranged(), 1u << 14);
  double worst = 0.0;
  for (std::size_t n = 64; n <= seq.size(); n += 64) {
    worst = std::max(worst, crofton::star_discrepancy_1d(std::span<const double>(seq.data(), n)));
  }
  EXPECT_GT(worst, 0.05);
}

std::vector<std::size_t> face_labels(const crofton::CatalogSurface& s, const std::vector<crofton::CloudPoint>& pts) {
  std::vector<std::size_t> labels;
  labels.reserve(pts.size());
  for (const auto& p : pts) labels.push_back(s.face_of(p.position));
  return labels;
}

TEST(DensityVariation, PyramidKinematicIsUniform) {
  const auto s = crofton::catalog_surface("pyramid");
  auto src = ScalarSource::pseudo(6);
  const auto cloud = crofton::cloud_implicit(*s.implicit, src, 100000);
  const auto r = crofton::density_variation(face_labels(s, cloud.points), s.face_areas, 1, 50);
  EXPECT_NEAR(r.ratio, 1.0, 0.05);
  EXPECT_EQ(r.unassigned, 0u);
  EXPECT_GT(r.standard_error, 0.0);
  EXPECT_LT(r.standard_error, 0.05);
}

TEST(DensityVariation, PyramidAxisAlignedIsRootThree) {
  const auto s = crofton::catalog_surface("pyramid");
  auto src = ScalarSource::pseudo(7);
  const auto cloud = crofton::cloud_axis_aligned(*s.implicit, src, 100000);
  const auto r = crofton::density_variation(face_labels(s, cloud.points), s.face_areas, 1, 50);
  EXPECT_NEAR(r.ratio, std::sqrt(3.0), 0.05 * std::sqrt(3.0));
}

TEST(DensityVariation, AxisAlignedOnCoordinatePlaneIsFlat) {
  const crofton::ImplicitSurface disk([](const Vec3& x) { return x.z; }, {}, 1.0);
  auto src = ScalarSource::pseudo(8);
  const auto cloud = crofton::cloud_axis_aligned(disk, src, 100000);
  std::vector<std::size_t> labels;
  for (const auto& p : cloud.points) labels.push_back((p.position.x >= 0 ? 1u : 0u) + (p.position.y >= 0 ? 2u : 0u));
  const std::vector<double> areas(4, std::numbers::pi / 4);
  const auto r = crofton::density_variation(labels, areas, 1, 20);
  EXPECT_NEAR(r.ratio, 1.0, 0.05);
}

TEST(DensityVariation, ExactCountsAndErrors) {
  const std::vector<std::size_t> labels{0, 0, 1, 1, 1, 1, 7};
  const std::vector<double> areas{1.0, 2.0};
  const auto r = crofton::density_variation(labels, areas, 0, 0);
  EXPECT_EQ(r.counts, (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(r.unassigned, 1u);
  EXPECT_EQ(r.ratio, 1.0);
  EXPECT_DOUBLE_EQ(r.densities[0], 2.0 / 7.0);
  EXPECT_THROW(crofton::density_variation(std::vector<std::size_t>{0, 0}, areas), crofton::NumericError);
  EXPECT_THROW(crofton::density_variation(labels, std::vector<double>{}), crofton::InvalidArgument);
}

double cos_product(std::span<const double> x) {
  double p = 1.0;
  for (double v : x) p *= std::cos(v);
  return p;
}

TEST(CurseBenchmark, MidpointRuleOrderTwo) {
  const double truth = std::pow(std::sin(1.0), 6);
  const double e4 = std::abs(crofton::midpoint_rule(cos_product, 6, 4) - truth);
  const double e8 = std::abs(crofton::midpoint_rule(cos_product, 6, 8) - truth);
  EXPECT_NEAR(e4 / e8, 4.0, 0.1);
}

TEST(CurseBenchmark, MonteCarloSlopeAndBias) {
  crofton::BenchConfig cfg;
  cfg.budgets = {100, 1000, 10000, 100000};
  const double truth = std::pow(std::sin(1.0), 6);
  const auto r = crofton::curse_benchmark(cos_product, 6, truth, cfg);
  EXPECT_NEAR(r.mc_slope, -0.5, 0.1);
  std::size_t mc = 0;
  for (const auto& row : r.rows) {
    if (row.method != "monte-carlo") continue;
    ++mc;
    EXPECT_LT(std::abs(row.bias), 3 * row.bias_se) << row.evaluations;
  }
  EXPECT_EQ(mc, 4u);
  // 1e5^(1/6) = 6.8: the grid stops at 6^6
  EXPECT_EQ(r.rows.back().method, "riemann");
  EXPECT_EQ(r.rows.back().evaluations, 46656u);
}

TEST(CurseBenchmark, ConstantIsExact) {
  crofton::BenchConfig cfg;
  cfg.budgets = {100, 1000};
  cfg.seeds = 4;
  const auto r = crofton::curse_benchmark([](std::span<const double>) { return 2.5; }, 3, 2.5, cfg);
  for (const auto& row : r.rows) EXPECT_LE(row.error, 1e-14) << row.method << " " << row.evaluations;
}

TEST(RegressionSlope, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 1, -1, -3};
  EXPECT_DOUBLE_EQ(crofton::regression_slope(x, y), -2.0);
  EXPECT_THROW(crofton::regression_slope(std::vector<double>{1}, std::vector<double>{1}), crofton::InvalidArgument);
}

}  // namespace
