#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "crofton/geometry.hpp"
#include "crofton/rng.hpp"
#include "test_support.hpp"

namespace {

using crofton::BoxDomain;
using crofton::ScalarSource;
using crofton::VecN;
using crofton::testing::binomial_z;

TEST(SplitMix64, MatchesReferenceOutputs) {
  crofton::SplitMix64 gen(0);
  EXPECT_EQ(gen(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(gen(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(gen(), 0x06c45d188009454fULL);

  auto src = ScalarSource::pseudo(7);
  EXPECT_EQ(src.next_unit(), 0.3898297483912715);
  EXPECT_EQ(src.next_unit(), 0.01678829452815611);
}

TEST(ScalarSource, VanDerCorputBinaryPrefix) {
  const std::array<double, 15> expected{1.0 / 2,  1.0 / 4,   3.0 / 4,  1.0 / 8,   5.0 / 8,
                                        3.0 / 8,  7.0 / 8,   1.0 / 16, 9.0 / 16,  5.0 / 16,
                                        13.0 / 16, 3.0 / 16, 11.0 / 16, 7.0 / 16, 15.0 / 16};
  auto src = ScalarSource::van_der_corput(2);
  for (double e : expected) EXPECT_EQ(src.next_unit(), e);
}

TEST(ScalarSource, VanDerCorputRadixThree) {
  auto src = ScalarSource::van_der_corput(3);
  const std::array<double, 5> expected{1.0 / 3, 2.0 / 3, 1.0 / 9, 4.0 / 9, 7.0 / 9};
  for (double e : expected) EXPECT_DOUBLE_EQ(src.next_unit(), e);
  EXPECT_THROW(ScalarSource::van_der_corput(1), crofton::InvalidArgument);
}

TEST(ScalarSource, RearrangedOrder) {
  auto src = ScalarSource::van_der_corput_rearranged();
  const std::array<double, 15> expected{1.0 / 2,  1.0 / 4,  3.0 / 4,  1.0 / 8,   3.0 / 8,
                                        5.0 / 8,  7.0 / 8,  1.0 / 16, 3.0 / 16,  5.0 / 16,
                                        7.0 / 16, 9.0 / 16, 11.0 / 16, 13.0 / 16, 15.0 / 16};
  for (double e : expected) EXPECT_EQ(src.next_unit(), e);
}

TEST(ScalarSource, PseudoIsReproducible) {
  auto a = ScalarSource::pseudo(12345);
  auto b = ScalarSource::pseudo(12345);
  auto c = ScalarSource::pseudo(12346);
  bool any_diff = false;
  for (int i = 0; i < 1000000; ++i) {
    const double x = a.next_unit();
    ASSERT_EQ(x, b.next_unit());
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    any_diff |= (x != c.next_unit());
  }
  EXPECT_TRUE(any_diff);
}

// |count/N - (b - a)| < 0.02 for every dyadic [a, b) up to level 8.
void expect_dyadic_balance(ScalarSource src) {
  constexpr int kN = 1 << 14;
  std::vector<double> xs(kN);
  for (double& x : xs) x = src.next_unit();
  for (int level = 1; level <= 8; ++level) {
    const int cells = 1 << level;
    std::vector<int> counts(static_cast<std::size_t>(cells), 0);
    for (double x : xs) ++counts[static_cast<std::size_t>(x * cells)];
    for (int c : counts) {
      EXPECT_LT(std::abs(static_cast<double>(c) / kN - 1.0 / cells), 0.02) << "level " << level;
    }
  }
}

TEST(ScalarSource, OneEquidistributedOnDyadicIntervals) {
  expect_dyadic_balance(ScalarSource::van_der_corput(2));
  expect_dyadic_balance(ScalarSource::pseudo(99));
}

TEST(ScalarSource, RearrangedFailsHalfIntervalByBruteForce) {
  auto src = ScalarSource::van_der_corput_rearranged();
  int below = 0;
  double worst = 0.0;
  for (int n = 1; n <= (1 << 14); ++n) {
    if (src.next_unit() < 0.5) ++below;
    worst = std::max(worst, std::abs(static_cast<double>(below) / n - 0.5));
  }
  EXPECT_GT(worst, 0.05);
}

TEST(SampleBox, AffineMapOfScalars) {
  // VanDerCorput(2) yields 1/2, 1/4, 3/4, ...
  auto src = ScalarSource::van_der_corput(2);
  EXPECT_EQ(crofton::sample_box(src, BoxDomain({-1.0}, {1.0}))[0], 0.0);
  EXPECT_EQ(crofton::sample_box(src, BoxDomain({0.0, 0.0}, {1.0, 1.0})), (VecN{0.25, 0.75}));

  auto quarter = ScalarSource::van_der_corput(2);
  quarter.next_unit();
  EXPECT_EQ(crofton::sample_box(quarter, BoxDomain({2.0}, {4.0}))[0], 2.5);

  auto a = ScalarSource::pseudo(2);
  auto b = ScalarSource::pseudo(2);
  const auto dom = BoxDomain({-1.0, 0.0, 3.0}, {1.0, 0.5, 7.0});
  const auto x = crofton::sample_box(a, dom);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(x[i], dom.low(i) + (dom.high(i) - dom.low(i)) * b.next_unit());
}

TEST(SampleBox, ConsumesExactlyDimScalars) {
  auto a = ScalarSource::pseudo(3);
  auto b = ScalarSource::pseudo(3);
  crofton::sample_box(a, BoxDomain::cube(5, 0.0, 1.0));
  for (int i = 0; i < 5; ++i) b.next_unit();
  EXPECT_EQ(a.next_unit(), b.next_unit());
}

TEST(BoxDomain, RejectsInvalidBounds) {
  EXPECT_THROW(BoxDomain({1.0}, {1.0}), crofton::InvalidArgument);
  EXPECT_THROW(BoxDomain({0.0, 2.0}, {1.0, 1.0}), crofton::InvalidArgument);
  EXPECT_THROW(BoxDomain({0.0}, {1.0, 1.0}), crofton::InvalidArgument);
  EXPECT_THROW(BoxDomain({}, {}), crofton::InvalidArgument);
}

TEST(SampleRejection, AlwaysTrueTakesFirstSample) {
  auto a = ScalarSource::pseudo(5);
  auto b = ScalarSource::pseudo(5);
  const auto dom = BoxDomain::cube(3, -1.0, 1.0);
  const auto r = crofton::sample_rejection(a, dom, [](const VecN&) { return true; });
  EXPECT_EQ(r.rejections, 0u);
  EXPECT_EQ(r.point, crofton::sample_box(b, dom));
}

TEST(SampleRejection, CapGuardsMeasureZeroRegions) {
  auto src = ScalarSource::pseudo(5);
  const auto dom = BoxDomain::cube(2, 0.0, 1.0);
  EXPECT_THROW(crofton::sample_rejection(src, dom, [](const VecN& x) { return x[0] == 0.5; }, 100),
               crofton::NumericError);
}

// Empirical acceptance of the unit ball inside [-1,1]^n.
double acceptance_ratio(int n, std::size_t accepted, std::uint64_t seed, std::size_t& attempts) {
  auto src = ScalarSource::pseudo(seed);
  const auto dom = BoxDomain::cube(static_cast<std::size_t>(n), -1.0, 1.0);
  attempts = 0;
  for (std::size_t i = 0; i < accepted; ++i) {
    const auto r = crofton::sample_rejection(src, dom, [](const VecN& x) { return crofton::dot(x, x) < 1.0; });
    attempts += r.rejections + 1;
  }
  return static_cast<double>(accepted) / static_cast<double>(attempts);
}

TEST(SampleRejection, AcceptanceRatioLaw) {
  for (int n : {2, 3, 4}) {
    std::size_t attempts = 0;
    acceptance_ratio(n, 200000, 40 + n, attempts);
    const double p = crofton::unit_ball_volume(n) / std::pow(2.0, n);
    EXPECT_LT(std::abs(binomial_z(200000, attempts, p)), 3.0) << "n=" << n;
  }
  EXPECT_NEAR(crofton::unit_ball_volume(3) / 8.0, std::numbers::pi / 6.0, 1e-15);
}

TEST(SampleRejection, TenDimensionalBallIsOneInFourHundred) {
  std::size_t attempts = 0;
  acceptance_ratio(10, 2000, 11, attempts);
  const double p = crofton::unit_ball_volume(10) / 1024.0;
  EXPECT_NEAR(p, 1.0 / 400.0, 1e-4);
  EXPECT_LT(std::abs(binomial_z(2000, attempts, p)), 3.0);
}

TEST(SampleRejection, ConditionallyUniformInAcceptRegion) {
  auto src = ScalarSource::pseudo(77);
  const auto dom = BoxDomain::cube(3, -1.0, 1.0);
  constexpr std::size_t kN = 200000;
  std::size_t inner = 0;
  std::size_t positive = 0;
  for (std::size_t i = 0; i < kN; ++i) {
    const auto x = crofton::sample_rejection(src, dom, [](const VecN& v) { return crofton::dot(v, v) < 1.0; }).point;
    if (crofton::dot(x, x) < 0.25) ++inner;
    if (x[0] > 0.0) ++positive;
  }
  EXPECT_LT(std::abs(binomial_z(inner, kN, 1.0 / 8.0)), 3.0);
  EXPECT_LT(std::abs(binomial_z(positive, kN, 0.5)), 3.0);
}

TEST(SampleUnion, EqualWeights) {
  std::vector<crofton::UnionPart<int>> parts{{1.0, [](ScalarSource&) { return 0; }},
                                             {1.0, [](ScalarSource&) { return 1; }}};
  auto src = ScalarSource::pseudo(8);
  std::size_t first = 0;
  constexpr std::size_t kN = 1000000;
  for (std::size_t i = 0; i < kN; ++i) first += crofton::sample_union(src, parts).part == 0;
  EXPECT_LT(std::abs(static_cast<double>(first) - 500000.0), 3.0 * 500.0);
}

TEST(SampleUnion, WeightedAndDegenerateWeights) {
  std::vector<crofton::UnionPart<int>> parts{{3.0, [](ScalarSource&) { return 0; }},
                                             {1.0, [](ScalarSource&) { return 1; }}};
  auto src = ScalarSource::pseudo(9);
  std::size_t first = 0;
  constexpr std::size_t kN = 1000000;
  for (std::size_t i = 0; i < kN; ++i) first += crofton::sample_union(src, parts).point == 0;
  EXPECT_LT(std::abs(binomial_z(first, kN, 0.75)), 3.0);

  parts[1].weight = 0.0;
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(crofton::sample_union(src, parts).part, 0u);

  parts[0].weight = 0.0;
  EXPECT_THROW(crofton::sample_union(src, parts), crofton::InvalidArgument);
}

TEST(SampleBall, InsideOpenBallAndRadialLaw) {
  auto src = ScalarSource::pseudo(10);
  double sum = 0.0;
  constexpr int kN = 1000000;
  for (int i = 0; i < kN; ++i) {
    const auto x = crofton::sample_ball(src, 3);
    const double r = crofton::norm(x);
    ASSERT_GT(r, 0.0);
    ASSERT_LT(r, 1.0);
    sum += r;
  }
  EXPECT_NEAR(sum / kN, 0.75, 0.002);
}

TEST(SampleBall, GaussianRouteRadialCdf) {
  auto src = ScalarSource::pseudo(11);
  constexpr std::size_t kN = 200000;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < kN; ++i) {
    const auto x = crofton::sample_ball(src, 10);
    const double r = crofton::norm(x);
    ASSERT_LT(r, 1.0);
    inside += r < 0.9;
  }
  EXPECT_LT(std::abs(binomial_z(inside, kN, std::pow(0.9, 10))), 3.0);
}

TEST(SampleSphere, HemisphereAndCap) {
  auto src = ScalarSource::pseudo(12);
  constexpr std::size_t kN = 1000000;
  std::size_t upper = 0;
  std::size_t cap = 0;
  for (std::size_t i = 0; i < kN; ++i) {
    const auto x = crofton::sample_sphere(src, 3);
    ASSERT_NEAR(crofton::norm(x), 1.0, 1e-12);
    upper += x[2] > 0.0;
    cap += x[2] > 0.5;
  }
  EXPECT_LT(std::abs(binomial_z(upper, kN, 0.5)), 3.0);
  EXPECT_LT(std::abs(binomial_z(cap, kN, 0.25)), 3.0);
}

TEST(SampleSphere, UnitNormInHighDimension) {
  auto src = ScalarSource::pseudo(13);
  for (int n : {2, 4, 5, 7, 12}) {
    for (int i = 0; i < 1000; ++i) ASSERT_NEAR(crofton::norm(crofton::sample_sphere(src, n)), 1.0, 1e-12);
  }
  EXPECT_THROW(crofton::sample_sphere(src, 1), crofton::InvalidArgument);
}

TEST(SampleSphere, CapCountsUnchangedUnderFixedRotations) {
  using crofton::UnitVector;
  using crofton::Vec3;
  const std::array<crofton::Rotation3, 3> rotations{
      crofton::rotation_from_to(UnitVector({0, 0, 1}), UnitVector::normalized({1, 1, 1})),
      crofton::rotation_from_to(UnitVector({0, 0, 1}), UnitVector::normalized({-0.3, 0.9, -0.1})),
      crofton::rotation_from_to(UnitVector({1, 0, 0}), UnitVector::normalized({0.2, -0.5, -0.8}))};
  for (std::size_t k = 0; k < rotations.size(); ++k) {
    auto src = ScalarSource::pseudo(100 + k);
    constexpr std::size_t kN = 200000;
    std::size_t cap = 0;
    for (std::size_t i = 0; i < kN; ++i) {
      const Vec3 x = rotations[k] * crofton::sample_sphere3(src).vec();
      cap += x.z > 0.5;
    }
    EXPECT_LT(std::abs(binomial_z(cap, kN, 0.25)), 3.0) << "rotation " << k;
  }
}

TEST(SampleNormalPair, MomentsAndCentralMass) {
  auto src = ScalarSource::pseudo(14);
  constexpr std::size_t kPairs = 500000;
  double sum = 0.0;
  double sum2 = 0.0;
  std::size_t central = 0;
  for (std::size_t i = 0; i < kPairs; ++i) {
    const auto [a, b] = crofton::sample_normal_pair(src);
    for (double z : {a, b}) {
      sum += z;
      sum2 += z * z;
      central += std::abs(z) < 1.96;
    }
  }
  constexpr double kN = 2.0 * kPairs;
  const double mean = sum / kN;
  EXPECT_NEAR(mean, 0.0, 0.004);
  EXPECT_NEAR(sum2 / kN - mean * mean, 1.0, 0.005);
  const double p = std::erf(1.96 / std::numbers::sqrt2);
  EXPECT_LT(std::abs(binomial_z(central, 2 * kPairs, p)), 3.0);
}

TEST(UnitBallVolume, KnownValues) {
  EXPECT_DOUBLE_EQ(crofton::unit_ball_volume(2), std::numbers::pi);
  EXPECT_DOUBLE_EQ(crofton::unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0);
  EXPECT_EQ(crofton::unit_ball_volume(0), 1.0);
  EXPECT_DOUBLE_EQ(crofton::unit_ball_volume(1), 2.0);
  EXPECT_THROW(crofton::unit_ball_volume(-1), crofton::InvalidArgument);
}

}  // namespace
