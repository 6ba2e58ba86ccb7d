#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <dyadic/empirical.hpp>
#include <dyadic/sample_buffer.hpp>
#include <dyadic/sources.hpp>
#include <dyadic/variation.hpp>

#include "oracles.hpp"

using namespace dyadic;
using oracle::Q;

namespace {

SampleBuffer buffer_of(std::initializer_list<double> xs) {
  SampleBuffer b;
  for (double x : xs)
    b.append(x);
  return b;
}

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace

TEST(SampleBuffer, Append) {
  SampleBuffer b;
  b.append(0.5);
  EXPECT_EQ(b.size(), 1u);
  b.append(-2.0);
  b.append(0.25);
  EXPECT_EQ(b.sorted(), (std::vector<double>{-2.0, 0.25, 0.5}));
  EXPECT_EQ(std::vector<double>(b.samples().begin(), b.samples().end()),
            (std::vector<double>{0.5, -2.0, 0.25}));
}

TEST(SampleBuffer, RejectsOutOfRangeAndLeavesBufferUnchanged) {
  SampleBuffer b = buffer_of({0.1});
  EXPECT_THROW(b.append(std::nan("")), range_error);
  EXPECT_THROW(b.append(std::numeric_limits<double>::infinity()), range_error);
  try {
    b.append(1048577.0);
    FAIL() << "expected a range error";
  } catch (const range_error& e) {
    EXPECT_EQ(e.value(), 1048577.0);
  }
  EXPECT_NO_THROW(b.append(-1048576.0));
  EXPECT_EQ(b.size(), 2u);
}

TEST(SampleBuffer, SortedViewIsAPermutation) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0, 10);
  SampleBuffer b;
  std::vector<double> all;
  for (int i = 0; i < 3000; ++i) {
    const double x = std::round(g(rng) * 4) / 4; // plenty of ties
    b.append(x);
    all.push_back(x);
    if (i % 97 == 0 || i < 40) {
      auto expect = all;
      std::sort(expect.begin(), expect.end());
      ASSERT_EQ(b.sorted(), expect) << "after " << i + 1;
    }
  }
}

TEST(EmpiricalMeasure, Examples) {
  EXPECT_DOUBLE_EQ(empirical_measure(buffer_of({0.1, 0.6, 0.7}),
                                     Interval::right_open(0.5, 1)),
                   2.0 / 3.0);
  EXPECT_EQ(empirical_measure(buffer_of({0.1, 0.6, 0.7}), Interval::whole_line()), 1.0);
  EXPECT_EQ(empirical_measure(buffer_of({0.1}), Interval::right_open(0.5, 1)), 0.0);
  EXPECT_THROW(empirical_measure(SampleBuffer{}, Interval::whole_line()), state_error);
}

TEST(EmpiricalMeasure, MatchesDirectCountForEveryEndpointType) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> v(-8, 8);
  for (int trial = 0; trial < 200; ++trial) {
    SampleBuffer b;
    std::vector<double> xs;
    for (int i = 0; i < 1 + trial % 37; ++i) {
      xs.push_back(v(rng) / 4.0);
      b.append(xs.back());
    }
    for (int lc = 0; lc < 2; ++lc)
      for (int uc = 0; uc < 2; ++uc) {
        Interval a{v(rng) / 4.0, v(rng) / 4.0, lc == 1, uc == 1};
        if (trial % 5 == 0)
          a.lower = -std::numeric_limits<double>::infinity();
        if (trial % 7 == 0)
          a.upper = std::numeric_limits<double>::infinity();
        const auto direct = std::count_if(xs.begin(), xs.end(),
                                          [&](double x) { return a.contains(x); });
        ASSERT_EQ(b.count_in(a), static_cast<std::size_t>(direct));
      }
  }
}

TEST(Histogram, Examples) {
  EXPECT_EQ(histogram(buffer_of({0.25}), 2), StepDensity<double>({0.25, 0.5}, {4}));
  EXPECT_EQ(histogram(buffer_of({0.1, 0.2, 0.6, 0.9}), 1),
            StepDensity<double>({0, 1}, {1}));
  // data confined to [0, 0.5) reproduces h_1 at level 1
  EXPECT_EQ(histogram(buffer_of({0.01, 0.2, 0.3, 0.49}), 1),
            rademacher_density<double>(1));
  EXPECT_THROW(histogram(SampleBuffer{}, 1), state_error);
  EXPECT_THROW(histogram(buffer_of({0.1}), 0), contract_error);
}

TEST(Histogram, MatchesBruteForceAndIntegratesToOne) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0, 2);
  for (int trial = 0; trial < 150; ++trial) {
    SampleBuffer b;
    for (int i = 0; i < 1 + trial * 3; ++i)
      b.append(g(rng));
    const int k = 1 + trial % 12;
    const auto xs = std::vector<double>(b.samples().begin(), b.samples().end());
    const auto exact = histogram<Q>(b, k);
    ASSERT_EQ(exact, oracle::brute_histogram(xs, k));
    ASSERT_EQ(exact.total(), Q(1));
    // rational -> double conversion is not guaranteed correctly rounded, so
    // heights are compared with a relative tolerance
    const auto approx = histogram<double>(b, k);
    const auto ref = step_cast<double>(exact);
    ASSERT_EQ(approx.breakpoints(), ref.breakpoints());
    for (std::size_t p = 0; p < ref.heights().size(); ++p)
      ASSERT_NEAR(approx.heights()[p], ref.heights()[p], 1e-15 * ref.heights()[p]);
  }
}

TEST(Histogram, CoarseningAveragesChildren) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 60; ++trial) {
    SampleBuffer b;
    for (int i = 0; i < 50 + trial; ++i)
      b.append(u(rng));
    for (int k = 2; k <= 9; ++k)
      ASSERT_EQ(conditional_on_partition(histogram<Q>(b, k), k - 1),
                histogram<Q>(b, k - 1));
  }
}

TEST(Histogram, RejectsLevelsWithInexactEdges) {
  EXPECT_THROW(histogram(buffer_of({1000000.3}), 40), range_error);
  EXPECT_NO_THROW(histogram(buffer_of({1000000.3}), 30));
}

TEST(Discrepancy, Examples) {
  const std::vector<double> grid = [] {
    std::vector<double> g;
    for (int i = 0; i <= 256; ++i)
      g.push_back(i / 256.0);
    return g;
  }();
  struct Case {
    std::vector<double> xs;
    double expected;
  };
  for (const Case& c : {Case{{0.5}, 1.0}, Case{{0.25, 0.75}, 0.5}, Case{{0.0}, 1.0}}) {
    EXPECT_EQ(oracle::brute_interval_discrepancy(c.xs, uniform_cdf, grid), c.expected);
    EXPECT_EQ(sup_interval_discrepancy(std::span<const double>(c.xs), uniform_cdf),
              c.expected);
  }
}

TEST(Discrepancy, MatchesEnumerationOracle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  std::vector<double> grid;
  for (int i = -10; i <= 70; ++i)
    grid.push_back(i / 60.0);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<double> xs;
    for (int i = 0; i < 1 + trial % 25; ++i)
      xs.push_back(trial % 3 == 0 ? std::round(u(rng) * 8) / 8 : u(rng));
    std::sort(xs.begin(), xs.end());
    const double lib = sup_interval_discrepancy(std::span<const double>(xs), uniform_cdf);
    ASSERT_NEAR(lib, oracle::brute_interval_discrepancy(xs, uniform_cdf, grid), 1e-12);
  }
}

TEST(Discrepancy, BracketedByKolmogorovSmirnov) {
  std::mt19937_64 rng(9);
  std::exponential_distribution<double> e(1.0);
  auto cdf = [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); };
  for (int trial = 0; trial < 100; ++trial) {
    SampleBuffer b;
    for (int i = 0; i < 5 + trial * 7; ++i)
      b.append(e(rng));
    const auto xs = std::vector<double>(b.samples().begin(), b.samples().end());
    const double ks = oracle::ks_distance(xs, cdf);
    const double d = sup_interval_discrepancy(b, cdf);
    ASSERT_GE(d, ks - 1e-15);
    ASSERT_LE(d, 2 * ks + 1e-15);
  }
}

TEST(Discrepancy, StratifiedMidpointsGiveExactlyOneOverN) {
  const auto cdf = [](const Q& x) { return x < 0 ? Q(0) : (x > 1 ? Q(1) : x); };
  for (std::size_t n = 1; n <= 1024; ++n) {
    const Q qn(static_cast<long long>(n));
    std::vector<Q> xs;
    for (std::size_t i = 1; i <= n; ++i)
      xs.push_back(Q(static_cast<long long>(2 * i - 1)) / (2 * qn));
    ASSERT_EQ(sup_interval_discrepancy(std::span<const Q>(xs), cdf), 1 / qn)
        << "n = " << n;
  }
}

TEST(Discrepancy, StratifiedMidpointsInDoubleAreWithinRounding) {
  for (std::size_t n = 1; n <= 1024; ++n) {
    std::vector<double> xs;
    for (std::size_t i = 1; i <= n; ++i)
      xs.push_back(static_cast<double>(2 * i - 1) / static_cast<double>(2 * n));
    const double d = sup_interval_discrepancy(std::span<const double>(xs), uniform_cdf);
    if (std::has_single_bit(n))
      ASSERT_EQ(d, 1.0 / static_cast<double>(n)) << "n = " << n;
    else
      ASSERT_NEAR(d, 1.0 / static_cast<double>(n), 1e-13) << "n = " << n;
  }
}

TEST(Discrepancy, SeededUniformSampleIsClose) {
  auto src = iid_source(ContinuousDensity::uniform(0, 1), 2024);
  SampleBuffer b;
  for (int i = 0; i < 100000; ++i)
    b.append(*src.next());
  EXPECT_LT(sup_interval_discrepancy(b, uniform_cdf), 0.01);
}

TEST(Discrepancy, RejectsDecreasingCdf) {
  const std::vector<double> xs{0.1, 0.5, 0.9};
  EXPECT_THROW(sup_interval_discrepancy(std::span<const double>(xs),
                                        [](double x) { return 1.0 - x; }),
               contract_error);
  EXPECT_THROW(sup_interval_discrepancy(SampleBuffer{}, uniform_cdf), state_error);
}
