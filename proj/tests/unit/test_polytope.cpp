#include <gtest/gtest.h>

#include <random>

#include "relaystab/polytope.hpp"

using namespace relaystab;

namespace {

CoSet random_set(std::mt19937_64& g, std::size_t dim, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    Point p(dim);
    for (auto& v : p) v = u(g);
    pts.push_back(p);
  }
  return CoSet(dim, pts);
}

Point random_combination(std::mt19937_64& g, const CoSet& s, double total) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(s.size());
  double sum = 0;
  for (auto& x : w) sum += (x = e(g));
  Point p(s.dim(), 0.0);
  for (std::size_t j = 0; j < s.size(); ++j)
    for (std::size_t i = 0; i < s.dim(); ++i) p[i] += total * w[j] / sum * s[j][i];
  return p;
}

}  // namespace

TEST(Polytope, UnitSimplexGauge) {
  const CoSet s(2, {{1, 0}, {0, 1}});
  EXPECT_NEAR(gauge(s, Point{0.5, 0.5}), 1.0, 1e-12);
  EXPECT_NEAR(gauge(s, Point{0.3, 0.2}), 0.5, 1e-12);
  EXPECT_TRUE(contains(s, Point{0.3, 0.7}));
  EXPECT_FALSE(contains(s, Point{0.6, 0.6}));
}

TEST(Polytope, ZeroQueryAndMissingSupport) {
  const CoSet s(3, {{1, 1, 0}});
  EXPECT_EQ(gauge(s, Point{0, 0, 0}), 0.0);
  EXPECT_TRUE(std::isinf(gauge(s, Point{0, 0, 0.1})));
  EXPECT_NEAR(gauge(s, Point{0.5, 0.25, 0}), 0.5, 1e-12);
}

TEST(Polytope, DownwardClosed) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t dim = 2 + t % 4;
    const auto s = random_set(g, dim, 3 + t % 7);
    auto x = random_combination(g, s, 0.999);
    ASSERT_TRUE(contains(s, x));
    for (auto& v : x) v *= u(g);
    EXPECT_TRUE(contains(s, x));
  }
}

TEST(Polytope, GaugeIsHomogeneous) {
  std::mt19937_64 g(2);
  for (int t = 0; t < 100; ++t) {
    const auto s = random_set(g, 3, 6);
    const auto x = random_combination(g, s, 1.0);
    const double g1 = gauge(s, x);
    auto y = x;
    for (auto& v : y) v *= 2.5;
    EXPECT_NEAR(gauge(s, y), 2.5 * g1, 1e-9);
    EXPECT_LE(g1, 1.0 + 1e-9);
  }
}

TEST(Polytope, ContainsSetSelfAndScaled) {
  std::mt19937_64 g(3);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_set(g, 2 + t % 3, 5);
    EXPECT_EQ(contains_set(s, s), 0.0);
    EXPECT_EQ(contains_set(scaled(s, 0.5), s), 0.0);
    EXPECT_NEAR(contains_set(scaled(s, 1.5), s), 0.5, 1e-9);
  }
}

TEST(Polytope, ShiftAbsorbsSmallExcess) {
  const CoSet outer(2, {{1, 0}, {0, 1}});
  const CoSet inner(2, {{0.55, 0.55}});
  EXPECT_GT(contains_set(inner, outer), 0.05);
  EXPECT_EQ(contains_set(inner, outer, 0.05), 0.0);
}

TEST(Polytope, ReducePreservesSet) {
  std::mt19937_64 g(4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = 2 + t % 3;
    const auto s = random_set(g, dim, 20);
    const auto r = reduce(s);
    EXPECT_LE(r.size(), s.size());
    EXPECT_EQ(contains_set(s, r), 0.0);
    EXPECT_EQ(contains_set(r, s), 0.0);
    for (int q = 0; q < 10; ++q) {
      const auto x = random_combination(g, s, 1.1);
      EXPECT_NEAR(gauge(r, x), gauge(s, x), 1e-8);
    }
  }
}

TEST(Polytope, ReduceDropsDominatedAndInterior) {
  const CoSet s(2, {{1, 0}, {0, 1}, {0.4, 0.4}, {0.5, 0}, {0, 0}});
  const auto r = reduce(s);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], (Point{1, 0}));
  EXPECT_EQ(r[1], (Point{0, 1}));
}

TEST(Polytope, DuplicatesDropped) {
  CoSet s(2, {{1, 2}, {1, 2}, {2, 1}});
  EXPECT_EQ(s.size(), 2u);
  s.add({2, 1});
  EXPECT_EQ(s.size(), 2u);
}

TEST(Polytope, DimensionChecks) {
  CoSet s(2, {{1, 1}});
  EXPECT_THROW(s.add({1, 1, 1}), DimensionMismatch);
  EXPECT_THROW(gauge(s, Point{1}), DimensionMismatch);
  EXPECT_THROW(contains_set(CoSet(3), s), DimensionMismatch);
  EXPECT_THROW(CoSet(2, {{-1, 0}}), std::invalid_argument);
  EXPECT_THROW(contains_set(s, s, -0.1), std::invalid_argument);
}

TEST(Polytope, BadlyScaledGeneratorsStayMembers) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-5.0, 0.0);
  std::vector<Point> pts;
  for (int i = 0; i < 1500; ++i) {
    Point p(6);
    for (auto& v : p) v = std::pow(10.0, u(g));
    pts.push_back(p);
  }
  const CoSet s(6, pts);
  for (const auto& p : pts) {
    const double v = gauge(s, p);
    ASSERT_TRUE(std::isfinite(v));
    EXPECT_LE(v, 1.0 + 1e-9);
  }
}
