#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "relaystab/policy.hpp"

using namespace relaystab;

namespace {

LinkStateProbs random3(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  double a = u(g), b = u(g), c = u(g);
  const double s = a + b + c;
  return LinkStateProbs{{a / s, b / s, c / s}};
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST(Policy, RowOneFavoursRelayedFlow) {
  std::mt19937_64 g(1);
  const auto s = random3(g), u = random3(g), d = random3(g);
  const auto p = ss_params(SsPolicy::g1, s, u, d);
  EXPECT_EQ(p.U, 1.0);
  EXPECT_EQ(p.V, 1.0);
  EXPECT_DOUBLE_EQ(p.W, s[2]);
  EXPECT_DOUBLE_EQ(p.X, s[2]);
  EXPECT_DOUBLE_EQ(p.Y, s[2] * d[2]);
  EXPECT_DOUBLE_EQ(p.Z, s[2] * d[2]);
}

TEST(Policy, RowTwoFavoursDirectFlow) {
  std::mt19937_64 g(2);
  const auto s = random3(g), u = random3(g), d = random3(g);
  const auto p = ss_params(SsPolicy::g2, s, u, d);
  EXPECT_DOUBLE_EQ(p.U, u[2]);
  EXPECT_DOUBLE_EQ(p.V, u[2]);
  for (double x : {p.W, p.X, p.Y, p.Z}) EXPECT_EQ(x, 1.0);
}

TEST(Policy, DirectAtHighRateNeverHappens) {
  std::mt19937_64 g(3);
  const auto s = random3(g), d = random3(g);
  const LinkStateProbs u{{0.0, 0.4, 0.6}};
  const auto p = ss_params(SsPolicy::g4, s, u, d);
  EXPECT_EQ(p.U, 1.0);
  EXPECT_EQ(p.V, 1.0);
}

TEST(Policy, AllRowsMatchClosedForms) {
  std::mt19937_64 g(4);
  for (int t = 0; t < 500; ++t) {
    const auto s = random3(g), u = random3(g), d = random3(g);
    const double s3 = s[2], d3 = d[2], u3 = u[2], ns1 = 1 - s[0], nd1 = 1 - d[0], nu1 = 1 - u[0];
    const double rows[6][6] = {
        {1, 1, s3, s3, s3 * d3, s3 * d3},
        {u3, u3, 1, 1, 1, 1},
        {1, u3, ns1, ns1, ns1 * nd1, ns1 * nd1},
        {nu1, nu1, 1, s3, 1, s3 * d3},
        {1, nu1, ns1, s3, ns1 * nd1, s3 * d3},
        {nu1, u3, 1, ns1, 1, ns1 * nd1},
    };
    for (int r = 0; r < 6; ++r) {
      const auto p = ss_params(all_ss_policies[static_cast<std::size_t>(r)], s, u, d);
      const double got[6] = {p.U, p.V, p.W, p.X, p.Y, p.Z};
      for (int c = 0; c < 6; ++c) {
        EXPECT_NEAR(got[c], rows[r][c], 1e-15);
        EXPECT_GE(got[c], 0.0);
        EXPECT_LE(got[c], 1.0);
      }
      EXPECT_NEAR(p.N, s[0] * p.U + (1 - s[0]) * p.V, 1e-15);
    }
  }
}

TEST(Policy, NamesAndIds) {
  EXPECT_EQ(to_string(SsPolicy::g3), "G3");
  for (int i = 1; i <= 6; ++i) EXPECT_EQ(static_cast<int>(ss_policy_from_id(i)), i);
  EXPECT_THROW(ss_policy_from_id(0), std::invalid_argument);
  EXPECT_THROW(ss_policy_from_id(7), std::invalid_argument);
  EXPECT_THROW(ss_params(SsPolicy::g1, LinkStateProbs{{0.5, 0.5}}, LinkStateProbs{{1, 0, 0}}, LinkStateProbs{{1, 0, 0}}),
               std::invalid_argument);
}

TEST(Policy, PrioritizedSetsExample) {
  // five communications: relayed flows 0,1,2 and direct flows 3,4; order 0 > 4 > 1 > 2 > 3
  const MuPolicy p{{0, 4, 1, 2, 3}};
  const auto s = prioritized_sets(p, 3, 3, 2);
  EXPECT_EQ(s.ue2bs_before, std::vector<std::size_t>{4});
  EXPECT_EQ(s.ue2ue_before, (std::vector<std::size_t>{0, 1, 2}));
  const auto top = prioritized_sets(p, 0, 3, 2);
  EXPECT_TRUE(top.ue2bs_before.empty());
  EXPECT_TRUE(top.ue2ue_before.empty());
}

TEST(Policy, PrioritizedSetsWithoutRelayedFlows) {
  const MuPolicy p{{2, 0, 1}};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(prioritized_sets(p, i, 0, 3).ue2ue_before.empty());
  EXPECT_EQ(prioritized_sets(p, 1, 0, 3).ue2bs_before, (std::vector<std::size_t>{2, 0}));
}

TEST(Policy, PrioritizedSetsErrors) {
  const MuPolicy p{{1, 0}};
  EXPECT_THROW(prioritized_sets(p, 2, 3, 0), UnknownIndex);
  EXPECT_THROW(prioritized_sets(p, 5, 1, 1), UnknownIndex);
  EXPECT_THROW(MuPolicy({0, 0}).validate(1, 1), std::invalid_argument);
  EXPECT_THROW(MuPolicy({0, 2}).validate(1, 1), UnknownIndex);
}

TEST(Policy, SmallFullEnumeration) { EXPECT_EQ(enumerate_policies(1, 1).size(), 2.0); }

TEST(Policy, FiftyFlowPrefixCount) {
  auto s = enumerate_policies(50, 0, 3);
  EXPECT_EQ(s.size(), 117600.0);
  std::size_t n = 0;
  s.for_each([&](const MuPolicy& p) {
    EXPECT_EQ(p.order.size(), 3u);
    ++n;
  });
  EXPECT_EQ(n, 117600u);
}

TEST(Policy, FullCountLaw) {
  for (int K = 0; K <= 6; ++K)
    for (int U = 0; K + U <= 6; ++U) {
      if (K + U == 0) continue;
      std::set<std::vector<std::size_t>> seen;
      enumerate_policies(static_cast<std::size_t>(K), static_cast<std::size_t>(U)).for_each([&](const MuPolicy& p) {
        p.validate(static_cast<std::size_t>(K), static_cast<std::size_t>(U));
        EXPECT_EQ(p.order.size(), static_cast<std::size_t>(K + U));
        seen.insert(p.order);
      });
      EXPECT_EQ(static_cast<double>(seen.size()), factorial(K + U));
    }
}

TEST(Policy, PrefixCountLaw) {
  for (int n = 1; n <= 7; ++n)
    for (int depth = 0; depth <= std::min(3, n); ++depth) {
      std::set<std::vector<std::size_t>> seen;
      const auto K = static_cast<std::size_t>(n / 2), U = static_cast<std::size_t>(n) - K;
      enumerate_policies(K, U, static_cast<std::size_t>(depth)).for_each([&](const MuPolicy& p) {
        p.validate(K, U);
        seen.insert(p.order);
      });
      EXPECT_EQ(static_cast<double>(seen.size()), factorial(n) / factorial(n - depth)) << n << " " << depth;
    }
}

TEST(Policy, FullDepthPrefixEqualsFullEnumeration) {
  std::multiset<std::vector<std::size_t>> a, b;
  enumerate_policies(2, 2).for_each([&](const MuPolicy& p) { a.insert(p.order); });
  enumerate_policies(2, 2, 4).for_each([&](const MuPolicy& p) { b.insert(p.order); });
  EXPECT_EQ(a, b);
}

TEST(Policy, DepthTooLargeRejected) { EXPECT_THROW(enumerate_policies(2, 1, 4), DepthTooLarge); }

TEST(Policy, LevelsAndLabels) {
  const MuPolicy p{{3, 1, 0}};
  EXPECT_EQ(p.level_of(1), 1u);
  EXPECT_FALSE(p.level_of(2).has_value());
  EXPECT_EQ(p.to_string(), "3>1>0");
}
