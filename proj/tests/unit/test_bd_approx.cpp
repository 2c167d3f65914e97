#include <gtest/gtest.h>

#include <random>

#include "oracles/chain_oracle.hpp"
#include "relaystab/bd_approx.hpp"

using namespace relaystab;

namespace {

LinkStateProbs random3(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  double a = u(g), b = u(g), c = u(g);
  const double s = a + b + c;
  return LinkStateProbs{{a / s, b / s, c / s}};
}

SsScenario random_scenario(std::mt19937_64& g, int k = 2) {
  return {SsLinks{random3(g), random3(g), random3(g)}, k, 1.0};
}

SsAlpha random_alpha(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0, 1);
  return {u(g), u(g), u(g), u(g)};
}

}  // namespace

TEST(BdApprox, EqualArrivalsReduce) {
  const ApproxChain ch{0.2, 0.2, 0.5};
  EXPECT_NEAR(pi0_closed_form(ch), (0.5 - 0.2) / 0.5, 1e-15);
}

TEST(BdApprox, NoArrivalsWhenEmpty) { EXPECT_EQ(pi0_closed_form({0.0, 0.1, 0.4}), 1.0); }

TEST(BdApprox, UnstableRejected) { EXPECT_THROW(pi0_closed_form({0.1, 0.5, 0.4}), Unstable); }

TEST(BdApprox, ClosedFormMatchesTruncatedBirthDeath) {
  std::mt19937_64 g(1);
  for (int t = 0; t < 100; ++t) {
    // unit jumps so the aggregate chain is itself a birth-death chain
    auto p = oracle::random_stable(g, 1, 0.02);
    const auto o = oracle::truncated_power_iteration(p);
    const ApproxChain ch{p.a01 + p.a02, p.a11 + p.a12, p.b11 + p.b12};
    EXPECT_NEAR(pi0_closed_form(ch), o.pi[0], 1e-9);
  }
}

TEST(BdApprox, ZeroFractionSlackIsRhs) {
  std::mt19937_64 g(2);
  for (int t = 0; t < 50; ++t) {
    const auto sc = random_scenario(g);
    for (auto pol : all_ss_policies) {
      const auto p = ss_params(pol, sc.links.s, sc.links.u, sc.links.d);
      const auto f = alpha_linear_form(p, sc.links, sc.k);
      const auto r = alpha_constraint(p, sc.links, sc.k, {0, 0, 0, 0});
      EXPECT_DOUBLE_EQ(r.slack, f.M);
      EXPECT_EQ(r.satisfied, f.M >= -kSlackTolerance);
    }
  }
}

TEST(BdApprox, SlackIsNegativeDrift) {
  std::mt19937_64 g(3);
  for (int t = 0; t < 200; ++t) {
    const int k = 1 + t % 3;
    const auto sc = random_scenario(g, k);
    const auto a = random_alpha(g);
    for (auto pol : all_ss_policies) {
      const auto p = ss_params(pol, sc.links.s, sc.links.u, sc.links.d);
      const auto ch = relay_chain(p, sc.links, k, a);
      EXPECT_NEAR(alpha_constraint(p, sc.links, k, a).slack, -ch.drift(), 1e-12);
    }
  }
}

TEST(BdApprox, SilentDirectLinkUnderDirectPriority) {
  std::mt19937_64 g(4);
  const LinkStateProbs u{{0.3, 0.7, 0.0}};
  const SsScenario sc{SsLinks{random3(g), u, random3(g)}, 2, 1.0};
  const auto p = ss_params(SsPolicy::g2, sc.links.s, sc.links.u, sc.links.d);
  const auto f = alpha_linear_form(p, sc.links, 2);
  for (double c : f.c) EXPECT_EQ(c, 0.0);
  EXPECT_TRUE(alpha_constraint(p, sc.links, 2, {1, 1, 1, 1}).satisfied);
}

TEST(BdApprox, CandidatesFeasibleAndBounded) {
  std::mt19937_64 g(5);
  for (int t = 0; t < 500; ++t) {
    const int k = 1 + t % 3;
    const auto sc = random_scenario(g, k);
    for (auto pol : all_ss_policies) {
      const auto p = ss_params(pol, sc.links.s, sc.links.u, sc.links.d);
      const auto cs = candidate_set(p, sc.links, k);
      EXPECT_LE(cs.size(), 14u);
      for (const auto& a : cs) {
        const auto r = alpha_constraint(p, sc.links, k, a);
        EXPECT_GE(r.slack, -1e-12);
        EXPECT_TRUE(in_unit_cube(a));
        const bool binary = [&] {
          for (double v : a)
            if (v != 0.0 && v != 1.0) return false;
          return true;
        }();
        if (!binary) {
          EXPECT_LE(r.slack, 1e-9);
        }
      }
      if (alpha_constraint(p, sc.links, k, {0, 0, 0, 0}).satisfied) {
        ASSERT_FALSE(cs.empty());
        EXPECT_EQ(cs.front(), (SsAlpha{0, 0, 0, 0}));
      }
    }
  }
}

TEST(BdApprox, SymmetricRelayPriorityCandidates) {
  const LinkStateProbs q{{0.5, 0.3, 0.2}};
  const SsScenario sc{SsLinks{q, q, q}, 2, 1.0};
  const auto p = ss_params(SsPolicy::g1, q, q, q);
  const auto cs = candidate_set(p, sc.links, 2);
  ASSERT_FALSE(cs.empty());
  EXPECT_EQ(cs.front(), (SsAlpha{0, 0, 0, 0}));
  for (const auto& a : cs) EXPECT_TRUE(alpha_constraint(p, sc.links, 2, a).satisfied);
}

TEST(BdApprox, AssemblyIdentity) {
  std::mt19937_64 g(6);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const int k = 1 + t % 3;
    auto sc = random_scenario(g, k);
    sc.r2 = 0.5 + t % 5;
    const auto a = random_alpha(g);
    for (auto pol : all_ss_policies) {
      const auto p = ss_params(pol, sc.links.s, sc.links.u, sc.links.d);
      const auto ch = relay_chain(p, sc.links, k, a);
      if (ch.drift() >= -1e-6) continue;
      const double pi0 = pi0_closed_form(aggregate(ch));
      const auto mixed = mix_rates(conditional_rates(p, sc, a), pi0);
      const auto r = approx_service_rates(p, sc, a);
      EXPECT_NEAR(r.mu_s, mixed.mu_s, 1e-10);
      EXPECT_NEAR(r.mu_u, mixed.mu_u, 1e-10);
      ++checked;
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(BdApprox, SilentSourceHasNoRate) {
  std::mt19937_64 g(8);
  const SsScenario sc{SsLinks{LinkStateProbs{{0, 0, 1}}, random3(g), random3(g)}, 2, 1.0};
  for (auto pol : all_ss_policies) {
    const auto p = ss_params(pol, sc.links.s, sc.links.u, sc.links.d);
    EXPECT_EQ(approx_service_rates(p, sc, {0.3, 0.3, 0.3, 0.3}).mu_s, 0.0);
  }
}

TEST(BdApprox, RelayPriorityHelpsSource) {
  std::mt19937_64 g(9);
  for (int t = 0; t < 200; ++t) {
    const auto sc = random_scenario(g);
    const SsAlpha a{0, 0, 0, 0};
    const auto p1 = ss_params(SsPolicy::g1, sc.links.s, sc.links.u, sc.links.d);
    const auto p2 = ss_params(SsPolicy::g2, sc.links.s, sc.links.u, sc.links.d);
    if (!alpha_constraint(p1, sc.links, 2, a).satisfied || !alpha_constraint(p2, sc.links, 2, a).satisfied) continue;
    if (relay_chain(p1, sc.links, 2, a).drift() >= -1e-9 || relay_chain(p2, sc.links, 2, a).drift() >= -1e-9) continue;
    EXPECT_GE(approx_service_rates(p1, sc, a).mu_s, approx_service_rates(p2, sc, a).mu_s - 1e-12);
  }
}

TEST(BdApprox, DirectRateNonincreasingInFractions) {
  std::mt19937_64 g(10);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const auto sc = random_scenario(g);
    auto a = random_alpha(g);
    for (double& v : a) v *= 0.3;
    for (auto pol : all_ss_policies) {
      const auto p = ss_params(pol, sc.links.s, sc.links.u, sc.links.d);
      if (alpha_constraint(p, sc.links, 2, a).slack < 1e-3) continue;
      if (relay_chain(p, sc.links, 2, a).a0() == 0.0) continue;
      for (int j = 0; j < 4; ++j) {
        auto b = a;
        b[j] += 1e-6;
        if (alpha_constraint(p, sc.links, 2, b).slack < 1e-4) continue;
        EXPECT_LE(approx_service_rates(p, sc, b).mu_u, approx_service_rates(p, sc, a).mu_u + 1e-12);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(BdApprox, ViolatedConstraintRejected) {
  const LinkStateProbs q{{0.8, 0.1, 0.1}};
  const SsScenario sc{SsLinks{q, q, q}, 2, 1.0};
  const auto p = ss_params(SsPolicy::g1, q, q, q);
  ASSERT_FALSE(alpha_constraint(p, sc.links, 2, {1, 1, 1, 1}).satisfied);
  EXPECT_THROW(approx_service_rates(p, sc, {1, 1, 1, 1}), Unstable);
}
