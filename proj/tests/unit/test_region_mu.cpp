#include <gtest/gtest.h>

#include <random>

#include "relaystab/region_mu.hpp"

using namespace relaystab;

namespace {

double feasible_pd(std::mt19937_64& g, double p_s) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (;;) {
    const double p_d = u(g);
    if (alpha_star_raw(p_s, p_d) >= 0.0) return p_d;
  }
}

MuScenario random_mu(std::mt19937_64& g, std::size_t K, std::size_t U) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  MuScenario sc;
  for (std::size_t i = 0; i < K; ++i) {
    sc.ps.push_back(u(g));
    sc.pd.push_back(feasible_pd(g, sc.ps.back()));
  }
  for (std::size_t j = 0; j < U; ++j) sc.pu.push_back(u(g));
  sc.r1 = 2.0;
  return sc;
}

MuPolicy random_policy(std::mt19937_64& g, std::size_t n) {
  MuPolicy p;
  for (std::size_t i = 0; i < n; ++i) p.order.push_back(i);
  std::shuffle(p.order.begin(), p.order.end(), g);
  return p;
}

std::vector<double> random_alpha(std::mt19937_64& g, const MuScenario& sc) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto a = alpha_star(sc);
  for (auto& v : a) v *= u(g);
  return a;
}

}  // namespace

TEST(RegionMu, SingleUe2bsFlow) {
  MuScenario sc;
  sc.pu = {0.7};
  sc.r1 = 3.0;
  const auto mu = service_rates(sc, MuPolicy{{0}}, std::vector<double>{});
  ASSERT_EQ(mu.size(), 1u);
  EXPECT_DOUBLE_EQ(mu[0], 2.1);
}

TEST(RegionMu, LowerPriorityGetsLeftovers) {
  MuScenario sc;
  sc.pu = {0.6, 0.5};
  sc.r1 = 1.0;
  const auto mu = service_rates(sc, MuPolicy{{1, 0}}, std::vector<double>{});
  EXPECT_DOUBLE_EQ(mu[1], 0.5);
  EXPECT_DOUBLE_EQ(mu[0], 0.5 * 0.6);
}

TEST(RegionMu, RatesNonnegativeAndBounded) {
  std::mt19937_64 g(1);
  for (int t = 0; t < 500; ++t) {
    const auto sc = random_mu(g, t % 4, 1 + t % 3);
    const auto p = random_policy(g, sc.flows());
    const auto mu = service_rates(sc, p, random_alpha(g, sc));
    double used = 0;
    for (std::size_t c = 0; c < mu.size(); ++c) {
      EXPECT_GE(mu[c], 0.0);
      const double ps = c < sc.K() ? sc.ps[c] : sc.pu[c - sc.K()];
      EXPECT_LE(mu[c], sc.r1 * ps + 1e-12);
      used += mu[c] / sc.r1;
    }
    EXPECT_LE(used, 1.0 + 1e-12);
  }
}

TEST(RegionMu, ConvexityIdentity) {
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const auto sc = random_mu(g, 1 + t % 3, t % 3);
    const auto p = random_policy(g, sc.flows());
    auto a = random_alpha(g, sc);
    const std::size_t i = static_cast<std::size_t>(t) % sc.K();
    const double a_hi = alpha_star(sc)[i], lambda = u(g);
    auto a0 = a, ahi = a, am = a;
    a0[i] = 0.0;
    ahi[i] = a_hi;
    am[i] = lambda * a_hi;
    const auto m0 = service_rates(sc, p, a0), m1 = service_rates(sc, p, ahi), mm = service_rates(sc, p, am);
    const double gam = convexity_coefficient_at(sc.ps[i], sc.pd[i], lambda, a_hi);
    EXPECT_GE(gam, 0.0);
    EXPECT_LE(gam, 1.0);
    for (std::size_t c = 0; c < mm.size(); ++c) EXPECT_NEAR(mm[c], gam * m0[c] + (1 - gam) * m1[c], 1e-12);
    if (alpha_star_raw(sc.ps[i], sc.pd[i]) <= 1.0) {
      EXPECT_NEAR(convexity_coefficient(sc.ps[i], sc.pd[i], lambda), gam, 1e-12);
    }
  }
}

TEST(RegionMu, BorderRegionMatchesGrid) {
  std::mt19937_64 g(3);
  for (int t = 0; t < 12; ++t) {
    const std::size_t K = 1 + t % 2, U = t % 3;
    const auto sc = random_mu(g, K, U);
    const auto red = reduced_region(sc);
    const auto ex = exact_region(sc, 5);
    EXPECT_EQ(contains_set(ex.vertices.region, red.vertices.region), 0.0);
    EXPECT_EQ(contains_set(red.vertices.region, ex.vertices.region), 0.0);
    EXPECT_EQ(red.evaluations, reduced_evaluation_count(sc));
    EXPECT_EQ(ex.evaluations, exact_evaluation_count(sc, 5));
    EXPECT_EQ(red.vertices.labels.size(), red.vertices.region.size());
  }
}

TEST(RegionMu, SilentFlowsContributeNothing) {
  MuScenario sc;
  sc.ps = {0.5, 0.0};
  sc.pd = {0.8, 0.9};
  sc.pu = {0.4};
  const auto r = reduced_region(sc);
  for (const auto& v : r.vertices.region.generators()) EXPECT_EQ(v[1], 0.0);
}

TEST(RegionMu, DepthForcingCase) {
  const double r1 = 400, p_s = 0.6;
  const double eps = r1 * p_s * (1 - p_s) * (1 - p_s);
  EXPECT_EQ(k0_depth(eps, r1, p_s, 10), 3u);
  EXPECT_EQ(k0_depth(eps * 0.999, r1, p_s, 10), 4u);
  EXPECT_EQ(k0_depth(eps * 1.001, r1, p_s, 10), 3u);
  EXPECT_EQ(k0_depth(1e-30, r1, p_s, 5), 5u);
}

TEST(RegionMu, DepthAtDefaultRadio) {
  const auto p = symmetric_probs(Meters{350}, RadioConfig{});
  EXPECT_GT(p.p_s, 0.999);
  EXPECT_EQ(k0_depth(0.1, 400, p.p_s, 50), 3u);
  EXPECT_EQ(epsilon_evaluation_count(50, 0, 3), 940800.0);
  EXPECT_EQ(policy_count(50, 3), 117600.0);
}

TEST(RegionMu, EvaluationCountMatchesEnumeration) {
  for (std::size_t K = 0; K <= 3; ++K)
    for (std::size_t U = 0; U <= 3; ++U)
      for (std::size_t d = 0; d <= K + U; ++d) {
        double direct = 0;
        PolicyStream(K, U, d).for_each([&](const MuPolicy& p) {
          std::size_t j = 0;
          for (auto c : p.order) j += c < K;
          direct += std::pow(2.0, static_cast<double>(j));
        });
        EXPECT_EQ(epsilon_evaluation_count(K, U, d), direct);
      }
}

TEST(RegionMu, DeepFlowsNearlySilent) {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(0.2, 0.9);
  for (int t = 0; t < 100; ++t) {
    const double p_s = u(g);
    const auto sc = make_symmetric_mu(p_s, feasible_pd(g, p_s), 3, 3, 5.0);
    const double eps = 5.0 * p_s * std::pow(1 - p_s, 2.0) * 1.01;
    const auto k0 = k0_depth(eps, sc.r1, p_s, sc.flows());
    const auto p = random_policy(g, sc.flows());
    const auto mu = service_rates(sc, p, random_alpha(g, sc));
    for (std::size_t lvl = k0 - 1; lvl < sc.flows(); ++lvl) EXPECT_LE(mu[p.order[lvl]], eps + 1e-12);
  }
}

TEST(RegionMu, EpsilonSandwich) {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(0.3, 0.9);
  for (int t = 0; t < 8; ++t) {
    const double p_s = u(g);
    const std::size_t K = 1 + t % 3, U = t % 2 + 1;
    const auto sc = make_symmetric_mu(p_s, feasible_pd(g, p_s), K, U, 10.0);
    const double eps = sc.r1 * p_s * (1 - p_s) * 1.5;
    const auto er = epsilon_region(sc, eps);
    const auto full = reduced_region(sc);
    EXPECT_LE(er.k0, sc.flows());
    EXPECT_EQ(contains_set(er.region.vertices.region, full.vertices.region), 0.0);
    EXPECT_EQ(contains_set(full.vertices.region, er.region.vertices.region, eps), 0.0);
  }
}

TEST(RegionMu, Errors) {
  MuScenario asym;
  asym.ps = {0.5, 0.6};
  asym.pd = {0.9, 0.9};
  EXPECT_THROW(epsilon_region(asym, 0.01), NotSymmetric);

  const auto sc = make_symmetric_mu(0.5, 0.9, 3, 2, 1.0);
  EXPECT_THROW(epsilon_region(sc, 0.5), EpsilonTooLarge);
  EXPECT_THROW(epsilon_region(sc, 0.0), std::invalid_argument);
  MuRegionOptions tight;
  tight.budget = 10;
  EXPECT_THROW(reduced_region(sc, tight), ComplexityGuard);
  EXPECT_THROW(exact_region(sc, 9, tight), ComplexityGuard);
  EXPECT_THROW(exact_region(sc, 1), std::invalid_argument);

  const MuPolicy p{{0, 1, 2, 3, 4}};
  auto a = alpha_star(sc);
  a[1] += 1e-6;
  EXPECT_THROW(service_rates(sc, p, a), AlphaInfeasible);
  EXPECT_THROW(service_rates(sc, p, std::vector<double>{0.1}), DimensionMismatch);
  EXPECT_THROW(service_rates(sc, MuPolicy{{0, 0}}, alpha_star(sc)), std::invalid_argument);
  EXPECT_THROW(service_rates(sc, MuPolicy{{7}}, alpha_star(sc)), UnknownIndex);
  EXPECT_THROW(epsilon_evaluation_count(2, 1, 4), DepthTooLarge);

  MuScenario dead;
  dead.ps = {0.9};
  dead.pd = {0.05};
  EXPECT_THROW(alpha_star(dead), Unstable);
}
