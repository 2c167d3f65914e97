#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "relaystab/channel.hpp"
#include "relaystab/policy.hpp"
#include "relaystab/qbd_exact.hpp"

namespace relaystab {

// (a1, a2, a3, a4): UL share when both legs can send, indexed by the
// (s, d) rate pair (r1,r1), (r1,r2), (r2,r1), (r2,r2)
using SsAlpha = std::array<double, 4>;

struct SsLinks {
  LinkStateProbs s, u, d;
};

struct SsScenario {
  SsLinks links;
  int k = 2;
  double r2 = 1.0;

  double r1() const { return k * r2; }

  void validate() const {
    for (const auto* l : {&links.s, &links.u, &links.d}) {
      if (l->size() != 3) throw std::invalid_argument("3-UE links need three SNR states");
      for (double p : l->probs)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("state probability outside [0,1]");
      if (std::abs(l->sum() - 1.0) > 1e-12) throw std::invalid_argument("state probabilities must sum to 1");
    }
    if (k < 1) throw std::invalid_argument("k must be a positive integer");
    if (!(r2 > 0.0)) throw std::invalid_argument("r2 must be positive");
  }
};

inline SsScenario make_ss_scenario(const RadioConfig& cfg, Meters d_s, Meters d_u, Meters d_d, int k,
                                   double r2) {
  SsScenario sc;
  sc.links.s = state_probabilities({d_s, Direction::uplink}, cfg, 3);
  sc.links.u = state_probabilities({d_u, Direction::uplink}, cfg, 3);
  sc.links.d = state_probabilities({d_d, Direction::downlink}, cfg, 3);
  sc.k = k;
  sc.r2 = r2;
  sc.validate();
  return sc;
}

inline bool in_unit_cube(const SsAlpha& a) {
  for (double v : a)
    if (!(v >= 0.0 && v <= 1.0)) return false;
  return true;
}

inline ChainSpec relay_chain(const SsPolicyParams& p, const SsLinks& l, int k, const SsAlpha& a) {
  const double s1 = l.s[0], s2 = l.s[1];
  const double d1 = l.d[0], d2 = l.d[1], d3 = l.d[2];
  ChainSpec c;
  c.k = k;
  c.a01 = s1 * p.U;
  c.a02 = s2 * p.V;
  c.a11 = s1 * (a[0] * d1 + a[1] * d2 + d3) * p.U;
  c.a12 = s2 * (a[2] * d1 * p.U + a[3] * d2 * p.V + d3 * p.V);
  c.b11 = d1 * (1.0 - a[0] * s1 - a[2] * s2) * p.U;
  c.b12 = d2 * (p.N - a[1] * s1 * p.U - a[3] * s2 * p.V);
  return c;
}

// service rates of Q_s and Q_u conditioned on Q_BS empty (0) / nonempty (1)
struct ConditionalRates {
  double mu_s0, mu_s1, mu_u0, mu_u1;
};

inline ConditionalRates conditional_rates(const SsPolicyParams& p, const SsScenario& sc,
                                          const SsAlpha& a) {
  const auto c = relay_chain(p, sc.links, sc.k, a);
  const double u1 = sc.links.u[0], u2 = sc.links.u[1];
  return {sc.r2 * c.a0(), sc.r2 * c.a1(), sc.r1() * u1 * p.W + sc.r2 * u2 * p.X,
          sc.r1() * u1 * p.Y + sc.r2 * u2 * p.Z};
}

struct RatePair {
  double mu_s;
  double mu_u;
};

inline RatePair mix_rates(const ConditionalRates& c, double pi0) {
  return {pi0 * c.mu_s0 + (1.0 - pi0) * c.mu_s1, pi0 * c.mu_u0 + (1.0 - pi0) * c.mu_u1};
}

}  // namespace relaystab
