#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "relaystab/errors.hpp"
#include "relaystab/policy.hpp"
#include "relaystab/qbd_exact.hpp"
#include "relaystab/ss_model.hpp"

namespace relaystab {

inline constexpr double kSlackTolerance = 1e-12;

struct ApproxChain {
  double a0 = 0, a1 = 0, b = 0;
  bool stable() const { return a1 < b; }
};

inline ApproxChain aggregate(const ChainSpec& c) { return {c.a0(), c.a1(), c.b()}; }

inline double pi0_closed_form(const ApproxChain& ch) {
  if (ch.a1 - ch.b > kSlackTolerance) throw Unstable("aggregate arrivals exceed service");
  const double slack = std::max(0.0, ch.b - ch.a1);
  if (slack + ch.a0 == 0.0) return 1.0;
  return slack / (slack + ch.a0);
}

// c . alpha <= M  is the relay stability condition written in alpha
struct AlphaLinearForm {
  std::array<double, 4> c;
  double M;
};

inline AlphaLinearForm alpha_linear_form(const SsPolicyParams& p, const SsLinks& l, int k) {
  const double s1 = l.s[0], s2 = l.s[1];
  const double d1 = l.d[0], d2 = l.d[1], d3 = l.d[2];
  AlphaLinearForm f;
  f.c = {2.0 * k * s1 * d1 * p.U, (k + 1.0) * s1 * d2 * p.U, (k + 1.0) * s2 * d1 * p.U,
         2.0 * s2 * d2 * p.V};
  f.M = k * d1 * p.U + d2 * p.N - (k * s1 * p.U + s2 * p.V) * d3;
  return f;
}

struct AlphaConstraint {
  bool satisfied;
  double slack;
};

inline AlphaConstraint alpha_constraint(const SsPolicyParams& p, const SsLinks& l, int k,
                                        const SsAlpha& a) {
  const auto f = alpha_linear_form(p, l, k);
  double lhs = 0;
  for (int j = 0; j < 4; ++j) lhs += f.c[j] * a[j];
  const double slack = f.M - lhs;
  return {slack >= -kSlackTolerance, slack};
}

namespace detail {

inline void push_unique(std::vector<SsAlpha>& out, const SsAlpha& a) {
  for (const auto& b : out) {
    double d = 0;
    for (int j = 0; j < 4; ++j) d = std::max(d, std::abs(a[j] - b[j]));
    if (d < 1e-12) return;
  }
  out.push_back(a);
}

}  // namespace detail

inline std::vector<SsAlpha> candidate_set(const SsPolicyParams& p, const SsLinks& l, int k) {
  const auto f = alpha_linear_form(p, l, k);
  const auto& c = f.c;
  auto feasible = [&](const SsAlpha& a) {
    double lhs = 0;
    for (int j = 0; j < 4; ++j) lhs += c[j] * a[j];
    return f.M - lhs >= -kSlackTolerance;
  };
  auto in01 = [](double v) { return v >= -1e-12 && v <= 1.0 + 1e-12; };
  auto clip = [](double v) { return std::min(1.0, std::max(0.0, v)); };

  // empty when even alpha = 0 overloads the relay queue
  std::vector<SsAlpha> out;
  if (feasible({0, 0, 0, 0})) detail::push_unique(out, {0, 0, 0, 0});

  for (int a2 = 0; a2 <= 1; ++a2)
    for (int a3 = 0; a3 <= 1; ++a3) {
      const SsAlpha lo{0, double(a2), double(a3), 0};
      const SsAlpha hi{1, double(a2), double(a3), 1};
      if (feasible(lo)) detail::push_unique(out, lo);
      if (feasible(hi)) {
        detail::push_unique(out, hi);
      } else if (feasible(lo)) {
        // (a1, a4) on the active constraint; every such pair gives the same rates
        const double room = f.M - c[1] * a2 - c[2] * a3;
        SsAlpha a = lo;
        if (c[0] >= room) {
          a[0] = c[0] > 0 ? clip(room / c[0]) : 0.0;
        } else {
          a[0] = 1.0;
          a[3] = c[3] > 0 ? clip((room - c[0]) / c[3]) : 0.0;
        }
        detail::push_unique(out, a);
      }
    }

  for (int a14 = 0; a14 <= 1; ++a14) {
    const double base = (c[0] + c[3]) * a14;
    if (c[2] > 0) {
      const double a3 = (f.M - base - c[1]) / c[2];
      if (in01(a3)) {
        const SsAlpha a{double(a14), 1, clip(a3), double(a14)};
        if (feasible(a)) detail::push_unique(out, a);
      }
    }
    for (int a3 = 0; a3 <= 1; ++a3) {
      if (!(c[1] > 0)) continue;
      const double a2 = (f.M - base - c[2] * a3) / c[1];
      if (in01(a2)) {
        const SsAlpha a{double(a14), clip(a2), double(a3), double(a14)};
        if (feasible(a)) detail::push_unique(out, a);
      }
    }
  }
  return out;
}

// closed forms; Dp = a1 - b - a0 is the shared denominator
inline RatePair approx_service_rates(const SsPolicyParams& p, const SsScenario& sc,
                                     const SsAlpha& a) {
  const auto& l = sc.links;
  const int k = sc.k;
  const double s1 = l.s[0], s2 = l.s[1];
  const double d1 = l.d[0], d2 = l.d[1], d3 = l.d[2];
  const double u1 = l.u[0], u2 = l.u[1];
  if (!alpha_constraint(p, l, k, a).satisfied) throw Unstable("fraction vector violates relay stability");
  const auto ch = relay_chain(p, l, k, a);
  const double A0 = ch.a0();
  const double mu_u0 = sc.r1() * u1 * p.W + sc.r2 * u2 * p.X;
  const double mu_u1 = sc.r1() * u1 * p.Y + sc.r2 * u2 * p.Z;
  if (A0 == 0.0) return {0.0, mu_u0};
  const double Dp = ch.a1() - ch.b() - A0;
  if (Dp >= -kSlackTolerance) throw Unstable("degenerate relay chain denominator");
  const double Np = (1.0 - k) * a[1] * s1 * d2 * p.U + (k - 1.0) * a[2] * s2 * d1 * p.U -
                    (k * d1 * p.U + d2 * p.N) + A0 * (1.0 - d3);
  const double mu_s = 0.5 * (sc.r1() * s1 * p.U + sc.r2 * s2 * p.V) * (1.0 + Np / Dp);
  const double mu_u = mu_u0 + (mu_u0 - mu_u1) * A0 / Dp;
  return {mu_s, mu_u};
}

}  // namespace relaystab
