#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaystab/channel.hpp"
#include "relaystab/errors.hpp"
#include "relaystab/parallel.hpp"
#include "relaystab/policy.hpp"
#include "relaystab/polytope.hpp"
#include "relaystab/region_ss.hpp"

namespace relaystab {

inline constexpr double kDefaultBudget = 1e7;
inline constexpr double kAlphaTolerance = 1e-12;

// two-rate model (r2 = 0): per-flow success probabilities at r1
struct MuScenario {
  std::vector<double> ps, pd;  // UE2UE flows
  std::vector<double> pu;      // UE2BS flows
  double r1 = 1.0;

  std::size_t K() const { return ps.size(); }
  std::size_t U() const { return pu.size(); }
  std::size_t flows() const { return K() + U(); }

  void validate() const {
    if (pd.size() != ps.size()) throw std::invalid_argument("ps and pd must have one entry per UE2UE flow");
    if (flows() == 0) throw std::invalid_argument("scenario needs at least one flow");
    for (const auto* v : {&ps, &pd, &pu})
      for (double p : *v)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0,1]");
    if (!(r1 > 0.0)) throw std::invalid_argument("r1 must be positive");
  }

  bool symmetric() const {
    const double s = K() ? ps[0] : pu[0];
    for (double p : ps)
      if (p != s) return false;
    for (double p : pu)
      if (p != s) return false;
    for (double p : pd)
      if (p != pd[0]) return false;
    return true;
  }

  bool silent(std::size_t i) const { return ps[i] == 0.0 || pd[i] == 0.0; }
};

inline MuScenario make_symmetric_mu(double p_s, double p_d, std::size_t K, std::size_t U, double r1) {
  MuScenario sc;
  sc.ps.assign(K, p_s);
  sc.pd.assign(K, p_d);
  sc.pu.assign(U, p_s);
  sc.r1 = r1;
  sc.validate();
  return sc;
}

inline MuScenario make_symmetric_mu(const RadioConfig& cfg, Meters d, std::size_t K, std::size_t U,
                                    double r1) {
  const auto p = symmetric_probs(d, cfg);
  return make_symmetric_mu(p.p_s, p.p_d, K, U, r1);
}

inline double alpha_star_raw(double p_s, double p_d) {
  return (p_d - p_s + p_s * p_d) / (2.0 * p_s * p_d);
}

// per-flow usable threshold, clamped to 1; silent flows get 0
inline std::vector<double> alpha_star(const MuScenario& sc) {
  std::vector<double> a(sc.K(), 0.0);
  for (std::size_t i = 0; i < sc.K(); ++i) {
    if (sc.silent(i)) continue;
    const double raw = alpha_star_raw(sc.ps[i], sc.pd[i]);
    if (raw < 0.0) throw Unstable("relay queue of flow " + std::to_string(i) + " is unstable for every alpha");
    a[i] = std::min(1.0, raw);
  }
  return a;
}

namespace detail {

inline double relay_denominator(double p_s, double p_d, double a) {
  return p_d * (1.0 + p_s) - 2.0 * a * p_s * p_d;
}

// share of slots that a nonsilent UE2UE flow does not use, given it was offered the slot
inline double ue2ue_pass(double p_s, double p_d, double a) {
  return (1.0 - p_s) * (1.0 - p_s * p_d / relay_denominator(p_s, p_d, a));
}

}  // namespace detail

// rates indexed like the flows: UE2UE 0..K-1 then UE2BS K..K+U-1
inline std::vector<double> service_rates(const MuScenario& sc, const MuPolicy& policy,
                                         std::span<const double> alpha) {
  const std::size_t K = sc.K(), U = sc.U();
  if (alpha.size() != K) throw DimensionMismatch("alpha needs one entry per UE2UE flow");
  policy.validate(K, U);
  const auto astar = alpha_star(sc);
  for (std::size_t i = 0; i < K; ++i) {
    if (!(alpha[i] >= 0.0)) throw AlphaInfeasible("alpha must be nonnegative");
    if (!sc.silent(i) && alpha[i] > astar[i] + kAlphaTolerance)
      throw AlphaInfeasible("alpha of flow " + std::to_string(i) + " exceeds its stability threshold");
  }
  std::vector<double> mu(K + U, 0.0);
  double free = 1.0;  // probability that every higher-priority flow stays idle
  for (auto c : policy.order) {
    if (c < K) {
      if (sc.silent(c)) continue;
      const double p_s = sc.ps[c], p_d = sc.pd[c], a = alpha[c];
      const double own = (p_d - a * p_s * p_d) / detail::relay_denominator(p_s, p_d, a);
      mu[c] = sc.r1 * p_s * own * free;
      free *= detail::ue2ue_pass(p_s, p_d, a);
    } else {
      const double p = sc.pu[c - K];
      mu[c] = sc.r1 * p * free;
      free *= 1.0 - p;
    }
  }
  return mu;
}

// gamma with mu(lambda * a_hi) = gamma mu(0) + (1 - gamma) mu(a_hi) componentwise
inline double convexity_coefficient_at(double p_s, double p_d, double lambda, double a_hi) {
  const double b = (1.0 + p_s) * p_d;
  return (1.0 - lambda) * b / (b - 2.0 * lambda * a_hi * p_s * p_d);
}

inline double convexity_coefficient(double p_s, double p_d, double lambda) {
  const double b = (1.0 + p_s) * p_d;
  return b * (1.0 - lambda) / (b - lambda * (p_s * p_d + p_d - p_s));
}

struct MuRegionOptions {
  double budget = kDefaultBudget;
};

struct MuRegion {
  RegionVertexSet vertices;
  double evaluations = 0;
  double policies = 0;
  std::size_t depth = 0;
};

inline double factorial(std::size_t n) { return policy_count(n, n); }

namespace detail {

inline std::vector<std::size_t> active_ue2ue(const MuScenario& sc, const MuPolicy& p) {
  std::vector<std::size_t> out;
  for (auto c : p.order)
    if (c < sc.K() && !sc.silent(c)) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

inline VertexLabel mu_label(const MuPolicy& p, std::span<const double> a) {
  return {p.to_string(), {a.begin(), a.end()}, false};
}

// corners alpha_i in {0, alpha_i*} over the listed flows, others 0
template <class F>
void for_each_border(const std::vector<std::size_t>& flows, const std::vector<double>& astar, std::size_t K,
                     F&& f) {
  std::vector<double> a(K, 0.0);
  const std::size_t n = flows.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t b = 0; b < n; ++b) a[flows[b]] = (mask >> b) & 1 ? astar[flows[b]] : 0.0;
    f(std::span<const double>(a));
  }
}

struct Collected {
  std::vector<Point> pts;
  std::vector<VertexLabel> labels;
  std::size_t next_compact = 4096;
};

inline MuRegion finish(std::size_t dim, std::vector<Collected>& parts, double evals, double pols,
                       std::size_t depth) {
  Collected all;
  for (auto& c : parts) {
    for (auto& p : c.pts) all.pts.push_back(std::move(p));
    for (auto& l : c.labels) all.labels.push_back(std::move(l));
  }
  MuRegion r;
  // above three flows the vertex list is dominance-filtered only
  r.vertices = make_vertex_set(dim, std::move(all.pts), std::move(all.labels), dim > 3 ? 0 : 4000);
  r.vertices.evaluated = static_cast<std::size_t>(evals);
  r.evaluations = evals;
  r.policies = pols;
  r.depth = depth;
  return r;
}

inline std::vector<MuPolicy> materialize(std::size_t K, std::size_t U, std::optional<std::size_t> depth) {
  std::vector<MuPolicy> out;
  PolicyStream(K, U, depth).for_each([&](const MuPolicy& p) { out.push_back(p); });
  return out;
}

// dominance-only prefilter so per-worker buffers stay small
inline void compact(Collected& c, std::size_t dim) {
  if (c.pts.size() < c.next_compact) return;
  const auto keep = reduce_indices(c.pts, dim, 0);
  Collected k;
  for (auto i : keep) {
    k.pts.push_back(std::move(c.pts[i]));
    k.labels.push_back(std::move(c.labels[i]));
  }
  k.next_compact = std::max<std::size_t>(4096, 2 * k.pts.size());
  c = std::move(k);
}

}  // namespace detail

inline double reduced_evaluation_count(const MuScenario& sc) {
  return factorial(sc.flows()) * std::pow(2.0, static_cast<double>(sc.K()));
}

inline double exact_evaluation_count(const MuScenario& sc, int L) {
  return factorial(sc.flows()) * std::pow(static_cast<double>(L), static_cast<double>(sc.K()));
}

// hull over all orderings x 2^K border alpha vectors
inline MuRegion reduced_region(const MuScenario& sc, const MuRegionOptions& opt = {}) {
  sc.validate();
  const double evals = reduced_evaluation_count(sc);
  if (evals > opt.budget) throw ComplexityGuard(evals, opt.budget);
  const auto astar = alpha_star(sc);
  const auto policies = detail::materialize(sc.K(), sc.U(), std::nullopt);
  const std::size_t nw = worker_count();
  std::vector<detail::Collected> parts(nw);
  parallel_blocks(
      policies.size(),
      [&](std::size_t b, std::size_t e, std::size_t w) {
        for (std::size_t i = b; i < e; ++i) {
          const auto& p = policies[i];
          detail::for_each_border(detail::active_ue2ue(sc, p), astar, sc.K(), [&](std::span<const double> a) {
            parts[w].pts.push_back(service_rates(sc, p, a));
            parts[w].labels.push_back(detail::mu_label(p, a));
          });
          detail::compact(parts[w], sc.flows());
        }
      },
      nw);
  return detail::finish(sc.flows(), parts, evals, static_cast<double>(policies.size()), sc.flows());
}

// all orderings x L^K grid on [0, alpha*]; grid points inside their own policy's border
// hull are folded away as they stream, border corners are always kept
inline MuRegion exact_region(const MuScenario& sc, int L, const MuRegionOptions& opt = {}) {
  sc.validate();
  if (L < 2) throw std::invalid_argument("grid resolution must be at least 2");
  const double evals = exact_evaluation_count(sc, L);
  if (evals > opt.budget) throw ComplexityGuard(evals, opt.budget);
  const std::size_t K = sc.K(), dim = sc.flows();
  const auto astar = alpha_star(sc);
  const auto policies = detail::materialize(K, sc.U(), std::nullopt);
  const std::size_t nw = worker_count();
  std::vector<detail::Collected> parts(nw);
  std::uint64_t per = 1;
  for (std::size_t i = 0; i < K; ++i) per *= static_cast<std::uint64_t>(L);

  parallel_blocks(
      policies.size(),
      [&](std::size_t b, std::size_t e, std::size_t w) {
        std::vector<double> a(K);
        for (std::size_t pi = b; pi < e; ++pi) {
          const auto& p = policies[pi];
          std::vector<Point> border;
          detail::for_each_border(detail::active_ue2ue(sc, p), astar, K,
                                  [&](std::span<const double> x) { border.push_back(service_rates(sc, p, x)); });
          for (std::uint64_t g = 0; g < per; ++g) {
            std::uint64_t idx = g;
            bool corner = true;
            for (std::size_t i = 0; i < K; ++i) {
              const auto j = static_cast<int>(idx % static_cast<std::uint64_t>(L));
              idx /= static_cast<std::uint64_t>(L);
              a[i] = sc.silent(i) ? 0.0 : astar[i] * j / (L - 1);
              if (j != 0 && j != L - 1) corner = false;
            }
            auto mu = service_rates(sc, p, a);
            if (!corner && detail::gauge_impl(border, mu) <= 1.0 + 1e-12) continue;
            parts[w].pts.push_back(std::move(mu));
            parts[w].labels.push_back(detail::mu_label(p, a));
          }
          detail::compact(parts[w], dim);
        }
      },
      nw);
  return detail::finish(dim, parts, evals, static_cast<double>(policies.size()), dim);
}

// smallest depth whose best-case service r1 p_s (1-p_s)^(k-1) falls to eps, capped at n
inline std::size_t k0_depth(double eps, double r1, double p_s, std::size_t n) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (eps >= r1 * p_s) throw EpsilonTooLarge("epsilon must be below r1 * p_s");
  double best = r1 * p_s;
  std::size_t k = 1;
  while (k < n && best > eps * (1.0 + 1e-12)) {
    best *= 1.0 - p_s;
    ++k;
  }
  return k;
}

// number of (prefix, border alpha) evaluations; prefixes with j UE2UE flows contribute 2^j
inline double epsilon_evaluation_count(std::size_t K, std::size_t U, std::size_t depth) {
  if (depth > K + U) throw DepthTooLarge("prefix depth exceeds number of communications");
  // ordered selections of depth flows with j from K: C(depth, j) K!/(K-j)! U!/(U-depth+j)!
  double total = 0;
  for (std::size_t j = 0; j <= depth; ++j) {
    if (j > K || depth - j > U) continue;
    double c = 1;
    for (std::size_t t = 0; t < j; ++t) c = c * static_cast<double>(depth - t) / static_cast<double>(t + 1);
    total += c * policy_count(K, j) * policy_count(U, depth - j) * std::pow(2.0, static_cast<double>(j));
  }
  return total;
}

struct EpsilonRegion {
  MuRegion region;
  std::size_t k0 = 0;
};

inline EpsilonRegion epsilon_region(const MuScenario& sc, double eps, const MuRegionOptions& opt = {}) {
  sc.validate();
  if (!sc.symmetric()) throw NotSymmetric("epsilon approximation needs a symmetric scenario");
  const double p_s = sc.K() ? sc.ps[0] : sc.pu[0];
  EpsilonRegion out;
  out.k0 = k0_depth(eps, sc.r1, p_s, sc.flows());
  const double evals = epsilon_evaluation_count(sc.K(), sc.U(), out.k0);
  if (evals > opt.budget) throw ComplexityGuard(evals, opt.budget);
  const auto astar = alpha_star(sc);
  const auto policies = detail::materialize(sc.K(), sc.U(), out.k0);
  const std::size_t nw = worker_count();
  std::vector<detail::Collected> parts(nw);
  parallel_blocks(
      policies.size(),
      [&](std::size_t b, std::size_t e, std::size_t w) {
        for (std::size_t i = b; i < e; ++i) {
          const auto& p = policies[i];
          detail::for_each_border(detail::active_ue2ue(sc, p), astar, sc.K(), [&](std::span<const double> a) {
            parts[w].pts.push_back(service_rates(sc, p, a));
            parts[w].labels.push_back(detail::mu_label(p, a));
          });
          detail::compact(parts[w], sc.flows());
        }
      },
      nw);
  out.region = detail::finish(sc.flows(), parts, evals, static_cast<double>(policies.size()), out.k0);
  return out;
}

}  // namespace relaystab
