#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "relaystab/bd_approx.hpp"
#include "relaystab/errors.hpp"
#include "relaystab/parallel.hpp"
#include "relaystab/policy.hpp"
#include "relaystab/polytope.hpp"
#include "relaystab/qbd_exact.hpp"
#include "relaystab/ss_model.hpp"

namespace relaystab {

struct VertexLabel {
  std::string policy;
  std::vector<double> alpha;
  // stability-boundary limit (Q_BS empty with probability 0)
  bool limit = false;
};

struct RegionVertexSet {
  CoSet region;
  std::vector<VertexLabel> labels;  // aligned with region.generators()
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

namespace detail {

inline RegionVertexSet make_vertex_set(std::size_t dim, std::vector<Point> pts,
                                       std::vector<VertexLabel> labels, std::size_t lp_limit = 4000) {
  RegionVertexSet out;
  const auto keep = reduce_indices(pts, dim, lp_limit);
  std::vector<Point> g;
  for (auto i : keep) {
    g.push_back(std::move(pts[i]));
    out.labels.push_back(std::move(labels[i]));
  }
  out.region = CoSet(dim, std::move(g));
  return out;
}

}  // namespace detail

struct ExactEval {
  bool stable = false;
  double drift = 0;
  double pi0 = 0;
  RatePair rates{0, 0};
};

// throws SingularSystem / NoInteriorRoot from the solver on degenerate chains
inline ExactEval exact_eval(SsPolicy g, const SsScenario& sc, const SsAlpha& a) {
  const auto& l = sc.links;
  const auto p = ss_params(g, l.s, l.u, l.d);
  const auto chain = relay_chain(p, l, sc.k, a);
  ExactEval e;
  e.drift = chain.drift();
  if (e.drift >= -kDriftTolerance) return e;
  const auto dist = solve_stationary(chain);
  e.stable = true;
  e.pi0 = std::clamp(dist.pi0, 0.0, 1.0);
  e.rates = mix_rates(conditional_rates(p, sc, a), e.pi0);
  return e;
}

inline RatePair boundary_limit_rates(SsPolicy g, const SsScenario& sc, const SsAlpha& a) {
  const auto& l = sc.links;
  return mix_rates(conditional_rates(ss_params(g, l.s, l.u, l.d), sc, a), 0.0);
}

struct SkipRecord {
  SsPolicy policy;
  SsAlpha alpha;
  double drift;
  std::string reason;
};

struct SsExactOptions {
  int grid = 16;
  bool limit_points = true;
  // called under a lock
  std::function<void(const SkipRecord&)> on_skip;
};

struct SsExactResult {
  RegionVertexSet vertices;
  // max over stable grid points of (approx mu_s - exact mu_s) / approx mu_s
  double max_relative_gap = 0;
  double min_dominance_margin = 0;
};

inline SsAlpha grid_alpha(std::size_t idx, int L) {
  SsAlpha a{};
  const double step = 1.0 / (L - 1);
  for (int j = 3; j >= 0; --j) {
    a[static_cast<std::size_t>(j)] = static_cast<double>(idx % static_cast<std::size_t>(L)) * step;
    idx /= static_cast<std::size_t>(L);
  }
  return a;
}

inline SsExactResult exact_region_full(const SsScenario& sc, const SsExactOptions& opt = {}) {
  sc.validate();
  if (opt.grid < 2) throw std::invalid_argument("grid resolution must be at least 2");
  const int L = opt.grid;
  const std::size_t per = static_cast<std::size_t>(L) * L * L * L;
  const std::size_t total = per * all_ss_policies.size();

  struct Sample {
    double s, u;
    std::uint8_t policy;
    bool limit;
    SsAlpha alpha;
  };
  struct Worker {
    std::vector<Sample> buf;
    std::size_t evaluated = 0, skipped = 0;
    double gap = 0, margin = 0;
  };
  const std::size_t nw = worker_count();
  std::vector<Worker> workers(nw);
  std::mutex skip_mu;

  auto compact = [](std::vector<Sample>& buf) {
    std::vector<Point> pts;
    pts.reserve(buf.size());
    for (const auto& x : buf) pts.push_back({x.s, x.u});
    std::vector<Sample> kept;
    for (auto i : reduce_indices(pts, 2)) kept.push_back(buf[i]);
    buf.swap(kept);
  };

  const auto& l = sc.links;
  std::array<SsPolicyParams, 6> params{};
  for (std::size_t i = 0; i < 6; ++i) params[i] = ss_params(all_ss_policies[i], l.s, l.u, l.d);

  parallel_blocks(
      total,
      [&](std::size_t b, std::size_t e, std::size_t w) {
        auto& W = workers[w];
        for (std::size_t idx = b; idx < e; ++idx) {
          const std::size_t pi = idx / per;
          const auto g = all_ss_policies[pi];
          const SsAlpha a = grid_alpha(idx % per, L);
          ++W.evaluated;
          const double drift = relay_chain(params[pi], l, sc.k, a).drift();
          std::string reason;
          try {
            const auto ev = exact_eval(g, sc, a);
            if (ev.stable) {
              W.buf.push_back({ev.rates.mu_s, ev.rates.mu_u, static_cast<std::uint8_t>(pi), false, a});
              const auto ap = approx_service_rates(params[pi], sc, a);
              W.margin = std::min(W.margin, ap.mu_s - ev.rates.mu_s);
              if (ap.mu_s > 0) W.gap = std::max(W.gap, (ap.mu_s - ev.rates.mu_s) / ap.mu_s);
            } else if (opt.limit_points && std::abs(drift) <= kDriftTolerance) {
              const auto r = boundary_limit_rates(g, sc, a);
              W.buf.push_back({r.mu_s, r.mu_u, static_cast<std::uint8_t>(pi), true, a});
            } else {
              reason = "nonnegative drift";
            }
          } catch (const std::exception& ex) {
            reason = ex.what();
          }
          if (!reason.empty()) {
            ++W.skipped;
            if (opt.on_skip) {
              std::lock_guard lk(skip_mu);
              opt.on_skip({g, a, drift, reason});
            }
          }
          if (W.buf.size() >= 1u << 16) compact(W.buf);
        }
      },
      nw);

  std::vector<Point> pts;
  std::vector<VertexLabel> labels;
  SsExactResult res;
  auto push = [&](double s, double u, SsPolicy g, const SsAlpha& a, bool limit) {
    pts.push_back({std::max(0.0, s), std::max(0.0, u)});
    labels.push_back({to_string(g), {a.begin(), a.end()}, limit});
  };
  for (auto& W : workers) {
    compact(W.buf);
    for (const auto& x : W.buf) push(x.s, x.u, all_ss_policies[x.policy], x.alpha, x.limit);
    res.vertices.evaluated += W.evaluated;
    res.vertices.skipped += W.skipped;
    res.max_relative_gap = std::max(res.max_relative_gap, W.gap);
    res.min_dominance_margin = std::min(res.min_dominance_margin, W.margin);
  }
  if (opt.limit_points) {
    for (std::size_t pi = 0; pi < 6; ++pi)
      for (const auto& a : candidate_set(params[pi], l, sc.k)) {
        if (alpha_constraint(params[pi], l, sc.k, a).slack > kDriftTolerance) continue;
        const auto r = boundary_limit_rates(all_ss_policies[pi], sc, a);
        push(r.mu_s, r.mu_u, all_ss_policies[pi], a, true);
      }
  }
  const auto ev = res.vertices.evaluated, sk = res.vertices.skipped;
  res.vertices = detail::make_vertex_set(2, std::move(pts), std::move(labels));
  res.vertices.evaluated = ev;
  res.vertices.skipped = sk;
  return res;
}

inline RegionVertexSet exact_region(const SsScenario& sc, int grid, const SsExactOptions& base = {}) {
  auto opt = base;
  opt.grid = grid;
  return exact_region_full(sc, opt).vertices;
}

inline RegionVertexSet approx_region(const SsScenario& sc) {
  sc.validate();
  const auto& l = sc.links;
  std::vector<Point> pts;
  std::vector<VertexLabel> labels;
  std::size_t evaluated = 0;
  for (auto g : all_ss_policies) {
    const auto p = ss_params(g, l.s, l.u, l.d);
    for (const auto& a : candidate_set(p, l, sc.k)) {
      ++evaluated;
      const auto r = approx_service_rates(p, sc, a);
      const bool boundary = alpha_constraint(p, l, sc.k, a).slack <= kDriftTolerance;
      pts.push_back({std::max(0.0, r.mu_s), std::max(0.0, r.mu_u)});
      labels.push_back({to_string(g), {a.begin(), a.end()}, boundary});
    }
  }
  auto out = detail::make_vertex_set(2, std::move(pts), std::move(labels));
  out.evaluated = evaluated;
  return out;
}

// relative error of the approximate source rate at alpha, from the exact Pi_1..Pi_{k-1}
inline double relative_error_at(SsPolicy g, const SsScenario& sc, const SsAlpha& a) {
  const auto& l = sc.links;
  const auto p = ss_params(g, l.s, l.u, l.d);
  const auto c = relay_chain(p, l, sc.k, a);
  if (sc.k == 1 || c.drift() >= -kDriftTolerance || c.a0() == 0.0) return 0.0;
  const auto dist = solve_stationary(c);
  double s = 0;
  for (int i = 1; i <= sc.k - 1; ++i) s += dist.pi(static_cast<std::size_t>(i));
  return sc.k * c.b11 * s * (c.a0() - c.a1()) / (c.a0() * c.b());
}

struct PolicyErrorBound {
  SsPolicy policy;
  SsAlpha alpha_star;
  double mu_s_approx;
  double epsilon;
};

struct ErrorBound {
  double eps_star = 0;
  std::vector<PolicyErrorBound> per_policy;
};

inline ErrorBound error_bound_detail(const SsScenario& sc) {
  sc.validate();
  const auto& l = sc.links;
  ErrorBound out;
  for (auto g : all_ss_policies) {
    const auto p = ss_params(g, l.s, l.u, l.d);
    std::optional<PolicyErrorBound> best;
    for (const auto& a : candidate_set(p, l, sc.k)) {
      const double mu = approx_service_rates(p, sc, a).mu_s;
      const double eps = relative_error_at(g, sc, a);
      const double tie = 1e-12 * std::max(1.0, std::abs(mu));
      if (!best || mu > best->mu_s_approx + tie ||
          (std::abs(mu - best->mu_s_approx) <= tie && eps > best->epsilon))
        best = PolicyErrorBound{g, a, mu, eps};
    }
    if (!best) continue;
    out.per_policy.push_back(*best);
    out.eps_star = std::max(out.eps_star, best->epsilon);
  }
  return out;
}

inline double error_bound(const SsScenario& sc) { return error_bound_detail(sc).eps_star; }

// (approx - exact) / approx for the source rate; nullopt when the exact chain is not stable
inline std::optional<double> relative_gap(SsPolicy g, const SsScenario& sc, const SsAlpha& a,
                                          double* dominance_margin = nullptr) {
  const auto ev = exact_eval(g, sc, a);
  if (!ev.stable) return std::nullopt;
  const auto& l = sc.links;
  const auto ap = approx_service_rates(ss_params(g, l.s, l.u, l.d), sc, a);
  if (dominance_margin) *dominance_margin = ap.mu_s - ev.rates.mu_s;
  if (ap.mu_s <= 0) return 0.0;
  return (ap.mu_s - ev.rates.mu_s) / ap.mu_s;
}

// smallest eps with (1 - eps) * outer inside inner
inline double region_gap(const CoSet& outer, const CoSet& inner) {
  double g = 0;
  for (const auto& v : outer.generators()) g = std::max(g, gauge(inner, v));
  if (g <= 1.0) return 0.0;
  return 1.0 - 1.0 / g;
}

struct SandwichReport {
  double eps_star = 0;
  double measured_gap = 0;
  // exact inside approx
  double upper_violation = 0;
  // (1 - eps*) approx inside exact
  double lower_violation = 0;
  // smallest eps with (1 - eps) approx inside exact
  double region_gap = 0;
  RegionVertexSet exact;
  RegionVertexSet approx;

  bool holds() const { return upper_violation == 0.0 && lower_violation == 0.0; }
};

inline SandwichReport sandwich_check(const SsScenario& sc, int grid, const SsExactOptions& base = {}) {
  auto opt = base;
  opt.grid = grid;
  auto ex = exact_region_full(sc, opt);
  SandwichReport r;
  r.eps_star = error_bound(sc);
  r.measured_gap = ex.max_relative_gap;
  r.exact = std::move(ex.vertices);
  r.approx = approx_region(sc);
  r.upper_violation = contains_set(r.exact.region, r.approx.region);
  r.lower_violation = contains_set(scaled(r.approx.region, 1.0 - r.eps_star), r.exact.region);
  r.region_gap = region_gap(r.approx.region, r.exact.region);
  return r;
}

}  // namespace relaystab
