#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "relaystab/errors.hpp"
#include "relaystab/parallel.hpp"
#include "relaystab/policy.hpp"
#include "relaystab/region_mu.hpp"
#include "relaystab/ss_model.hpp"

namespace relaystab {

enum class ArrivalMode { saturated, bernoulli };
// full_buffer: every BS queue behaves as permanently backlogged
enum class Coupling { relayed, full_buffer };
enum class Verdict { stable, unstable, inconclusive, not_applicable };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::not_applicable: return "n/a";
  }
  return "?";
}

struct SsSimSetup {
  SsScenario scenario;
  SsPolicy policy = SsPolicy::g1;
  SsAlpha alpha{};
};

struct MuSimSetup {
  MuScenario scenario;
  MuPolicy policy;
  std::vector<double> alpha;
};

// queues: SS -> Q_s, Q_u, Q_BS; MU -> Q_s[i], Q_BS[i] for each UE2UE flow, then Q_u[j]
struct SimConfig {
  std::variant<SsSimSetup, MuSimSetup> setup;
  std::uint64_t horizon = 1'000'000;
  std::uint64_t seed = 1;
  ArrivalMode arrival_mode = ArrivalMode::saturated;
  // per source queue in rate units: SS (lambda_s, lambda_u); MU UE2UE flows then UE2BS flows
  std::vector<double> lambda;
  Coupling coupling = Coupling::relayed;
  double warmup_fraction = 0.1;
  // packets per slot
  double theta = 1e-3;
  std::uint64_t trace_every = 0;
  std::size_t batches = 50;

  std::size_t source_count() const {
    if (const auto* s = std::get_if<MuSimSetup>(&setup)) return s->scenario.flows();
    return 2;
  }

  void validate() const {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least one slot");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) throw std::invalid_argument("warm-up fraction must be in [0,1)");
    if (batches < 2) throw std::invalid_argument("need at least two batches");
    if (arrival_mode == ArrivalMode::bernoulli) {
      if (lambda.size() != source_count()) throw std::invalid_argument("lambda needs one entry per source queue");
      for (double l : lambda)
        if (!(l >= 0.0) || !std::isfinite(l)) throw std::invalid_argument("arrival rates must be nonnegative");
    }
    if (const auto* s = std::get_if<SsSimSetup>(&setup)) {
      s->scenario.validate();
      if (!in_unit_cube(s->alpha)) throw std::invalid_argument("fraction vector outside [0,1]^4");
    } else {
      const auto& m = std::get<MuSimSetup>(setup);
      m.scenario.validate();
      m.policy.validate(m.scenario.K(), m.scenario.U());
      if (m.alpha.size() != m.scenario.K()) throw std::invalid_argument("alpha needs one entry per UE2UE flow");
      for (double a : m.alpha)
        if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("fraction outside [0,1]");
    }
  }
};

struct SimOutcome {
  std::vector<std::string> queues;
  // departures per slot in rate units, with batch-means standard errors
  std::vector<double> empirical_mu;
  std::vector<double> mu_stderr;
  // one entry per BS queue
  std::vector<double> pi0_empirical;
  std::vector<double> pi0_stderr;
  std::vector<Verdict> stability_verdicts;
  std::vector<double> slopes;  // packets per slot over the second half
  std::vector<std::int64_t> final_backlogs;
  // per UE2UE flow over the whole run, packets
  std::vector<std::uint64_t> uplink_sent;
  std::vector<std::uint64_t> relay_received;
  std::uint64_t measured_slots = 0;
  // slot, then queue lengths
  std::vector<std::vector<std::int64_t>> trace;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// stateless draws keyed by (seed, stream, index, slot)
// streams: 0 source UL, 1 UE2BS UL, 2 DL, 3 fraction coin, 4 UE2UE arrivals, 5 UE2BS arrivals
class CounterRng {
 public:
  enum Stream : std::uint64_t { source = 0, ue2bs = 1, downlink = 2, coin = 3, arrive_ue2ue = 4, arrive_ue2bs = 5 };

  explicit CounterRng(std::uint64_t seed) : key_(detail::splitmix64(seed)) {}

  double uniform(std::uint64_t stream, std::uint64_t index, std::uint64_t slot) const {
    std::uint64_t h = detail::splitmix64(key_ ^ (stream * 0x100000001b3ULL));
    h = detail::splitmix64(h ^ index);
    h = detail::splitmix64(h ^ slot);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

namespace detail {

inline std::size_t draw_state(const LinkStateProbs& p, double u) {
  double c = 0;
  for (std::size_t n = 0; n + 1 < p.size(); ++n) {
    c += p[n];
    if (u < c) return n;
  }
  return p.size() - 1;
}

inline std::int64_t draw_arrivals(double packets_per_slot, double u) {
  const double base = std::floor(packets_per_slot);
  return static_cast<std::int64_t>(base) + (u < packets_per_slot - base ? 1 : 0);
}

struct Queue {
  std::int64_t len = 0;
  bool infinite = false;
  bool is_relay = false;
  std::uint64_t departures = 0;  // measured window
  std::uint64_t empty_slots = 0;
  std::vector<std::uint64_t> batch_dep, batch_empty;
  // regression sums over the second half
  double n = 0, st = 0, stt = 0, sq = 0, stq = 0;

  bool has(std::int64_t m) const { return infinite || len >= m; }
  bool nonempty() const { return infinite || len > 0; }
};

class Recorder {
 public:
  Recorder(const SimConfig& cfg, std::vector<Queue>& qs)
      : cfg_(cfg), q_(qs), warm_(static_cast<std::uint64_t>(cfg.warmup_fraction * cfg.horizon)),
        half_(cfg.horizon / 2), measured_(cfg.horizon - warm_),
        batch_len_(std::max<std::uint64_t>(1, measured_ / cfg.batches)) {
    for (auto& q : q_) {
      q.batch_dep.assign(cfg.batches, 0);
      q.batch_empty.assign(cfg.batches, 0);
    }
  }

  bool measuring(std::uint64_t t) const { return t >= warm_; }
  std::size_t batch(std::uint64_t t) const {
    return std::min<std::size_t>(cfg_.batches - 1, static_cast<std::size_t>((t - warm_) / batch_len_));
  }

  void start_slot(std::uint64_t t) {
    if (!measuring(t)) return;
    const auto b = batch(t);
    for (auto& q : q_)
      if (q.is_relay && !q.nonempty()) {
        ++q.empty_slots;
        ++q.batch_empty[b];
      }
  }

  void depart(std::uint64_t t, Queue& q, std::int64_t m) {
    if (m <= 0 || !measuring(t)) return;
    q.departures += static_cast<std::uint64_t>(m);
    q.batch_dep[batch(t)] += static_cast<std::uint64_t>(m);
  }

  void end_slot(std::uint64_t t, SimOutcome& out) {
    if (t >= half_) {
      const double x = static_cast<double>(t - half_);
      for (auto& q : q_) {
        if (q.infinite) continue;
        const double y = static_cast<double>(q.len);
        q.n += 1;
        q.st += x;
        q.stt += x * x;
        q.sq += y;
        q.stq += x * y;
      }
    }
    if (cfg_.trace_every && t % cfg_.trace_every == 0) {
      std::vector<std::int64_t> row{static_cast<std::int64_t>(t)};
      for (const auto& q : q_) row.push_back(q.infinite ? -1 : q.len);
      out.trace.push_back(std::move(row));
    }
  }

  void finish(SimOutcome& out, double unit) const {
    const auto T = static_cast<double>(measured_);
    out.measured_slots = measured_;
    const std::size_t B = cfg_.batches;
    auto batch_size = [&](std::size_t b) {
      const std::uint64_t lo = b * batch_len_;
      const std::uint64_t hi = b + 1 == B ? measured_ : std::min(measured_, (b + 1) * batch_len_);
      return static_cast<double>(hi > lo ? hi - lo : 0);
    };
    auto stderr_of = [&](const std::vector<std::uint64_t>& counts, double scale) {
      double m = 0, s = 0, n = 0;
      std::vector<double> v;
      for (std::size_t b = 0; b < B; ++b) {
        const double len = batch_size(b);
        if (len <= 0) continue;
        v.push_back(static_cast<double>(counts[b]) * scale / len);
      }
      for (double x : v) m += x;
      n = static_cast<double>(v.size());
      if (n < 2) return 0.0;
      m /= n;
      for (double x : v) s += (x - m) * (x - m);
      return std::sqrt(s / (n - 1) / n);
    };
    for (const auto& q : q_) {
      out.empirical_mu.push_back(static_cast<double>(q.departures) * unit / T);
      out.mu_stderr.push_back(stderr_of(q.batch_dep, unit));
      if (q.is_relay && !q.infinite) {
        out.pi0_empirical.push_back(static_cast<double>(q.empty_slots) / T);
        out.pi0_stderr.push_back(stderr_of(q.batch_empty, 1.0));
      }
      out.final_backlogs.push_back(q.infinite ? -1 : q.len);
      if (q.infinite || q.n < 2) {
        out.stability_verdicts.push_back(Verdict::not_applicable);
        out.slopes.push_back(0.0);
        continue;
      }
      const double den = q.n * q.stt - q.st * q.st;
      const double slope = den > 0 ? (q.n * q.stq - q.st * q.sq) / den : 0.0;
      out.slopes.push_back(slope);
      const double th = cfg_.theta;
      out.stability_verdicts.push_back(slope < th / 2 ? Verdict::stable
                                       : slope > 2 * th ? Verdict::unstable
                                                        : Verdict::inconclusive);
    }
  }

 private:
  const SimConfig& cfg_;
  std::vector<Queue>& q_;
  std::uint64_t warm_, half_, measured_, batch_len_;
};

inline SimOutcome run_ss(const SimConfig& cfg, const SsSimSetup& su) {
  const auto& sc = su.scenario;
  const auto& l = sc.links;
  const std::int64_t k = sc.k;
  const std::int64_t rate_of[3] = {k, 1, 0};
  const bool sat = cfg.arrival_mode == ArrivalMode::saturated;
  const bool fb = cfg.coupling == Coupling::full_buffer;
  std::vector<Queue> qs(3);
  Queue &Qs = qs[0], &Qu = qs[1], &Qb = qs[2];
  Qs.infinite = Qu.infinite = sat;
  Qb.infinite = fb;
  Qb.is_relay = true;
  SimOutcome out;
  out.queues = {"Q_s", "Q_u", "Q_BS"};
  out.uplink_sent.assign(1, 0);
  out.relay_received.assign(1, 0);
  const CounterRng rng(cfg.seed);
  Recorder rec(cfg, qs);
  const double lam_s = sat ? 0.0 : cfg.lambda[0] / sc.r2;
  const double lam_u = sat ? 0.0 : cfg.lambda[1] / sc.r2;
  const auto g = su.policy;

  for (std::uint64_t t = 0; t < cfg.horizon; ++t) {
    rec.start_slot(t);
    const std::size_t ss = draw_state(l.s, rng.uniform(CounterRng::source, 0, t));
    const std::size_t us = draw_state(l.u, rng.uniform(CounterRng::ue2bs, 0, t));
    const std::size_t ds = draw_state(l.d, rng.uniform(CounterRng::downlink, 0, t));
    const std::int64_t rs = rate_of[ss], ru = rate_of[us], rd = rate_of[ds];
    const bool ul_ok = rs > 0 && Qs.nonempty();
    const bool dl_ok = rd > 0 && Qb.nonempty();
    const bool ue_ok = ru > 0 && Qu.nonempty();
    const std::int64_t c = std::max(ul_ok ? rs : 0, dl_ok ? rd : 0);
    const std::int64_t u = ue_ok ? ru : 0;

    bool relay = false, direct = false;
    switch (g) {
      case SsPolicy::g1: relay = c > 0; direct = !relay && u > 0; break;
      case SsPolicy::g2: direct = u > 0; relay = !direct && c > 0; break;
      case SsPolicy::g3:
        relay = c == k;
        direct = !relay && u > 0;
        relay = relay || (!direct && c > 0);
        break;
      case SsPolicy::g4:
        direct = u == k;
        relay = !direct && c > 0;
        direct = direct || (!relay && u > 0);
        break;
      case SsPolicy::g5: relay = c > 0 && c >= u; direct = !relay && u > 0; break;
      case SsPolicy::g6: direct = u > 0 && u >= c; relay = !direct && c > 0; break;
    }

    if (relay) {
      bool up = ul_ok && !dl_ok;
      if (ul_ok && dl_ok) {
        const std::size_t idx = (rs == k ? 0 : 2) + (rd == k ? 0 : 1);
        up = rng.uniform(CounterRng::coin, 0, t) < su.alpha[idx];
      }
      if (up) {
        const std::int64_t m = Qs.infinite ? rs : std::min(rs, Qs.len);
        if (!Qs.infinite) Qs.len -= m;
        rec.depart(t, Qs, m);
        out.uplink_sent[0] += static_cast<std::uint64_t>(m);
        out.relay_received[0] += static_cast<std::uint64_t>(m);
        if (!Qb.infinite) Qb.len += m;
      } else if (Qb.has(rd)) {
        if (!Qb.infinite) Qb.len -= rd;
        rec.depart(t, Qb, rd);
      }
      // an r1 grant with fewer than k packets queued moves nothing
    } else if (direct) {
      const std::int64_t m = Qu.infinite ? ru : std::min(ru, Qu.len);
      if (!Qu.infinite) Qu.len -= m;
      rec.depart(t, Qu, m);
    }

    if (!sat) {
      Qs.len += draw_arrivals(lam_s, rng.uniform(CounterRng::arrive_ue2ue, 0, t));
      Qu.len += draw_arrivals(lam_u, rng.uniform(CounterRng::arrive_ue2bs, 0, t));
    }
    rec.end_slot(t, out);
  }
  rec.finish(out, sc.r2);
  return out;
}

inline SimOutcome run_mu(const SimConfig& cfg, const MuSimSetup& su) {
  const auto& sc = su.scenario;
  const std::size_t K = sc.K(), U = sc.U();
  const bool sat = cfg.arrival_mode == ArrivalMode::saturated;
  const bool fb = cfg.coupling == Coupling::full_buffer;
  std::vector<Queue> qs(2 * K + U);
  SimOutcome out;
  for (std::size_t i = 0; i < K; ++i) {
    qs[2 * i].infinite = sat;
    qs[2 * i + 1].infinite = fb;
    qs[2 * i + 1].is_relay = true;
    out.queues.push_back("Q_s" + std::to_string(i));
    out.queues.push_back("Q_BS" + std::to_string(i));
  }
  for (std::size_t j = 0; j < U; ++j) {
    qs[2 * K + j].infinite = sat;
    out.queues.push_back("Q_u" + std::to_string(K + j));
  }
  out.uplink_sent.assign(K, 0);
  out.relay_received.assign(K, 0);
  const CounterRng rng(cfg.seed);
  Recorder rec(cfg, qs);
  std::vector<char> s_ok(K), d_ok(K), u_ok(U);

  for (std::uint64_t t = 0; t < cfg.horizon; ++t) {
    rec.start_slot(t);
    for (std::size_t i = 0; i < K; ++i) {
      s_ok[i] = rng.uniform(CounterRng::source, i, t) < sc.ps[i];
      d_ok[i] = rng.uniform(CounterRng::downlink, i, t) < sc.pd[i];
    }
    for (std::size_t j = 0; j < U; ++j) u_ok[j] = rng.uniform(CounterRng::ue2bs, j, t) < sc.pu[j];

    for (auto c : su.policy.order) {
      if (c < K) {
        auto& Qs = qs[2 * c];
        auto& Qb = qs[2 * c + 1];
        const bool ul = s_ok[c] && Qs.nonempty();
        const bool dl = d_ok[c] && Qb.nonempty();
        if (!ul && !dl) continue;
        const bool up = ul && (!dl || rng.uniform(CounterRng::coin, c, t) < su.alpha[c]);
        if (up) {
          if (!Qs.infinite) --Qs.len;
          rec.depart(t, Qs, 1);
          ++out.uplink_sent[c];
          ++out.relay_received[c];
          if (!Qb.infinite) ++Qb.len;
        } else {
          if (!Qb.infinite) --Qb.len;
          rec.depart(t, Qb, 1);
        }
        break;
      }
      auto& Qu = qs[2 * K + (c - K)];
      if (u_ok[c - K] && Qu.nonempty()) {
        if (!Qu.infinite) --Qu.len;
        rec.depart(t, Qu, 1);
        break;
      }
    }

    if (!sat) {
      for (std::size_t i = 0; i < K; ++i)
        qs[2 * i].len += draw_arrivals(cfg.lambda[i] / sc.r1, rng.uniform(CounterRng::arrive_ue2ue, i, t));
      for (std::size_t j = 0; j < U; ++j)
        qs[2 * K + j].len += draw_arrivals(cfg.lambda[K + j] / sc.r1, rng.uniform(CounterRng::arrive_ue2bs, j, t));
    }
    rec.end_slot(t, out);
  }
  rec.finish(out, sc.r1);
  return out;
}

}  // namespace detail

inline SimOutcome run(const SimConfig& cfg) {
  cfg.validate();
  if (const auto* s = std::get_if<SsSimSetup>(&cfg.setup)) return detail::run_ss(cfg, *s);
  return detail::run_mu(cfg, std::get<MuSimSetup>(cfg.setup));
}

// independent seeds derived from cfg.seed; runs concurrently
inline std::vector<SimOutcome> run_replications(const SimConfig& cfg, std::size_t n) {
  cfg.validate();
  std::vector<SimOutcome> out(n);
  parallel_blocks(n, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t r = b; r < e; ++r) {
      auto c = cfg;
      c.seed = detail::splitmix64(cfg.seed ^ (0xa24baed4963ee407ULL * (r + 1)));
      out[r] = run(c);
    }
  });
  return out;
}

struct ProbeResult {
  std::vector<std::string> queues;
  std::vector<Verdict> verdicts;
  std::vector<double> slopes;

  bool all_stable() const {
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](Verdict v) { return v == Verdict::stable || v == Verdict::not_applicable; });
  }
  bool any_unstable() const {
    return std::any_of(verdicts.begin(), verdicts.end(), [](Verdict v) { return v == Verdict::unstable; });
  }
};

// throws Inconclusive when some slope falls in [theta/2, 2 theta]
inline ProbeResult stability_probe(const SimConfig& base, const std::vector<double>& lambda,
                                   std::uint64_t horizon) {
  auto cfg = base;
  cfg.arrival_mode = ArrivalMode::bernoulli;
  cfg.lambda = lambda;
  cfg.horizon = horizon;
  const auto o = run(cfg);
  ProbeResult r{o.queues, o.stability_verdicts, o.slopes};
  for (std::size_t i = 0; i < r.verdicts.size(); ++i)
    if (r.verdicts[i] == Verdict::inconclusive)
      throw Inconclusive("queue " + r.queues[i] + " slope " + std::to_string(r.slopes[i]) +
                         " inside the undecided band; retry with horizon " + std::to_string(4 * horizon));
  return r;
}

}  // namespace relaystab
