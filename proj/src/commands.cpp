#include "relaystab/app/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "relaystab/app/io.hpp"
#include "relaystab/region_mu.hpp"
#include "relaystab/region_ss.hpp"
#include "relaystab/simulator.hpp"

namespace relaystab::app {

using nlohmann::json;
namespace fs = std::filesystem;

std::optional<RegionMode> region_mode_from(std::string_view s) {
  if (s == "exact") return RegionMode::exact;
  if (s == "approx") return RegionMode::approx;
  if (s == "reduced") return RegionMode::reduced;
  if (s == "epsilon") return RegionMode::epsilon;
  return std::nullopt;
}

std::string to_string(RegionMode m) {
  switch (m) {
    case RegionMode::exact: return "exact";
    case RegionMode::approx: return "approx";
    case RegionMode::reduced: return "reduced";
    case RegionMode::epsilon: return "epsilon";
  }
  return "?";
}

void apply(ScenarioDoc& doc, const Overrides& o) {
  if (o.grid) {
    if (*o.grid < 2) throw ConfigError("--grid", "grid needs at least two points per axis");
    doc.sweep.grid = doc.sweep.mu_grid = *o.grid;
  }
  if (o.epsilon) {
    if (!(*o.epsilon > 0)) throw ConfigError("--epsilon", "epsilon must be positive");
    doc.sweep.epsilon = *o.epsilon;
  }
  if (o.horizon) {
    if (*o.horizon < 1) throw ConfigError("--horizon", "horizon must be at least one slot");
    doc.sweep.horizon = *o.horizon;
  }
  if (!o.seeds.empty()) doc.sweep.seeds = o.seeds;
  if (o.out_dir) doc.outputs.dir = *o.out_dir;
  if (o.count_only) doc.sweep.count_only = *o.count_only;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// largest t with t * (1,...,1) inside the region
double fair_share(const CoSet& s) {
  const Point ones(s.dim(), 1.0);
  const double g = gauge(s, ones);
  return g > 0 && std::isfinite(g) ? 1.0 / g : 0.0;
}

void emit_summary(const ScenarioDoc& doc, const std::string& name, const json& j) {
  if (doc.outputs.json) write_json(fs::path(doc.outputs.dir) / name, j);
}

}  // namespace

int cmd_region(const ScenarioDoc& doc, RegionMode mode, std::ostream& log) {
  const fs::path dir = doc.outputs.dir;
  json summary{{"command", "region"}, {"mode", to_string(mode)}, {"source", doc.source}, {"cases", json::array()}};
  if (doc.scenario.kind == ScenarioKind::ss) {
    if (mode == RegionMode::reduced || mode == RegionMode::epsilon)
      throw ConfigError("/scenario/type", "mode " + to_string(mode) + " needs a mu scenario");
    for (const auto& c : ss_cases(doc)) {
      const auto t0 = Clock::now();
      const auto v = mode == RegionMode::exact ? exact_region(c.scenario, doc.sweep.grid) : approx_region(c.scenario);
      const double wall = ms_since(t0);
      const std::string file = "region_" + to_string(mode) + "_" + c.tag + ".csv";
      if (doc.outputs.csv) write_region_csv(dir / file, v, ss_axes());
      json cj{{"case", c.tag}, {"vertices", v.region.size()}, {"policies", all_ss_policies.size()},
              {"evaluated", v.evaluated}, {"skipped", v.skipped}, {"file", doc.outputs.csv ? file : ""}};
      if (mode == RegionMode::exact) cj["grid"] = doc.sweep.grid;
      summary["cases"].push_back(cj);
      log << c.tag << ": " << v.region.size() << " vertices, " << all_ss_policies.size() << " policies, "
          << v.evaluated << " evaluations, " << wall << " ms\n";
    }
    emit_summary(doc, "summary_region_" + to_string(mode) + ".json", summary);
    return exit_ok;
  }

  if (mode == RegionMode::approx)
    throw ConfigError("/scenario/type", "mode approx needs an ss scenario; use epsilon or reduced for mu");
  MuRegionOptions opt{doc.sweep.budget};
  for (const auto& c : mu_cases(doc)) {
    const auto& sc = c.scenario;
    const auto t0 = Clock::now();
    json cj{{"case", c.tag}, {"K", sc.K()}, {"U", sc.U()}};
    std::optional<MuRegion> r;
    if (mode == RegionMode::epsilon) {
      if (!sc.symmetric()) throw ConfigError("/geometry", "mode epsilon needs a symmetric mu scenario");
      const double p_s = sc.K() ? sc.ps[0] : sc.pu[0];
      const auto k0 = k0_depth(doc.sweep.epsilon, sc.r1, p_s, sc.flows());
      const double evals = epsilon_evaluation_count(sc.K(), sc.U(), k0);
      cj["epsilon"] = doc.sweep.epsilon;
      cj["k0"] = k0;
      cj["prefix_policies"] = policy_count(sc.flows(), k0);
      cj["ue2ue_factor"] = std::pow(2.0, static_cast<double>(std::min(sc.K(), k0)));
      cj["evaluations"] = evals;
      if (!doc.sweep.count_only) r = epsilon_region(sc, doc.sweep.epsilon, opt).region;
    } else if (mode == RegionMode::reduced) {
      cj["evaluations"] = reduced_evaluation_count(sc);
      cj["prefix_policies"] = factorial(sc.flows());
      if (!doc.sweep.count_only) r = reduced_region(sc, opt);
    } else {
      cj["evaluations"] = exact_evaluation_count(sc, doc.sweep.mu_grid);
      cj["prefix_policies"] = factorial(sc.flows());
      cj["grid"] = doc.sweep.mu_grid;
      if (!doc.sweep.count_only) r = exact_region(sc, doc.sweep.mu_grid, opt);
    }
    const double wall = ms_since(t0);
    log << c.tag << ":";
    if (cj.contains("k0")) log << " K0=" << cj["k0"].get<std::size_t>() << ",";
    log << " " << cj["prefix_policies"].get<double>() << " policies, " << cj["evaluations"].get<double>()
        << " evaluations";
    if (r) {
      const std::string file = "region_" + to_string(mode) + "_" + c.tag + ".csv";
      if (doc.outputs.csv) write_region_csv(dir / file, r->vertices, mu_axes(sc.K(), sc.U()));
      cj["vertices"] = r->vertices.region.size();
      cj["file"] = doc.outputs.csv ? file : "";
      log << ", " << r->vertices.region.size() << " vertices";
    } else {
      cj["count_only"] = true;
    }
    log << ", " << wall << " ms\n";
    summary["cases"].push_back(cj);
  }
  emit_summary(doc, "summary_region_" + to_string(mode) + ".json", summary);
  return exit_ok;
}

int cmd_compare(const ScenarioDoc& doc, std::ostream& log) {
  const fs::path dir = doc.outputs.dir;
  json summary{{"command", "compare"}, {"source", doc.source}, {"cases", json::array()}};
  bool ok = true;
  std::ostringstream overlay;
  if (doc.scenario.kind == ScenarioKind::ss) {
    overlay << "case,curve,mu_s,mu_u,policy,limit\n";
    for (const auto& c : ss_cases(doc)) {
      const auto rep = sandwich_check(c.scenario, doc.sweep.grid);
      const bool holds = rep.holds();
      ok = ok && holds;
      summary["cases"].push_back({{"case", c.tag},
                                  {"eps_star", rep.eps_star},
                                  {"max_pointwise_gap", rep.measured_gap},
                                  {"region_gap", rep.region_gap},
                                  {"upper_violation", rep.upper_violation},
                                  {"lower_violation", rep.lower_violation},
                                  {"sandwich", holds ? "holds" : "violated"},
                                  {"exact_vertices", rep.exact.region.size()},
                                  {"approx_vertices", rep.approx.region.size()}});
      for (const auto* v : {&rep.exact, &rep.approx})
        for (std::size_t i = 0; i < v->region.size(); ++i)
          overlay << c.tag << ',' << (v == &rep.exact ? "exact" : "approx") << ',' << fmt(v->region[i][0]) << ','
                  << fmt(v->region[i][1]) << ',' << v->labels[i].policy << ',' << (v->labels[i].limit ? 1 : 0) << '\n';
      log << c.tag << ": eps*=" << rep.eps_star << " region_gap=" << rep.region_gap
          << " pointwise_gap=" << rep.measured_gap << " sandwich " << (holds ? "holds" : "VIOLATED") << '\n';
    }
  } else {
    MuRegionOptions opt{doc.sweep.budget};
    for (const auto& c : mu_cases(doc)) {
      const auto& sc = c.scenario;
      if (sc.flows() > 5) throw ConfigError("/scenario/K", "compare supports mu scenarios with K + U <= 5");
      if (!sc.symmetric()) throw ConfigError("/geometry", "compare needs a symmetric mu scenario");
      const auto exact = reduced_region(sc, opt);
      const auto approx = epsilon_region(sc, doc.sweep.epsilon, opt);
      const double eps = doc.sweep.epsilon;
      const double up = contains_set(approx.region.vertices.region, exact.vertices.region);
      const double low = contains_set(exact.vertices.region, approx.region.vertices.region, eps);
      const bool holds = up == 0.0 && low == 0.0;
      ok = ok && holds;
      const double fe = fair_share(exact.vertices.region), fa = fair_share(approx.region.vertices.region);
      summary["cases"].push_back({{"case", c.tag},
                                  {"epsilon", eps},
                                  {"k0", approx.k0},
                                  {"avg_rate_per_user_exact", fe},
                                  {"avg_rate_per_user_approx", fa},
                                  {"approx_in_exact_violation", up},
                                  {"exact_in_inflated_approx_violation", low},
                                  {"sandwich", holds ? "holds" : "violated"}});
      if (overlay.tellp() == 0) {
        overlay << "case,curve";
        for (const auto& a : mu_axes(sc.K(), sc.U())) overlay << ',' << a;
        overlay << ",policy\n";
      }
      for (const auto* v : {&exact.vertices, &approx.region.vertices})
        for (std::size_t i = 0; i < v->region.size(); ++i) {
          overlay << c.tag << ',' << (v == &exact.vertices ? "exact" : "epsilon");
          for (double x : v->region[i]) overlay << ',' << fmt(x);
          overlay << ',' << v->labels[i].policy << '\n';
        }
      log << c.tag << ": K0=" << approx.k0 << " per-user rate exact=" << fe << " approx=" << fa << " sandwich "
          << (holds ? "holds" : "VIOLATED") << '\n';
    }
  }
  if (doc.outputs.csv) write_text(dir / "compare_overlay.csv", overlay.str());
  summary["all_hold"] = ok;
  emit_summary(doc, "summary_compare.json", summary);
  return ok ? exit_ok : exit_assertion;
}

namespace {

struct Job {
  std::string tag;
  std::string policy;
  Coupling coupling;
  std::uint64_t seed;
  SimConfig cfg;
  std::vector<double> analytic_mu;  // per queue, NaN when unknown
  std::optional<double> analytic_pi0;
  SimOutcome out;
};

const char* coupling_name(Coupling c) { return c == Coupling::relayed ? "relayed" : "full_buffer"; }

std::string cell(double v) { return std::isfinite(v) ? fmt(v) : ""; }

}  // namespace

int cmd_simulate(const ScenarioDoc& doc, std::ostream& log) {
  if (!doc.simulate) throw ConfigError("/simulate", "section required for the simulate command");
  const auto& m = *doc.simulate;
  const fs::path dir = doc.outputs.dir;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<Job> jobs;

  auto base_cfg = [&](std::uint64_t seed, Coupling cp) {
    SimConfig c;
    c.horizon = doc.sweep.horizon;
    c.seed = seed;
    c.arrival_mode = m.arrival;
    c.lambda = m.lambda;
    c.coupling = cp;
    c.warmup_fraction = m.warmup;
    c.theta = m.theta;
    c.trace_every = doc.outputs.trace_every;
    return c;
  };

  struct ProbeTarget {
    std::string tag, policy;
    SimConfig base;
    std::vector<double> rates;
  };
  std::vector<ProbeTarget> probes;

  if (doc.scenario.kind == ScenarioKind::ss) {
    for (const auto& c : ss_cases(doc))
      for (auto g : m.ss_policies) {
        const auto ev = exact_eval(g, c.scenario, m.ss_alpha);
        const auto lim = boundary_limit_rates(g, c.scenario, m.ss_alpha);
        for (auto cp : m.couplings)
          for (auto seed : doc.sweep.seeds) {
            Job j{c.tag, to_string(g), cp, seed, base_cfg(seed, cp), {}, std::nullopt, {}};
            j.cfg.setup = SsSimSetup{c.scenario, g, m.ss_alpha};
            const bool sat = m.arrival == ArrivalMode::saturated;
            if (cp == Coupling::relayed && ev.stable && sat) {
              j.analytic_mu = {ev.rates.mu_s, ev.rates.mu_u, ev.rates.mu_s};
              j.analytic_pi0 = ev.pi0;
            } else if (cp == Coupling::full_buffer && sat) {
              j.analytic_mu = {lim.mu_s, lim.mu_u, nan};
            } else {
              j.analytic_mu.assign(3, nan);
            }
            jobs.push_back(std::move(j));
          }
        if (!m.probe_scales.empty() && ev.stable) {
          auto b = base_cfg(doc.sweep.seeds.front(), Coupling::relayed);
          b.setup = SsSimSetup{c.scenario, g, m.ss_alpha};
          probes.push_back({c.tag, to_string(g), b, {ev.rates.mu_s, ev.rates.mu_u}});
        }
      }
  } else {
    const MuPolicy pol{m.mu_order};
    for (const auto& c : mu_cases(doc)) {
      const auto& sc = c.scenario;
      std::vector<double> rates;
      try {
        rates = service_rates(sc, pol, m.mu_alpha);
      } catch (const AlphaInfeasible&) {
      }
      for (auto cp : m.couplings)
        for (auto seed : doc.sweep.seeds) {
          Job j{c.tag, pol.to_string(), cp, seed, base_cfg(seed, cp), {}, std::nullopt, {}};
          j.cfg.setup = MuSimSetup{sc, pol, m.mu_alpha};
          j.analytic_mu.assign(2 * sc.K() + sc.U(), nan);
          if (cp == Coupling::relayed && !rates.empty() && m.arrival == ArrivalMode::saturated) {
            for (std::size_t i = 0; i < sc.K(); ++i) j.analytic_mu[2 * i] = j.analytic_mu[2 * i + 1] = rates[i];
            for (std::size_t u = 0; u < sc.U(); ++u) j.analytic_mu[2 * sc.K() + u] = rates[sc.K() + u];
          }
          jobs.push_back(std::move(j));
        }
      if (!m.probe_scales.empty() && !rates.empty()) {
        auto b = base_cfg(doc.sweep.seeds.front(), Coupling::relayed);
        b.setup = MuSimSetup{sc, pol, m.mu_alpha};
        probes.push_back({c.tag, pol.to_string(), b, rates});
      }
    }
  }
  for (auto& j : jobs) {
    try {
      j.cfg.validate();
    } catch (const std::exception& e) {
      throw ConfigError("/simulate", e.what());
    }
  }

  const auto t0 = Clock::now();
  parallel_blocks(jobs.size(), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) jobs[i].out = run(jobs[i].cfg);
  });

  json summary{{"command", "simulate"}, {"source", doc.source}, {"horizon", doc.sweep.horizon}, {"runs", jobs.size()}};
  bool ok = true;
  std::ostringstream table;
  table << "case,policy,coupling,seed,queue,empirical_mu,mu_stderr,analytic_mu,pi0,pi0_stderr,analytic_pi0,verdict,"
           "slope,final_backlog\n";
  json pi0_checks = json::array();
  for (const auto& j : jobs) {
    const auto& o = j.out;
    std::size_t relay = 0;
    for (std::size_t q = 0; q < o.queues.size(); ++q) {
      const bool is_relay = o.queues[q].rfind("Q_BS", 0) == 0;
      double pi0 = nan, pi0_se = nan;
      if (is_relay && j.coupling == Coupling::relayed) {
        pi0 = o.pi0_empirical[relay];
        pi0_se = o.pi0_stderr[relay];
        ++relay;
      }
      const double ana_pi0 = is_relay && j.analytic_pi0 ? *j.analytic_pi0 : nan;
      table << j.tag << ',' << j.policy << ',' << coupling_name(j.coupling) << ',' << j.seed << ',' << o.queues[q]
            << ',' << fmt(o.empirical_mu[q]) << ',' << fmt(o.mu_stderr[q]) << ',' << cell(j.analytic_mu[q]) << ','
            << cell(pi0) << ',' << cell(pi0_se) << ',' << cell(ana_pi0) << ','
            << to_string(o.stability_verdicts[q]) << ',' << fmt(o.slopes[q]) << ',' << o.final_backlogs[q] << '\n';
    }
    if (m.pi0_sigma && j.analytic_pi0) {
      const double z = *m.pi0_sigma;
      const double T = static_cast<double>(o.measured_slots);
      auto within = [&](double emp, double se, double ana) {
        const double binom = std::sqrt(std::max(ana * (1 - ana), 0.0) / T);
        return std::abs(emp - ana) <= z * std::max({se, binom, 1e-12});
      };
      const double unit = doc.rates.r2;
      const bool p_ok = within(o.pi0_empirical[0], o.pi0_stderr[0], *j.analytic_pi0);
      const bool s_ok = within(o.empirical_mu[0] / unit, o.mu_stderr[0] / unit, j.analytic_mu[0] / unit);
      const bool u_ok = within(o.empirical_mu[1] / unit, o.mu_stderr[1] / unit, j.analytic_mu[1] / unit);
      const bool pass = p_ok && s_ok && u_ok;
      ok = ok && pass;
      pi0_checks.push_back({{"case", j.tag}, {"policy", j.policy}, {"seed", j.seed}, {"pass", pass},
                            {"pi0", o.pi0_empirical[0]}, {"analytic_pi0", *j.analytic_pi0}});
    }
    if (doc.outputs.trace_every && doc.outputs.csv)
      write_trace_csv(dir / ("trace_" + j.tag + "_" + j.policy + "_" + coupling_name(j.coupling) + "_" +
                             std::to_string(j.seed) + ".csv"),
                      o);
  }
  if (doc.outputs.csv) write_text(dir / "sim_outcomes.csv", table.str());
  if (m.pi0_sigma) summary["pi0_checks"] = pi0_checks;

  // relayed vs full-buffer at equal policy, fraction vector and seed
  const bool both = std::find(m.couplings.begin(), m.couplings.end(), Coupling::relayed) != m.couplings.end() &&
                    std::find(m.couplings.begin(), m.couplings.end(), Coupling::full_buffer) != m.couplings.end();
  if (both) {
    std::ostringstream reg;
    reg << "case,policy,seed,coupling,mu_s,mu_s_stderr,mu_u,mu_u_stderr,analytic_mu_s,analytic_mu_u\n";
    json gains = json::array();
    bool any_gain = false;
    for (const auto& a : jobs) {
      reg << a.tag << ',' << a.policy << ',' << a.seed << ',' << coupling_name(a.coupling) << ','
          << fmt(a.out.empirical_mu[0]) << ',' << fmt(a.out.mu_stderr[0]) << ',' << fmt(a.out.empirical_mu[1]) << ','
          << fmt(a.out.mu_stderr[1]) << ',' << cell(a.analytic_mu[0]) << ',' << cell(a.analytic_mu[1]) << '\n';
      if (a.coupling != Coupling::relayed) continue;
      for (const auto& b : jobs) {
        if (b.coupling != Coupling::full_buffer || b.tag != a.tag || b.policy != a.policy || b.seed != a.seed) continue;
        const double gain = a.out.empirical_mu[0] - b.out.empirical_mu[0];
        const double noise = 3 * std::hypot(a.out.mu_stderr[0], b.out.mu_stderr[0]);
        any_gain = any_gain || gain > noise;
        gains.push_back({{"case", a.tag}, {"policy", a.policy}, {"seed", a.seed}, {"gain_mu_s", gain},
                         {"noise_3sigma", noise}, {"significant", gain > noise}});
      }
    }
    if (doc.outputs.csv) write_text(dir / "coupling_regions.csv", reg.str());
    summary["coupling_gain"] = gains;
    summary["coupling_gain_found"] = any_gain;
    if (m.expect_coupling_gain) ok = ok && any_gain;
    log << "coupling gain above 3 sigma: " << (any_gain ? "yes" : "no") << '\n';
  }

  bool inconclusive = false;
  if (!probes.empty()) {
    std::vector<json> rows(probes.size() * m.probe_scales.size());
    std::mutex mu;
    std::ostringstream ptab;
    parallel_blocks(rows.size(), [&](std::size_t b, std::size_t e, std::size_t) {
      for (std::size_t i = b; i < e; ++i) {
        const auto& p = probes[i / m.probe_scales.size()];
        const double scale = m.probe_scales[i % m.probe_scales.size()];
        std::vector<double> lam;
        for (double r : p.rates) lam.push_back(scale * r);
        json row{{"case", p.tag}, {"policy", p.policy}, {"scale", scale}, {"lambda", lam}};
        try {
          const auto res = stability_probe(p.base, lam, doc.sweep.horizon);
          const bool pass = scale < 1 ? res.all_stable() : scale > 1 ? res.any_unstable() : true;
          std::vector<std::string> v;
          for (auto x : res.verdicts) v.push_back(to_string(x));
          row["verdicts"] = v;
          row["slopes"] = res.slopes;
          row["outcome"] = pass ? "pass" : "fail";
        } catch (const Inconclusive& e) {
          row["outcome"] = "inconclusive";
          row["detail"] = e.what();
          row["suggested_horizon"] = 4 * doc.sweep.horizon;
        }
        std::lock_guard lock(mu);
        rows[i] = row;
      }
    });
    ptab << "case,policy,scale,outcome,verdicts\n";
    for (const auto& r : rows) {
      const auto outcome = r["outcome"].get<std::string>();
      if (outcome == "inconclusive") {
        inconclusive = true;
        log << "probe " << r["case"].get<std::string>() << ' ' << r["policy"].get<std::string>() << " x"
            << r["scale"].get<double>() << ": " << r["detail"].get<std::string>() << '\n';
      }
      if (m.expect_probe && outcome == "fail") ok = false;
      ptab << r["case"].get<std::string>() << ',' << r["policy"].get<std::string>() << ',' << fmt(r["scale"].get<double>())
           << ',' << outcome << ',';
      if (r.contains("verdicts"))
        for (std::size_t k = 0; k < r["verdicts"].size(); ++k) ptab << (k ? ";" : "") << r["verdicts"][k].get<std::string>();
      ptab << '\n';
    }
    if (doc.outputs.csv) write_text(dir / "probes.csv", ptab.str());
    summary["probes"] = rows;
  }

  summary["assertions_pass"] = ok;
  emit_summary(doc, "summary_simulate.json", summary);
  log << jobs.size() << " runs of " << doc.sweep.horizon << " slots, " << ms_since(t0) << " ms, assertions "
      << (ok ? "pass" : "FAIL") << '\n';
  if (!ok) return exit_assertion;
  if (inconclusive && m.expect_probe) return exit_inconclusive;
  return exit_ok;
}

int cmd_validate_config(const fs::path& path, std::ostream& log) {
  const auto doc = load_doc(path);
  log << path.string() << ": ok\n";
  if (doc.scenario.kind == ScenarioKind::ss) {
    for (const auto& c : ss_cases(doc)) {
      const auto& l = c.scenario.links;
      log << "  " << c.tag << ": s=(" << l.s[0] << ", " << l.s[1] << ", " << l.s[2] << ") u=(" << l.u[0] << ", "
          << l.u[1] << ", " << l.u[2] << ") d=(" << l.d[0] << ", " << l.d[1] << ", " << l.d[2] << ")\n";
    }
  } else {
    for (const auto& c : mu_cases(doc)) {
      const auto& sc = c.scenario;
      log << "  " << c.tag << ": K=" << sc.K() << " U=" << sc.U();
      if (sc.symmetric()) log << " p_s=" << (sc.K() ? sc.ps[0] : sc.pu[0]) << " p_d=" << (sc.K() ? sc.pd[0] : 0.0);
      log << '\n';
    }
  }
  return exit_ok;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error at " << e.what() << '\n';
    return exit_config;
  } catch (const ComplexityGuard& e) {
    err << "complexity guard: " << e.requested << " evaluations requested, budget " << e.budget << '\n';
    return exit_complexity;
  } catch (const Inconclusive& e) {
    err << "inconclusive: " << e.what() << '\n';
    return exit_inconclusive;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  }
}

}  // namespace relaystab::app
