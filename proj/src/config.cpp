#include "relaystab/app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace relaystab::app {

namespace {

using nlohmann::json;

class Section {
 public:
  Section(const json& j, std::string path, std::string_view text) : j_(j), path_(std::move(path)), text_(text) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string at(const std::string& key) const { return path_ + "/" + key; }

  template <class T>
  void get(const std::string& key, T& out) {
    const json* v = raw(key);
    if (!v) return;
    try {
      out = v->get<T>();
    } catch (const json::exception&) {
      fail(at(key), "wrong type");
    }
  }

  double number(const std::string& key, double def) {
    const json* v = raw(key);
    if (!v) return def;
    if (!v->is_number()) fail(at(key), "expected a number");
    return v->get<double>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json* v = raw(key);
    if (!v) return {};
    if (!v->is_array()) fail(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : *v) {
      if (!x.is_number()) fail(at(key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  Section child(const std::string& key) {
    const json* v = raw(key);
    return Section(v ? *v : empty(), at(key), text_);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.contains(k)) fail(at(k), "unknown key '" + k + "'", k);
  }

  [[noreturn]] void fail(const std::string& where, const std::string& what, const std::string& key = "") const {
    std::string loc = where;
    if (const auto line = line_of(key.empty() ? last_segment(where) : key)) loc += " (line " + std::to_string(*line) + ")";
    throw ConfigError(loc, what);
  }

 private:
  static const json& empty() {
    static const json e = json::object();
    return e;
  }

  static std::string last_segment(const std::string& p) {
    const auto pos = p.rfind('/');
    return pos == std::string::npos ? p : p.substr(pos + 1);
  }

  std::optional<std::size_t> line_of(const std::string& key) const {
    if (key.empty()) return std::nullopt;
    const auto pos = text_.find("\"" + key + "\"");
    if (pos == std::string_view::npos) return std::nullopt;
    return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }

  const json& j_;
  std::string path_;
  std::string_view text_;
  std::set<std::string> seen_;
};

LinkStateProbs probs3(Section& s, const std::string& key) {
  const auto v = s.numbers(key);
  if (v.size() != 3) s.fail(s.at(key), "need three state probabilities");
  return LinkStateProbs{v};
}

void parse_radio(Section s, RadioConfig& r) {
  r.ul_power.value = s.number("p_ul_w", r.ul_power.value);
  r.dl_power.value = s.number("p_dl_w", r.dl_power.value);
  r.ul_noise_density.value = s.number("noise_ul_db_hz", r.ul_noise_density.value);
  r.dl_noise_density.value = s.number("noise_dl_db_hz", r.dl_noise_density.value);
  r.rb_bandwidth.value = s.number("rb_hz", r.rb_bandwidth.value);
  r.pathloss_exponent = s.number("pathloss_exponent", r.pathloss_exponent);
  r.pathloss_offset_db = s.number("pathloss_offset_db", r.pathloss_offset_db);
  if (s.has("ul_thresholds_db")) r.ul_thresholds_db = s.numbers("ul_thresholds_db");
  if (s.has("dl_thresholds_db")) r.dl_thresholds_db = s.numbers("dl_thresholds_db");
  for (const auto* key : {"ul_thresholds_db", "dl_thresholds_db"}) {
    const auto& t = std::string(key) == "ul_thresholds_db" ? r.ul_thresholds_db : r.dl_thresholds_db;
    if (t.empty()) s.fail(s.at(key), "need at least one threshold");
    for (std::size_t i = 1; i < t.size(); ++i)
      if (!(t[i] < t[i - 1])) s.fail(s.at(key), "thresholds must be strictly decreasing");
  }
  if (!(r.ul_power.value > 0 && r.dl_power.value > 0)) s.fail(s.at("p_ul_w"), "powers must be positive");
  if (!(r.rb_bandwidth.value > 0)) s.fail(s.at("rb_hz"), "bandwidth must be positive");
  s.finish();
}

void parse_geometry(Section s, Geometry& g) {
  if (s.has("d")) g.distances = {s.number("d", 0)};
  if (s.has("distances")) {
    if (!g.distances.empty()) s.fail(s.at("distances"), "give either d or distances");
    g.distances = s.numbers("distances");
  }
  if (s.has("d_s") || s.has("d_u") || s.has("d_d")) {
    g.ss = SsDistances{s.number("d_s", 0), s.number("d_u", 0), s.number("d_d", 0)};
    for (double v : {g.ss->d_s, g.ss->d_u, g.ss->d_d})
      if (!(v > 0)) s.fail(s.at("d_s"), "explicit distances must all be positive");
  }
  if (const json* v = s.raw("ue2ue")) {
    if (!v->is_array()) s.fail(s.at("ue2ue"), "expected an array of [d_s, d_d] pairs");
    for (const auto& p : *v) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        s.fail(s.at("ue2ue"), "expected an array of [d_s, d_d] pairs");
      g.ue2ue.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  if (s.has("ue2bs")) g.ue2bs = s.numbers("ue2bs");
  if (s.has("probabilities")) {
    auto p = s.child("probabilities");
    if (p.has("s") || p.has("u") || p.has("d")) {
      g.ss_probs = SsLinks{probs3(p, "s"), probs3(p, "u"), probs3(p, "d")};
    }
    if (p.has("ps") || p.has("pd") || p.has("pu")) {
      MuScenario m;
      m.ps = p.numbers("ps");
      m.pd = p.numbers("pd");
      m.pu = p.numbers("pu");
      g.mu_probs = m;
    }
    p.finish();
  }
  for (double d : g.distances)
    if (!(d > 0)) s.fail(s.at("distances"), "distances must be positive");
  s.finish();
}

void parse_rates(Section s, Rates& r) {
  r.r1 = s.number("r1", r.r1);
  r.r2 = s.number("r2", r.r2);
  s.get("k", r.k);
  if (r.k < 1) s.fail(s.at("k"), "k must be a positive integer");
  if (!(r.r2 > 0)) s.fail(s.at("r2"), "r2 must be positive");
  if (std::abs(r.r1 - r.k * r.r2) > 1e-9 * r.r1) s.fail(s.at("r1"), "r1 must equal k * r2");
  s.finish();
}

void parse_scenario(Section s, ScenarioSection& sc) {
  std::string type = "ss";
  s.get("type", type);
  if (type == "ss") sc.kind = ScenarioKind::ss;
  else if (type == "mu") sc.kind = ScenarioKind::mu;
  else s.fail(s.at("type"), "type must be ss or mu");
  s.get("K", sc.K);
  s.get("U", sc.U);
  if (sc.kind == ScenarioKind::ss && (sc.K != 1 || sc.U != 1)) s.fail(s.at("K"), "ss scenarios have K = U = 1");
  if (sc.K + sc.U == 0) s.fail(s.at("K"), "scenario needs at least one flow");
  s.finish();
}

void parse_sweep(Section s, Sweep& w) {
  s.get("grid", w.grid);
  s.get("mu_grid", w.mu_grid);
  w.epsilon = s.number("epsilon", w.epsilon);
  w.horizon = static_cast<std::uint64_t>(s.number("horizon", static_cast<double>(w.horizon)));
  s.get("seeds", w.seeds);
  w.budget = s.number("budget", w.budget);
  s.get("count_only", w.count_only);
  if (w.grid < 2) s.fail(s.at("grid"), "grid needs at least two points per axis");
  if (w.mu_grid < 2) s.fail(s.at("mu_grid"), "grid needs at least two points per axis");
  if (!(w.epsilon > 0)) s.fail(s.at("epsilon"), "epsilon must be positive");
  if (w.horizon < 1) s.fail(s.at("horizon"), "horizon must be at least one slot");
  if (w.seeds.empty()) s.fail(s.at("seeds"), "need at least one seed");
  if (!(w.budget > 0)) s.fail(s.at("budget"), "budget must be positive");
  s.finish();
}

void parse_outputs(Section s, Outputs& o) {
  s.get("dir", o.dir);
  if (s.has("formats")) {
    std::vector<std::string> f;
    s.get("formats", f);
    o.csv = o.json = false;
    for (const auto& x : f) {
      if (x == "csv") o.csv = true;
      else if (x == "json") o.json = true;
      else s.fail(s.at("formats"), "unknown format '" + x + "'");
    }
  }
  o.trace_every = static_cast<std::uint64_t>(s.number("trace_every", 0));
  s.finish();
}

void parse_simulate(Section s, SimulateSection& m, ScenarioKind kind) {
  if (const json* v = s.raw("policies")) {
    if (kind != ScenarioKind::ss) s.fail(s.at("policies"), "policies applies to ss scenarios; use order for mu");
    m.ss_policies.clear();
    auto one = [&](const json& x) {
      if (x.is_string()) {
        const auto str = x.get<std::string>();
        if (str == "all") {
          m.ss_policies.assign(all_ss_policies.begin(), all_ss_policies.end());
          return;
        }
        if (str.size() == 2 && (str[0] == 'G' || str[0] == 'g') && str[1] >= '1' && str[1] <= '6') {
          m.ss_policies.push_back(ss_policy_from_id(str[1] - '0'));
          return;
        }
      }
      s.fail(s.at("policies"), "policies are G1..G6 or \"all\"");
    };
    if (v->is_array())
      for (const auto& x : *v) one(x);
    else
      one(*v);
  }
  if (s.has("alpha")) {
    const auto a = s.numbers("alpha");
    if (kind == ScenarioKind::ss) {
      if (a.size() != 4) s.fail(s.at("alpha"), "ss fraction vector has four entries");
      std::copy(a.begin(), a.end(), m.ss_alpha.begin());
    } else {
      m.mu_alpha = a;
    }
    for (double x : a)
      if (!(x >= 0 && x <= 1)) s.fail(s.at("alpha"), "fractions must lie in [0,1]");
  }
  if (s.has("order")) {
    if (kind != ScenarioKind::mu) s.fail(s.at("order"), "order applies to mu scenarios");
    s.get("order", m.mu_order);
  }
  if (const json* v = s.raw("coupling")) {
    m.couplings.clear();
    auto one = [&](const std::string& c) {
      if (c == "relayed") m.couplings.push_back(Coupling::relayed);
      else if (c == "full_buffer") m.couplings.push_back(Coupling::full_buffer);
      else if (c == "both") m.couplings = {Coupling::relayed, Coupling::full_buffer};
      else s.fail(s.at("coupling"), "coupling is relayed, full_buffer or both");
    };
    if (v->is_string()) one(v->get<std::string>());
    else if (v->is_array())
      for (const auto& x : *v) one(x.is_string() ? x.get<std::string>() : "");
    else s.fail(s.at("coupling"), "coupling is relayed, full_buffer or both");
  }
  std::string arrival = "saturated";
  s.get("arrival", arrival);
  if (arrival == "saturated") m.arrival = ArrivalMode::saturated;
  else if (arrival == "bernoulli") m.arrival = ArrivalMode::bernoulli;
  else s.fail(s.at("arrival"), "arrival is saturated or bernoulli");
  m.lambda = s.numbers("lambda");
  for (double l : m.lambda)
    if (!(l >= 0)) s.fail(s.at("lambda"), "arrival rates must be nonnegative");
  if (m.arrival == ArrivalMode::bernoulli && m.lambda.empty()) s.fail(s.at("lambda"), "bernoulli arrivals need lambda");
  m.warmup = s.number("warmup", m.warmup);
  if (!(m.warmup >= 0 && m.warmup < 1)) s.fail(s.at("warmup"), "warm-up fraction must be in [0,1)");
  m.theta = s.number("theta", m.theta);
  if (!(m.theta > 0)) s.fail(s.at("theta"), "theta must be positive");
  m.probe_scales = s.numbers("probe_scales");
  for (double x : m.probe_scales)
    if (!(x > 0)) s.fail(s.at("probe_scales"), "probe scales must be positive");
  if (s.has("assert")) {
    auto a = s.child("assert");
    if (a.has("pi0_sigma")) m.pi0_sigma = a.number("pi0_sigma", 3.0);
    a.get("probe", m.expect_probe);
    a.get("coupling_gain", m.expect_coupling_gain);
    a.finish();
  }
  s.finish();
}

}  // namespace

ScenarioDoc parse_doc(std::string_view text, std::string source) {
  json j;
  try {
    j = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    const auto byte = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
    throw ConfigError(source + ":" + std::to_string(line), "malformed document");
  }
  ScenarioDoc doc;
  doc.source = source;
  Section root(j, "", text);
  // scenario first: other sections depend on its kind
  parse_scenario(root.child("scenario"), doc.scenario);
  parse_radio(root.child("radio"), doc.radio);
  parse_geometry(root.child("geometry"), doc.geometry);
  parse_rates(root.child("rates"), doc.rates);
  parse_sweep(root.child("sweep"), doc.sweep);
  parse_outputs(root.child("outputs"), doc.outputs);
  if (root.has("simulate")) {
    doc.simulate.emplace();
    parse_simulate(root.child("simulate"), *doc.simulate, doc.scenario.kind);
  }
  root.finish();

  // cross-section checks by resolving once
  try {
    if (doc.scenario.kind == ScenarioKind::ss) {
      const auto cases = ss_cases(doc);
      if (doc.simulate && doc.simulate->arrival == ArrivalMode::bernoulli && doc.simulate->lambda.size() != 2)
        throw ConfigError("/simulate/lambda", "ss scenarios take two arrival rates");
    } else {
      const auto cases = mu_cases(doc);
      const auto& sc = cases.front().scenario;
      if (doc.simulate) {
        auto& m = *doc.simulate;
        if (m.mu_order.empty())
          for (std::size_t i = 0; i < sc.flows(); ++i) m.mu_order.push_back(i);
        try {
          MuPolicy{m.mu_order}.validate(sc.K(), sc.U());
        } catch (const std::exception& e) {
          throw ConfigError("/simulate/order", e.what());
        }
        if (m.mu_alpha.empty()) m.mu_alpha.assign(sc.K(), 0.0);
        if (m.mu_alpha.size() != sc.K()) throw ConfigError("/simulate/alpha", "need one fraction per UE2UE flow");
        if (m.arrival == ArrivalMode::bernoulli && m.lambda.size() != sc.flows())
          throw ConfigError("/simulate/lambda", "need one arrival rate per flow");
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("/geometry", e.what());
  }
  return doc;
}

ScenarioDoc load_doc(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_doc(ss.str(), path.string());
}

namespace {

std::string distance_tag(double d) {
  std::ostringstream o;
  o << "d" << d;
  return o.str();
}

}  // namespace

std::vector<SsCase> ss_cases(const ScenarioDoc& doc) {
  if (doc.scenario.kind != ScenarioKind::ss) throw ConfigError("/scenario/type", "expected an ss scenario");
  const auto& g = doc.geometry;
  const auto& r = doc.rates;
  std::vector<SsCase> out;
  if (g.ss_probs) {
    SsScenario sc{*g.ss_probs, r.k, r.r2};
    sc.validate();
    out.push_back({"probs", sc});
  }
  if (g.ss) out.push_back({"explicit", make_ss_scenario(doc.radio, Meters{g.ss->d_s}, Meters{g.ss->d_u},
                                                        Meters{g.ss->d_d}, r.k, r.r2)});
  for (double d : g.distances)
    out.push_back({distance_tag(d), make_ss_scenario(doc.radio, Meters{d}, Meters{d}, Meters{d}, r.k, r.r2)});
  if (out.empty()) throw ConfigError("/geometry", "no distances or probabilities given");
  return out;
}

std::vector<MuCase> mu_cases(const ScenarioDoc& doc) {
  if (doc.scenario.kind != ScenarioKind::mu) throw ConfigError("/scenario/type", "expected a mu scenario");
  const auto& g = doc.geometry;
  const std::size_t K = doc.scenario.K, U = doc.scenario.U;
  std::vector<MuCase> out;
  if (g.mu_probs) {
    MuScenario sc = *g.mu_probs;
    sc.r1 = doc.rates.r1;
    if (sc.K() != K || sc.U() != U) throw ConfigError("/geometry/probabilities", "probability counts differ from K and U");
    sc.validate();
    out.push_back({"probs", sc});
  }
  if (!g.ue2ue.empty() || !g.ue2bs.empty()) {
    if (g.ue2ue.size() != K || g.ue2bs.size() != U) throw ConfigError("/geometry/ue2ue", "distance counts differ from K and U");
    MuScenario sc;
    sc.r1 = doc.rates.r1;
    for (const auto& [ds, dd] : g.ue2ue) {
      sc.ps.push_back(state_probabilities({Meters{ds}, Direction::uplink}, doc.radio, 2)[0]);
      sc.pd.push_back(state_probabilities({Meters{dd}, Direction::downlink}, doc.radio, 2)[0]);
    }
    for (double d : g.ue2bs) sc.pu.push_back(state_probabilities({Meters{d}, Direction::uplink}, doc.radio, 2)[0]);
    sc.validate();
    out.push_back({"explicit", sc});
  }
  for (double d : g.distances) out.push_back({distance_tag(d), make_symmetric_mu(doc.radio, Meters{d}, K, U, doc.rates.r1)});
  if (out.empty()) throw ConfigError("/geometry", "no distances or probabilities given");
  return out;
}

}  // namespace relaystab::app
