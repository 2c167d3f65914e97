#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relaystab/channel.hpp"
#include "relaystab/region_mu.hpp"
#include "relaystab/simulator.hpp"
#include "relaystab/ss_model.hpp"

namespace relaystab::app {

// where: JSON pointer into the document, plus a line number when one can be found
struct ConfigError : std::runtime_error {
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), location(std::move(where)) {}
  std::string location;
};

enum class ScenarioKind { ss, mu };

struct SsDistances {
  double d_s = 0, d_u = 0, d_d = 0;
};

struct Geometry {
  // symmetric sweep: every link of a case sits at the same distance
  std::vector<double> distances;
  std::optional<SsDistances> ss;
  std::vector<std::array<double, 2>> ue2ue;  // (d_s, d_d) per flow
  std::vector<double> ue2bs;
  // bypass the radio model
  std::optional<SsLinks> ss_probs;
  std::optional<MuScenario> mu_probs;
};

struct Rates {
  double r1 = 400.0;
  double r2 = 200.0;
  int k = 2;
};

struct ScenarioSection {
  ScenarioKind kind = ScenarioKind::ss;
  std::size_t K = 1;
  std::size_t U = 1;
};

struct Sweep {
  int grid = 16;     // SS exact sweep, points per alpha axis
  int mu_grid = 9;   // MU exact sweep
  double epsilon = 0.1;
  std::uint64_t horizon = 1'000'000;
  std::vector<std::uint64_t> seeds{1};
  double budget = kDefaultBudget;
  bool count_only = false;
};

struct Outputs {
  std::string dir = "out";
  bool csv = true;
  bool json = true;
  std::uint64_t trace_every = 0;
};

struct SimulateSection {
  std::vector<SsPolicy> ss_policies{SsPolicy::g1};
  SsAlpha ss_alpha{0, 0, 0, 0};
  std::vector<std::size_t> mu_order;
  std::vector<double> mu_alpha;
  std::vector<Coupling> couplings{Coupling::relayed};
  ArrivalMode arrival = ArrivalMode::saturated;
  std::vector<double> lambda;
  double warmup = 0.1;
  double theta = 1e-3;
  std::vector<double> probe_scales;
  // assertions
  std::optional<double> pi0_sigma;
  bool expect_probe = false;
  bool expect_coupling_gain = false;
};

struct ScenarioDoc {
  RadioConfig radio;
  Geometry geometry;
  Rates rates;
  ScenarioSection scenario;
  Sweep sweep;
  Outputs outputs;
  std::optional<SimulateSection> simulate;
  std::string source = "<string>";
};

ScenarioDoc parse_doc(std::string_view text, std::string source = "<string>");
ScenarioDoc load_doc(const std::filesystem::path& path);

struct SsCase {
  std::string tag;
  SsScenario scenario;
};

struct MuCase {
  std::string tag;
  MuScenario scenario;
};

std::vector<SsCase> ss_cases(const ScenarioDoc& doc);
std::vector<MuCase> mu_cases(const ScenarioDoc& doc);

}  // namespace relaystab::app
