#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "relaystab/app/commands.hpp"

using namespace relaystab::app;

namespace {

void add_common(CLI::App* cmd, std::string& config, Overrides& ov) {
  cmd->add_option("config", config, "scenario document (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", ov.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stability regions of relayed cellular queues"};
  app.require_subcommand(1);

  std::string config;
  Overrides ov;
  std::string mode = "approx";
  bool count_only = false;

  auto* region = app.add_subcommand("region", "compute a stability region and write its vertices");
  add_common(region, config, ov);
  region->add_option("-m,--mode", mode, "exact | approx | reduced | epsilon")
      ->check(CLI::IsMember({"exact", "approx", "reduced", "epsilon"}));
  region->add_option("-g,--grid", ov.grid, "alpha grid points per axis");
  region->add_option("-e,--epsilon", ov.epsilon, "tolerance for mode epsilon");
  region->add_flag("--count-only", count_only, "report policy and evaluation counts only");

  auto* compare = app.add_subcommand("compare", "exact vs approximate region report");
  add_common(compare, config, ov);
  compare->add_option("-g,--grid", ov.grid, "alpha grid points per axis");
  compare->add_option("-e,--epsilon", ov.epsilon, "tolerance for mu scenarios");

  auto* simulate = app.add_subcommand("simulate", "slot-level simulation and stability probes");
  add_common(simulate, config, ov);
  simulate->add_option("--horizon", ov.horizon, "slots per run");
  simulate->add_option("-s,--seeds", ov.seeds, "RNG seeds, one run each");

  auto* validate = app.add_subcommand("validate-config", "parse and resolve a scenario document");
  validate->add_option("config", config, "scenario document (JSON)")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  if (count_only) ov.count_only = true;

  return guarded(
      [&]() -> int {
        if (validate->parsed()) return cmd_validate_config(config, std::cout);
        auto doc = load_doc(config);
        apply(doc, ov);
        if (region->parsed()) return cmd_region(doc, *region_mode_from(mode), std::cout);
        if (compare->parsed()) return cmd_compare(doc, std::cout);
        return cmd_simulate(doc, std::cout);
      },
      std::cerr);
}
