#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relaystab/app/config.hpp"

namespace relaystab::app {

enum class RegionMode { exact, approx, reduced, epsilon };

std::optional<RegionMode> region_mode_from(std::string_view s);
std::string to_string(RegionMode m);

enum ExitCode : int {
  exit_ok = 0,
  exit_assertion = 1,
  exit_config = 2,
  exit_complexity = 3,
  exit_inconclusive = 4,
};

// command-line values win over the document
struct Overrides {
  std::optional<int> grid;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> horizon;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> out_dir;
  std::optional<bool> count_only;
};

void apply(ScenarioDoc& doc, const Overrides& o);

int cmd_region(const ScenarioDoc& doc, RegionMode mode, std::ostream& log);
int cmd_compare(const ScenarioDoc& doc, std::ostream& log);
int cmd_simulate(const ScenarioDoc& doc, std::ostream& log);
int cmd_validate_config(const std::filesystem::path& path, std::ostream& log);

// maps library and config exceptions to exit codes, printing to err
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace relaystab::app
