#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "relaystab/region_ss.hpp"
#include "relaystab/simulator.hpp"

namespace relaystab::app {

// vertex CSV: vertex,<axes...>,policy,alpha,limit ; alpha entries joined by ';'
struct RegionFile {
  std::vector<std::string> axes;
  CoSet region;
  std::vector<VertexLabel> labels;
};

void write_region_csv(const std::filesystem::path& path, const RegionVertexSet& v,
                      const std::vector<std::string>& axes);
RegionFile read_region_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// slot,<queues...>
void write_trace_csv(const std::filesystem::path& path, const SimOutcome& o);

// shortest text that parses back to the same double
std::string fmt(double v);

std::vector<std::string> ss_axes();
std::vector<std::string> mu_axes(std::size_t K, std::size_t U);

}  // namespace relaystab::app
