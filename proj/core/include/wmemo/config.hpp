#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wmemo/energy_stats.hpp"
#include "wmemo/harness.hpp"
#include "wmemo/trace_io.hpp"

namespace wmemo {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using GeneratorSpec = std::variant<LoopSpec, RandomSpec>;

struct RunConfig {
  SimConfig sim;
  std::vector<LaneSpec> lanes;
  EnergyParams icache_energy;
  EnergyParams dcache_energy;
  /// p_mab_* given explicitly in the config win over the power table.
  bool icache_p_mab_explicit = false;
  bool dcache_p_mab_explicit = false;
  MabPowerTable power_table = reference_mab_power_table();

  std::optional<std::string> trace_path;
  std::optional<GeneratorSpec> generator;

  std::uint64_t seed = 1;
  std::optional<std::string> out_path;
  std::string format = "json";

  std::vector<unsigned> sweep_n1{1, 2};
  std::vector<unsigned> sweep_n2{4, 8, 16, 32};
  CacheSide sweep_side = CacheSide::dcache;
  unsigned sweep_threads = 1;

  /// Energy parameters for one side with MAB power resolved from the table
  /// for that side's MAB size.
  EnergyParams energy_for(CacheSide side) const;
  EnergyParams energy_for(CacheSide side, unsigned n1, unsigned n2) const;

  void validate() const;
};

std::vector<LaneSpec> default_run_lanes();
std::vector<LaneSpec> default_check_lanes();

/// Lanes for `run`: the configured list (or the default one), with a
/// baseline lane put first when missing so reductions have a reference.
std::vector<LaneSpec> run_lanes(const RunConfig& cfg);
/// Lanes for `check`: the configured list or the default audit set.
std::vector<LaneSpec> check_lanes(const RunConfig& cfg);

/// Throws ConfigError on unknown keys, wrong types or broken invariants.
RunConfig config_from_json(const nlohmann::json& j);
/// Accepts JSON with // and /* */ comments.
RunConfig parse_config(const std::string& text);

GeneratorSpec generator_from_json(const nlohmann::json& j);

/// Comma-separated lane names.
std::vector<LaneSpec> parse_lane_list(const std::string& csv);
std::vector<unsigned> parse_unsigned_list(const std::string& csv);

}  // namespace wmemo
