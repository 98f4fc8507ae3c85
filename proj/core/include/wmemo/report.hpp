#pragma once

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "wmemo/config.hpp"
#include "wmemo/harness.hpp"

namespace wmemo {

nlohmann::json to_json(const CacheGeometry& g);
nlohmann::json to_json(const Counters& c);
nlohmann::json to_json(const PowerReport& p);
nlohmann::json to_json(const Violation& v);

/// MAB power figure charged to a lane: none in baseline, sleep when the MAB
/// is present but unused, active otherwise.
MabPowerState mab_power_state(SimMode m);

/// Top-level keys: geometry, mab, modes, counters, power, reductions,
/// violations, audit. Every key is present whatever the modes; features a
/// mode lacks are zero.
nlohmann::json build_run_report(const RunConfig& cfg, const AuditReport& audit);

/// One row per (mode, cache).
std::string run_report_csv(const RunConfig& cfg, const AuditReport& audit);

nlohmann::json sweep_json(std::span<const SweepCell> cells);

}  // namespace wmemo
