#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "wmemo/flow.hpp"

namespace wmemo {

/// Run-level access counters for one cache.
///
/// tag_reads/way_accesses count the lookup itself; tag_writes/way_writes
/// count miss refills. Merging is element-wise addition.
struct Counters {
  std::uint64_t accesses = 0;
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  std::uint64_t tag_reads = 0;
  std::uint64_t tag_writes = 0;
  std::uint64_t way_accesses = 0;
  std::uint64_t way_writes = 0;
  std::uint64_t load_way_accesses = 0;
  std::uint64_t store_way_accesses = 0;
  std::uint64_t mab_hits = 0;
  std::uint64_t mab_misses = 0;
  std::uint64_t bypasses = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  std::array<std::uint64_t, kFlowClassCount> flow{};

  std::uint64_t tag_accesses() const { return tag_reads + tag_writes; }
  std::uint64_t total_way_accesses() const { return way_accesses + way_writes; }

  Counters& operator+=(const Counters& o);
  friend Counters operator+(Counters a, const Counters& b) { return a += b; }

  bool operator==(const Counters&) const = default;
};

/// Energy per access in joules, power in watts.
struct EnergyParams {
  // Placeholder magnitudes; real values come from circuit-level extraction.
  double e_way = 2.0e-10;
  double e_tag = 1.0e-10;
  double p_mab_active = 0.0;
  double p_mab_sleep = 0.0;
  double clock_hz = 360.0e6;
  double cycles_per_access = 1.0;

  void validate() const;
  bool operator==(const EnergyParams&) const = default;
};

/// Which MAB power figure applies to a run.
enum class MabPowerState { absent, sleep, active };

struct PowerReport {
  double way_energy = 0.0;
  double tag_energy = 0.0;
  double mab_energy = 0.0;
  double total_energy = 0.0;
  double simulated_time = 0.0;
  double average_power = 0.0;
};

/// E = e_way * ways + e_tag * tags + P_mab * T, with T = accesses *
/// cycles_per_access / clock_hz. Refill writes are counted with the reads of
/// the same array. An empty run yields an all-zero report.
PowerReport evaluate(const Counters& c, const EnergyParams& p,
                     MabPowerState mab);

struct MabPower {
  double active = 0.0;
  double sleep = 0.0;
};

/// (tag rows, index columns) -> MAB power in watts.
using MabPowerTable = std::map<std::pair<unsigned, unsigned>, MabPower>;

/// Synthesized MAB power for 1-2 tag rows and 4-32 index columns at
/// 0.13um / 1.3V, clock gated when idle.
const MabPowerTable& reference_mab_power_table();

std::optional<MabPower> lookup_mab_power(const MabPowerTable& table,
                                         unsigned n_rows, unsigned n_cols);

}  // namespace wmemo
