#include "wmemo/energy_stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wmemo {

Counters& Counters::operator+=(const Counters& o) {
  accesses += o.accesses;
  loads += o.loads;
  stores += o.stores;
  tag_reads += o.tag_reads;
  tag_writes += o.tag_writes;
  way_accesses += o.way_accesses;
  way_writes += o.way_writes;
  load_way_accesses += o.load_way_accesses;
  store_way_accesses += o.store_way_accesses;
  mab_hits += o.mab_hits;
  mab_misses += o.mab_misses;
  bypasses += o.bypasses;
  cache_hits += o.cache_hits;
  cache_misses += o.cache_misses;
  for (std::size_t i = 0; i < flow.size(); ++i) flow[i] += o.flow[i];
  return *this;
}

void EnergyParams::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("energy parameter ") + name +
                                  " must be finite and non-negative");
  };
  check(e_way, "e_way");
  check(e_tag, "e_tag");
  check(p_mab_active, "p_mab_active");
  check(p_mab_sleep, "p_mab_sleep");
  check(cycles_per_access, "cycles_per_access");
  if (!(clock_hz > 0.0) || !std::isfinite(clock_hz))
    throw std::invalid_argument("energy parameter clock_hz must be positive");
}

PowerReport evaluate(const Counters& c, const EnergyParams& p,
                     MabPowerState mab) {
  PowerReport r;
  if (c.accesses == 0) return r;

  double p_mab = 0.0;
  switch (mab) {
    case MabPowerState::absent: p_mab = 0.0; break;
    case MabPowerState::sleep: p_mab = p.p_mab_sleep; break;
    case MabPowerState::active: p_mab = p.p_mab_active; break;
  }
  r.simulated_time =
      static_cast<double>(c.accesses) * p.cycles_per_access / p.clock_hz;
  r.way_energy = p.e_way * static_cast<double>(c.total_way_accesses());
  r.tag_energy = p.e_tag * static_cast<double>(c.tag_accesses());
  r.mab_energy = p_mab * r.simulated_time;
  r.total_energy = r.way_energy + r.tag_energy + r.mab_energy;
  r.average_power =
      r.simulated_time > 0.0 ? r.total_energy / r.simulated_time : 0.0;
  return r;
}

const MabPowerTable& reference_mab_power_table() {
  // mW, rows: 1 or 2 tag entries; columns: 4, 8, 16, 32 set-index entries.
  static const MabPowerTable table = [] {
    MabPowerTable t;
    constexpr unsigned cols[] = {4, 8, 16, 32};
    constexpr double active[2][4] = {{1.95, 2.37, 3.39, 6.25},
                                     {2.34, 3.07, 4.56, 7.93}};
    constexpr double sleep[2][4] = {{0.24, 0.40, 0.76, 1.37},
                                    {0.40, 0.68, 1.28, 2.26}};
    for (unsigned r = 0; r < 2; ++r)
      for (unsigned c = 0; c < 4; ++c)
        t[{r + 1, cols[c]}] = MabPower{active[r][c] * 1e-3, sleep[r][c] * 1e-3};
    return t;
  }();
  return table;
}

std::optional<MabPower> lookup_mab_power(const MabPowerTable& table,
                                         unsigned n_rows, unsigned n_cols) {
  auto it = table.find({n_rows, n_cols});
  if (it == table.end()) return std::nullopt;
  return it->second;
}

}  // namespace wmemo
