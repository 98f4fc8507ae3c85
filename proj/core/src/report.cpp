#include "wmemo/report.hpp"

#include <iomanip>
#include <sstream>

namespace wmemo {

using nlohmann::json;

json to_json(const CacheGeometry& g) {
  return {{"address_bits", g.address_bits}, {"offset_bits", g.offset_bits},
          {"index_bits", g.index_bits},     {"tag_bits", g.tag_bits},
          {"ways", g.ways},                 {"line_bytes", g.line_bytes},
          {"sets", g.sets},                 {"instr_stride_bytes", g.instr_stride_bytes}};
}

json to_json(const Counters& c) {
  json flows = json::object();
  for (std::size_t i = 0; i < kFlowClassCount; ++i)
    flows[std::string(kFlowClassNames[i])] = c.flow[i];
  return {{"accesses", c.accesses},
          {"loads", c.loads},
          {"stores", c.stores},
          {"tag_reads", c.tag_reads},
          {"tag_writes", c.tag_writes},
          {"way_accesses", c.way_accesses},
          {"way_writes", c.way_writes},
          {"load_way_accesses", c.load_way_accesses},
          {"store_way_accesses", c.store_way_accesses},
          {"mab_hits", c.mab_hits},
          {"mab_misses", c.mab_misses},
          {"bypasses", c.bypasses},
          {"cache_hits", c.cache_hits},
          {"cache_misses", c.cache_misses},
          {"flows", flows}};
}

json to_json(const PowerReport& p) {
  return {{"way_energy", p.way_energy},         {"tag_energy", p.tag_energy},
          {"mab_energy", p.mab_energy},         {"total_energy", p.total_energy},
          {"simulated_time", p.simulated_time}, {"average_power", p.average_power}};
}

json to_json(const Violation& v) {
  return {{"step", v.step},
          {"kind", std::string(to_string(v.kind))},
          {"lane", v.lane},
          {"detail", v.detail},
          {"gated", v.gated}};
}

MabPowerState mab_power_state(SimMode m) {
  switch (m) {
    case SimMode::baseline: return MabPowerState::absent;
    case SimMode::intra_only: return MabPowerState::sleep;
    case SimMode::full_mab: return MabPowerState::active;
  }
  return MabPowerState::absent;
}

namespace {

double reduction(double mode, double base) {
  return base > 0.0 ? 1.0 - mode / base : 0.0;
}

struct LanePower {
  PowerReport icache;
  PowerReport dcache;
  double total() const { return icache.total_energy + dcache.total_energy; }
};

LanePower lane_power(const RunConfig& cfg, const LaneResult& l) {
  const MabPowerState st = mab_power_state(l.spec.mode);
  return {evaluate(l.icache, cfg.energy_for(CacheSide::icache), st),
          evaluate(l.dcache, cfg.energy_for(CacheSide::dcache), st)};
}

json mab_json(const MabConfig& m) {
  return {{"n_tag_rows", m.n_tag_rows},
          {"n_index_cols", m.n_index_cols},
          {"precise_invalidation", m.precise_invalidation}};
}

}  // namespace

json build_run_report(const RunConfig& cfg, const AuditReport& audit) {
  json report;
  report["geometry"] = to_json(cfg.sim.geometry);
  report["mab"] = {{"dcache", mab_json(cfg.sim.dmab)},
                   {"icache", mab_json(cfg.sim.imab)}};
  report["modes"] = json::array();
  report["counters"] = json::object();
  report["power"] = json::object();
  report["reductions"] = json::object();

  const LaneResult* base = nullptr;
  for (const auto& l : audit.lanes)
    if (l.spec.mode == SimMode::baseline) {
      base = &l;
      break;
    }
  const LanePower base_power = base ? lane_power(cfg, *base) : LanePower{};

  for (const auto& l : audit.lanes) {
    const LanePower p = lane_power(cfg, l);
    report["modes"].push_back(l.spec.name);
    report["counters"][l.spec.name] = {{"icache", to_json(l.icache)},
                                       {"dcache", to_json(l.dcache)}};
    report["power"][l.spec.name] = {{"icache", to_json(p.icache)},
                                    {"dcache", to_json(p.dcache)},
                                    {"total_energy", p.total()}};
    json red = {{"icache_tag_reads", 0.0}, {"dcache_tag_reads", 0.0},
                {"icache_energy", 0.0},    {"dcache_energy", 0.0},
                {"total_energy", 0.0}};
    if (base) {
      red["icache_tag_reads"] = reduction(double(l.icache.tag_reads),
                                          double(base->icache.tag_reads));
      red["dcache_tag_reads"] = reduction(double(l.dcache.tag_reads),
                                          double(base->dcache.tag_reads));
      red["icache_energy"] = reduction(p.icache.total_energy,
                                       base_power.icache.total_energy);
      red["dcache_energy"] = reduction(p.dcache.total_energy,
                                       base_power.dcache.total_energy);
      red["total_energy"] = reduction(p.total(), base_power.total());
    }
    report["reductions"][l.spec.name] = red;
  }

  report["violations"] = json::array();
  for (const auto& v : audit.violations) report["violations"].push_back(to_json(v));
  report["audit"] = {{"steps", audit.steps},
                     {"gated_violations", audit.gated_violations},
                     {"finding_violations", audit.finding_violations},
                     {"stale_mab", audit.stale_mab},
                     {"transparency", audit.transparency},
                     {"count_dominance", audit.count_dominance},
                     {"recorded", audit.violations.size()},
                     {"lazy_invalidation_warning", audit.finding_violations > 0},
                     {"ok", audit.ok()}};
  return report;
}

std::string run_report_csv(const RunConfig& cfg, const AuditReport& audit) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "mode,cache,accesses,tag_reads,tag_writes,way_accesses,way_writes,"
        "mab_hits,mab_misses,bypasses,cache_hits,cache_misses,total_energy,"
        "average_power\n";
  for (const auto& l : audit.lanes) {
    const LanePower p = lane_power(cfg, l);
    auto row = [&](const char* side, const Counters& c, const PowerReport& pr) {
      os << l.spec.name << ',' << side << ',' << c.accesses << ',' << c.tag_reads
         << ',' << c.tag_writes << ',' << c.way_accesses << ',' << c.way_writes
         << ',' << c.mab_hits << ',' << c.mab_misses << ',' << c.bypasses << ','
         << c.cache_hits << ',' << c.cache_misses << ',' << pr.total_energy << ','
         << pr.average_power << '\n';
    };
    row("icache", l.icache, p.icache);
    row("dcache", l.dcache, p.dcache);
  }
  return os.str();
}

json sweep_json(std::span<const SweepCell> cells) {
  json out = json::array();
  for (const auto& c : cells)
    out.push_back({{"n1", c.n1},
                   {"n2", c.n2},
                   {"counters", to_json(c.counters)},
                   {"power", to_json(c.power)}});
  return out;
}

}  // namespace wmemo
