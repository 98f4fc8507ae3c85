#include "wmemo/harness.hpp"

#include <algorithm>
#include <future>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace wmemo {

std::string_view to_string(SimMode m) {
  switch (m) {
    case SimMode::baseline: return "baseline";
    case SimMode::intra_only: return "intra_only";
    case SimMode::full_mab: return "full_mab";
  }
  return "?";
}

std::optional<SimMode> parse_sim_mode(std::string_view s) {
  if (s == "baseline") return SimMode::baseline;
  if (s == "intra_only") return SimMode::intra_only;
  if (s == "full_mab") return SimMode::full_mab;
  return std::nullopt;
}

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::stale_mab: return "stale_mab";
    case ViolationKind::transparency: return "transparency";
    case ViolationKind::count_dominance: return "count_dominance";
  }
  return "?";
}

std::optional<LaneSpec> lane_from_name(std::string_view name) {
  if (name == "full_mab_lazy")
    return LaneSpec{std::string(name), SimMode::full_mab, false};
  if (auto m = parse_sim_mode(name))
    return LaneSpec{std::string(name), *m, std::nullopt};
  return std::nullopt;
}

void SimConfig::validate() const {
  geometry.validate();
  dmab.validate();
  imab.validate();
}

namespace {

IMode imode_for(SimMode m) {
  switch (m) {
    case SimMode::baseline: return IMode::baseline;
    case SimMode::intra_only: return IMode::intra_only;
    case SimMode::full_mab: return IMode::full_mab;
  }
  return IMode::baseline;
}

}  // namespace

Simulator::Simulator(const SimConfig& cfg, SimMode mode)
    : mode_(mode),
      icache_(cfg.geometry, cfg.imab, imode_for(mode), cfg.refill),
      dcache_(cfg.geometry, cfg.dmab,
              mode == SimMode::full_mab ? DMode::mab : DMode::baseline,
              cfg.refill, cfg.write_allocate) {}

Simulator::Step Simulator::step(const TraceRecord& rec) {
  Step s;
  if (const auto* f = std::get_if<FetchRecord>(&rec)) {
    const IAccessReport r = icache_.fetch(*f);
    s.fetch = true;
    s.cache = r.cache;
    s.mab_hit = r.mab_hit;
    s.mab_way = r.mab_way;
    s.address = f->pc & icache_.cache().geometry().address_mask();
  } else {
    const auto& m = std::get<MemRecord>(rec);
    const DAccessReport r = dcache_.access(m.kind, m.base, m.disp);
    s.cache = r.cache;
    s.mab_hit = r.mab_hit;
    s.mab_way = r.mab_way;
    s.address = r.effective_address;
  }
  return s;
}

const LaneResult* AuditReport::lane(std::string_view name) const {
  for (const auto& l : lanes)
    if (l.spec.name == name) return &l;
  return nullptr;
}

namespace {

std::string describe(const AccessOutcome& o) {
  std::ostringstream os;
  os << (o.hit ? "hit" : "miss") << " way " << o.way;
  if (!o.resident) os << " (not allocated)";
  if (o.victim)
    os << " victim tag 0x" << std::hex << o.victim->tag << " index 0x"
       << o.victim->index;
  return os.str();
}

class Auditor {
 public:
  Auditor(AuditReport& report, const AuditOptions& opts)
      : report_(report), opts_(opts) {}

  void add(std::uint64_t step, ViolationKind kind, const std::string& lane,
           std::string detail, bool gated) {
    (gated ? report_.gated_violations : report_.finding_violations)++;
    switch (kind) {
      case ViolationKind::stale_mab: ++report_.stale_mab; break;
      case ViolationKind::transparency: ++report_.transparency; break;
      case ViolationKind::count_dominance: ++report_.count_dominance; break;
    }
    if (report_.violations.size() < opts_.max_recorded)
      report_.violations.push_back({step, kind, lane, std::move(detail), gated});
  }

 private:
  AuditReport& report_;
  const AuditOptions& opts_;
};

using StaleSet = std::set<std::tuple<unsigned, unsigned, Addr, WayId>>;

// Reports each stale cell once, when it first turns stale.
void audit_mab(Auditor& audit, std::uint64_t step, const std::string& lane,
               bool gated, const char* side, const Mab& mab,
               const SetAssocCache& cache, StaleSet& known) {
  const CacheGeometry& g = cache.geometry();
  StaleSet now;
  for (const MemoEntry& e : mab.valid_pairs()) {
    const Addr line = compose({e.effective_tag, e.index, 0}, g);
    const auto way = cache.probe(line);
    if (way && *way == e.way) continue;
    const auto key = std::make_tuple(e.row, e.col, line, e.way);
    now.insert(key);
    if (known.count(key)) continue;
    std::ostringstream os;
    os << side << " cell (" << e.row << "," << e.col << ") memoizes line 0x"
       << std::hex << line << std::dec << " in way " << e.way << " but it is "
       << (way ? "in way " + std::to_string(*way) : std::string("not resident"));
    audit.add(step, ViolationKind::stale_mab, lane, os.str(), gated);
  }
  known = std::move(now);
}

void check_le(Auditor& audit, std::uint64_t step, const std::string& lane,
              const char* what, std::uint64_t lhs, const std::string& ref,
              std::uint64_t rhs) {
  if (lhs <= rhs) return;
  std::ostringstream os;
  os << what << " " << lhs << " exceeds " << ref << "'s " << rhs;
  audit.add(step, ViolationKind::count_dominance, lane, os.str(), true);
}

void check_eq(Auditor& audit, std::uint64_t step, const std::string& lane,
              const char* what, std::uint64_t lhs, const std::string& ref,
              std::uint64_t rhs) {
  if (lhs == rhs) return;
  std::ostringstream os;
  os << what << " " << lhs << " differs from " << ref << "'s " << rhs;
  audit.add(step, ViolationKind::count_dominance, lane, os.str(), true);
}

}  // namespace

AuditReport differential_run(std::span<const TraceRecord> trace,
                             const SimConfig& cfg,
                             std::span<const LaneSpec> lanes,
                             const AuditOptions& opts) {
  cfg.validate();
  AuditReport report;
  if (lanes.empty()) return report;

  std::vector<Simulator> sims;
  sims.reserve(lanes.size());
  for (const LaneSpec& l : lanes) {
    SimConfig c = cfg;
    if (l.precise) {
      c.dmab.precise_invalidation = *l.precise;
      c.imab.precise_invalidation = *l.precise;
    }
    sims.emplace_back(c, l.mode);
  }

  auto first_of = [&](SimMode m) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < lanes.size(); ++i)
      if (lanes[i].mode == m) return i;
    return std::nullopt;
  };
  const auto base_lane = first_of(SimMode::baseline);
  const auto intra_lane = first_of(SimMode::intra_only);

  Auditor audit(report, opts);
  std::vector<Simulator::Step> steps(lanes.size());
  std::vector<StaleSet> stale_i(lanes.size()), stale_d(lanes.size());

  for (std::uint64_t n = 0; n < trace.size(); ++n) {
    for (std::size_t l = 0; l < sims.size(); ++l) steps[l] = sims[l].step(trace[n]);
    if (opts.inject_fault_at && *opts.inject_fault_at == n && sims.size() > 1)
      steps[1].cache.hit = !steps[1].cache.hit;

    for (std::size_t l = 1; l < sims.size(); ++l) {
      if (steps[l].cache == steps[0].cache) continue;
      audit.add(n, ViolationKind::transparency, lanes[l].name,
                std::string(steps[l].fetch ? "icache " : "dcache ") +
                    describe(steps[l].cache) + " vs " + lanes[0].name + " " +
                    describe(steps[0].cache),
                true);
    }

    for (std::size_t l = 0; l < sims.size(); ++l) {
      if (lanes[l].mode != SimMode::full_mab) continue;
      const Simulator& s = sims[l];
      const Simulator::Step& st = steps[l];
      const bool gated = st.fetch
                             ? s.icache().mab().config().precise_invalidation
                             : s.dcache().mab().config().precise_invalidation;
      if (st.mab_hit && (!st.cache.hit || st.cache.way != *st.mab_way)) {
        std::ostringstream os;
        os << (st.fetch ? "icache" : "dcache") << " MAB hit at 0x" << std::hex
           << st.address << std::dec << " supplied way " << *st.mab_way
           << " but the access was a " << describe(st.cache);
        audit.add(n, ViolationKind::stale_mab, lanes[l].name, os.str(), gated);
      }
      if (st.fetch)
        audit_mab(audit, n, lanes[l].name, gated, "icache",
                  s.icache().mab(), s.icache().cache(), stale_i[l]);
      else
        audit_mab(audit, n, lanes[l].name, gated, "dcache",
                  s.dcache().mab(), s.dcache().cache(), stale_d[l]);
    }

    for (std::size_t l = 0; l < sims.size(); ++l) {
      const std::string& name = lanes[l].name;
      const Counters& ic = sims[l].icache().counters();
      const Counters& dc = sims[l].dcache().counters();
      if (base_lane && lanes[l].mode != SimMode::baseline) {
        const Counters& bi = sims[*base_lane].icache().counters();
        const Counters& bd = sims[*base_lane].dcache().counters();
        const std::string& ref = lanes[*base_lane].name;
        check_le(audit, n, name, "icache tag_reads", ic.tag_reads, ref, bi.tag_reads);
        check_le(audit, n, name, "icache way_accesses", ic.way_accesses, ref, bi.way_accesses);
        check_le(audit, n, name, "dcache tag_reads", dc.tag_reads, ref, bd.tag_reads);
        check_le(audit, n, name, "dcache load way_accesses", dc.load_way_accesses,
                 ref, bd.load_way_accesses);
        check_eq(audit, n, name, "dcache store way_accesses", dc.store_way_accesses,
                 ref, bd.store_way_accesses);
      }
      if (intra_lane && lanes[l].mode == SimMode::full_mab) {
        const Counters& ii = sims[*intra_lane].icache().counters();
        check_le(audit, n, name, "icache tag_reads", ic.tag_reads,
                 lanes[*intra_lane].name, ii.tag_reads);
      }
    }
    ++report.steps;
  }

  for (std::size_t l = 0; l < sims.size(); ++l)
    report.lanes.push_back(
        {lanes[l], sims[l].icache().counters(), sims[l].dcache().counters()});
  return report;
}

std::vector<SweepCell> sweep(std::span<const TraceRecord> trace,
                             const SimConfig& cfg, const SweepSpec& spec) {
  if (spec.n1_list.empty() || spec.n2_list.empty())
    throw std::invalid_argument("sweep needs non-empty n1 and n2 lists");
  cfg.validate();
  spec.energy.validate();

  std::vector<SweepCell> cells;
  for (unsigned n1 : spec.n1_list)
    for (unsigned n2 : spec.n2_list) cells.push_back({n1, n2, {}, {}});

  auto run_cell = [&](SweepCell& cell) {
    SimConfig c = cfg;
    MabConfig& mab = spec.side == CacheSide::dcache ? c.dmab : c.imab;
    mab.n_tag_rows = cell.n1;
    mab.n_index_cols = cell.n2;
    Simulator sim(c, SimMode::full_mab);
    for (const auto& r : trace) sim.step(r);
    cell.counters = spec.side == CacheSide::dcache ? sim.dcache().counters()
                                                   : sim.icache().counters();
    EnergyParams e = spec.energy;
    if (auto p = lookup_mab_power(spec.power_table, cell.n1, cell.n2)) {
      e.p_mab_active = p->active;
      e.p_mab_sleep = p->sleep;
    }
    cell.power = evaluate(cell.counters, e, MabPowerState::active);
  };

  const unsigned threads = std::max(1u, spec.threads);
  if (threads == 1) {
    for (auto& cell : cells) run_cell(cell);
    return cells;
  }
  // Cells are independent; each worker takes every threads-th cell.
  std::vector<std::future<void>> workers;
  for (unsigned t = 0; t < threads; ++t)
    workers.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < cells.size(); i += threads) run_cell(cells[i]);
    }));
  for (auto& w : workers) w.get();
  return cells;
}

std::string sweep_csv(std::span<const SweepCell> cells) {
  std::ostringstream os;
  os << "n1,n2,tag_reads,way_accesses,mab_hits,total_energy,avg_power\n";
  os << std::setprecision(17);
  for (const auto& c : cells)
    os << c.n1 << ',' << c.n2 << ',' << c.counters.tag_reads << ','
       << c.counters.way_accesses << ',' << c.counters.mab_hits << ','
       << c.power.total_energy << ',' << c.power.average_power << '\n';
  return os.str();
}

}  // namespace wmemo
