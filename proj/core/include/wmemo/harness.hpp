#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmemo/dcache_path.hpp"
#include "wmemo/energy_stats.hpp"
#include "wmemo/icache_path.hpp"
#include "wmemo/trace_io.hpp"

namespace wmemo {

/// baseline: no memoization anywhere.
/// intra_only: same-line fetch shortcut only; both MABs idle.
/// full_mab: same-line shortcut plus I-MAB and D-MAB.
enum class SimMode : unsigned char { baseline, intra_only, full_mab };

std::string_view to_string(SimMode m);
std::optional<SimMode> parse_sim_mode(std::string_view s);

struct SimConfig {
  CacheGeometry geometry;
  MabConfig dmab{2, 8, true};
  MabConfig imab{2, 16, true};
  RefillCost refill;
  bool write_allocate = true;

  void validate() const;
};

/// One I-cache and one D-cache driven by a single trace.
class Simulator {
 public:
  Simulator(const SimConfig& cfg, SimMode mode);

  struct Step {
    bool fetch = false;
    AccessOutcome cache;
    bool mab_hit = false;
    std::optional<WayId> mab_way;
    Addr address = 0;
  };

  Step step(const TraceRecord& rec);

  SimMode mode() const { return mode_; }
  ICachePath& icache() { return icache_; }
  DCachePath& dcache() { return dcache_; }
  const ICachePath& icache() const { return icache_; }
  const DCachePath& dcache() const { return dcache_; }

 private:
  SimMode mode_;
  ICachePath icache_;
  DCachePath dcache_;
};

/// A simulated configuration inside a differential run.
struct LaneSpec {
  std::string name;
  SimMode mode = SimMode::baseline;
  /// Overrides the invalidation policy of both MABs; otherwise each MAB
  /// keeps its configured policy.
  std::optional<bool> precise;
};

/// Lanes named baseline, intra_only, full_mab (configured invalidation
/// policy) and full_mab_lazy (four-case clearing and bypass rule only).
std::optional<LaneSpec> lane_from_name(std::string_view name);

enum class ViolationKind : unsigned char { stale_mab, transparency, count_dominance };
std::string_view to_string(ViolationKind k);

struct Violation {
  std::uint64_t step = 0;
  ViolationKind kind = ViolationKind::stale_mab;
  std::string lane;
  std::string detail;
  /// Gated violations fail the audit; the rest are recorded findings.
  bool gated = true;
};

struct LaneResult {
  LaneSpec spec;
  Counters icache;
  Counters dcache;
};

struct AuditOptions {
  std::size_t max_recorded = 1000;
  /// Test hook: perturb lane 1's observed outcome at this step.
  std::optional<std::uint64_t> inject_fault_at;
};

struct AuditReport {
  std::uint64_t steps = 0;
  std::vector<Violation> violations;  // first max_recorded, in step order
  std::uint64_t gated_violations = 0;
  std::uint64_t finding_violations = 0;
  std::uint64_t stale_mab = 0;
  std::uint64_t transparency = 0;
  std::uint64_t count_dominance = 0;
  std::vector<LaneResult> lanes;

  bool ok() const { return gated_violations == 0; }
  const LaneResult* lane(std::string_view name) const;
};

/// Runs every lane over the trace in lockstep and audits after each record:
/// all lanes see identical cache hit/miss/way/victim outcomes, every valid MAB
/// cell names a resident line in its memoized way, and cumulative tag and way
/// counts never exceed the less optimized lanes'. Stale cells are gated only
/// for MABs with precise invalidation. Throws FetchSequenceError on an inconsistent fetch stream.
AuditReport differential_run(std::span<const TraceRecord> trace,
                             const SimConfig& cfg,
                             std::span<const LaneSpec> lanes,
                             const AuditOptions& opts = {});

enum class CacheSide : unsigned char { icache, dcache };

struct SweepCell {
  unsigned n1 = 0;
  unsigned n2 = 0;
  Counters counters;
  PowerReport power;
};

struct SweepSpec {
  std::vector<unsigned> n1_list;
  std::vector<unsigned> n2_list;
  CacheSide side = CacheSide::dcache;
  EnergyParams energy;
  /// Per-(n1, n2) MAB power; cells missing from the table use energy.p_mab_*.
  MabPowerTable power_table;
  unsigned threads = 1;
};

/// One full_mab simulation per (n1, n2) on the chosen side, n1-major order.
std::vector<SweepCell> sweep(std::span<const TraceRecord> trace,
                             const SimConfig& cfg, const SweepSpec& spec);

std::string sweep_csv(std::span<const SweepCell> cells);

}  // namespace wmemo
