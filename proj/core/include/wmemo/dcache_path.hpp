#pragma once

#include <cstdint>
#include <optional>

#include "wmemo/cache_model.hpp"
#include "wmemo/energy_stats.hpp"
#include "wmemo/mab.hpp"

namespace wmemo {

enum class MemKind : unsigned char { load, store };

enum class DMode : unsigned char { baseline, mab };

struct DAccessReport {
  MemKind kind = MemKind::load;
  /// An in-range prediction was looked up in the MAB.
  bool mab_lookup = false;
  bool mab_hit = false;
  bool bypass = false;
  bool cache_hit = false;
  unsigned tag_reads = 0;
  unsigned way_accesses = 0;
  unsigned tag_writes = 0;
  unsigned way_writes = 0;
  Addr effective_address = 0;
  /// Way the MAB supplied on a hit.
  std::optional<WayId> mab_way;
  AccessOutcome cache;
};

/// Load/store pipeline: MAB lookup in parallel with address generation,
/// then the cache access.
///
/// Baseline loads read every tag and every way; stores read every tag and
/// write a single way (write-back buffer). A MAB hit reads no tags and one
/// way. The cache itself is accessed identically in both modes, so hit/miss
/// and eviction behaviour never depend on the MAB.
class DCachePath {
 public:
  DCachePath(const CacheGeometry& g, const MabConfig& mab_cfg, DMode mode,
             RefillCost refill = {}, bool write_allocate = true);

  DAccessReport access(MemKind kind, Addr base, std::int64_t disp);

  DMode mode() const { return mode_; }
  const SetAssocCache& cache() const { return cache_; }
  SetAssocCache& mutable_cache() { return cache_; }
  const Mab& mab() const { return mab_; }
  const Counters& counters() const { return counters_; }

  void reset();

 private:
  CacheGeometry geom_;
  DMode mode_;
  RefillCost refill_;
  SetAssocCache cache_;
  Mab mab_;
  Counters counters_;
};

void accumulate(Counters& c, const DAccessReport& r);

}  // namespace wmemo
