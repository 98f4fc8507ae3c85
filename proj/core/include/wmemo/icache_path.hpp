#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "wmemo/cache_model.hpp"
#include "wmemo/energy_stats.hpp"
#include "wmemo/flow.hpp"
#include "wmemo/mab.hpp"

namespace wmemo {

/// How control leaves an instruction.
struct Transfer {
  enum class Kind : unsigned char { fallthrough, branch, link };

  Kind kind = Kind::fallthrough;
  std::int64_t disp = 0;  // branch offset, relative to the instruction's pc
  Addr target = 0;        // link-register target

  static Transfer fallthrough() { return {}; }
  static Transfer branch(std::int64_t d) { return {Kind::branch, d, 0}; }
  static Transfer link(Addr t) { return {Kind::link, 0, t}; }

  bool operator==(const Transfer&) const = default;
};

struct FetchRecord {
  Addr pc = 0;
  Transfer transfer;

  bool operator==(const FetchRecord&) const = default;
};

/// pc of the instruction that follows `rec`.
Addr next_pc(const FetchRecord& rec, const CacheGeometry& g);

/// A taken branch to the next address must already be folded into
/// fallthrough by the trace producer; otherwise it classifies as
/// non-sequential.
FlowClass classify(const FetchRecord& prev, Addr cur_pc,
                   const CacheGeometry& g);

enum class IMode : unsigned char { baseline, intra_only, full_mab };

/// A fetch pc that cannot follow from the previous fetch's transfer.
class FetchSequenceError : public std::runtime_error {
 public:
  FetchSequenceError(std::uint64_t fetch_index, const std::string& what)
      : std::runtime_error(what), fetch_index_(fetch_index) {}
  std::uint64_t fetch_index() const { return fetch_index_; }

 private:
  std::uint64_t fetch_index_;
};

struct IAccessReport {
  FlowClass flow = FlowClass::first_fetch;
  bool mab_lookup = false;
  bool mab_hit = false;
  bool bypass = false;
  bool cache_hit = false;
  unsigned tag_reads = 0;
  unsigned way_accesses = 0;
  unsigned tag_writes = 0;
  unsigned way_writes = 0;
  std::optional<WayId> mab_way;
  AccessOutcome cache;
};

/// Instruction fetch pipeline.
///
/// Fetches that stay within the previous fetch's line reuse its way with no
/// tag check (intra_only and full_mab). In full_mab, fetches that change
/// line consult the MAB with one of three inputs:
///   sequential     base = previous pc, disp = fetch stride
///   branch         base = previous pc, disp = branch offset
///   link jump      base = link target, disp = 0
class ICachePath {
 public:
  ICachePath(const CacheGeometry& g, const MabConfig& mab_cfg, IMode mode,
             RefillCost refill = {});

  /// Throws FetchSequenceError if rec.pc contradicts the previous transfer.
  IAccessReport fetch(const FetchRecord& rec);

  IMode mode() const { return mode_; }
  const SetAssocCache& cache() const { return cache_; }
  SetAssocCache& mutable_cache() { return cache_; }
  const Mab& mab() const { return mab_; }
  const Counters& counters() const { return counters_; }
  const std::optional<FetchRecord>& previous() const { return prev_; }

  void reset();

 private:
  CacheGeometry geom_;
  IMode mode_;
  RefillCost refill_;
  SetAssocCache cache_;
  Mab mab_;
  Counters counters_;
  std::optional<FetchRecord> prev_;
  WayId prev_way_ = 0;
  std::uint64_t fetches_ = 0;
};

void accumulate(Counters& c, const IAccessReport& r);

}  // namespace wmemo
