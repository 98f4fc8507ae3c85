#pragma once

#include <optional>
#include <vector>

#include "wmemo/geometry.hpp"

namespace wmemo {

enum class AccessKind { read, write };

/// Tag and data-way writes charged for a miss fill.
struct RefillCost {
  unsigned tag_writes = 1;
  unsigned way_writes = 1;

  bool operator==(const RefillCost&) const = default;
};

/// Line identity of an evicted block.
struct Victim {
  Addr tag = 0;
  Addr index = 0;

  bool operator==(const Victim&) const = default;
};

struct AccessOutcome {
  bool hit = false;
  /// Way that holds the line after the access. Meaningless when !resident.
  WayId way = 0;
  /// False only for a write miss with write-allocate disabled.
  bool resident = true;
  std::optional<Victim> victim;

  bool operator==(const AccessOutcome&) const = default;
};

/// Tag-only set-associative cache with true LRU replacement per set.
///
/// No data values are stored. After reset every set's recency order is
/// way 0 (least recent) .. ways-1 (most recent), so cold fills go to way 0
/// first.
class SetAssocCache {
 public:
  explicit SetAssocCache(const CacheGeometry& g, bool write_allocate = true);

  AccessOutcome access(Addr addr, AccessKind kind = AccessKind::read);

  /// Non-mutating lookup; leaves recency untouched.
  std::optional<WayId> probe(Addr addr) const;

  void reset();

  const CacheGeometry& geometry() const { return geom_; }
  bool write_allocate() const { return write_allocate_; }

  /// 0 = least recently used.
  unsigned lru_rank(Addr set, WayId way) const;
  unsigned valid_lines(Addr set) const;

 private:
  struct Line {
    bool valid = false;
    Addr tag = 0;
  };

  std::size_t slot(Addr set, WayId way) const { return set * geom_.ways + way; }
  void touch(Addr set, WayId way);

  CacheGeometry geom_;
  bool write_allocate_;
  std::vector<Line> lines_;
  // Per set, ways ordered least to most recently used.
  std::vector<WayId> order_;
};

}  // namespace wmemo
