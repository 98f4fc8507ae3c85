#include "wmemo/dcache_path.hpp"

namespace wmemo {

DCachePath::DCachePath(const CacheGeometry& g, const MabConfig& mab_cfg,
                       DMode mode, RefillCost refill, bool write_allocate)
    : geom_(g),
      mode_(mode),
      refill_(refill),
      cache_(g, write_allocate),
      mab_(g, mab_cfg) {}

void DCachePath::reset() {
  cache_.reset();
  mab_.reset();
  counters_ = Counters{};
}

DAccessReport DCachePath::access(MemKind kind, Addr base, std::int64_t disp) {
  DAccessReport r;
  r.kind = kind;
  r.effective_address = (base + static_cast<Addr>(disp)) & geom_.address_mask();
  const AccessKind ak =
      kind == MemKind::store ? AccessKind::write : AccessKind::read;

  std::optional<Prediction> pred;
  MabOutcome memo;
  if (mode_ == DMode::mab) {
    pred = predict(base, disp, geom_);
    if (pred->in_range) {
      memo = mab_.lookup(*pred);
      r.mab_lookup = true;
    } else {
      r.bypass = true;
      pred.reset();
    }
  }

  r.cache = cache_.access(r.effective_address, ak);
  r.cache_hit = r.cache.hit;

  if (mode_ == DMode::mab) {
    if (r.cache.victim && mab_.config().precise_invalidation)
      mab_.snoop_evict(r.cache.victim->tag, r.cache.victim->index);
    if (r.bypass) {
      mab_.bypass_invalidate();
    } else if (memo.hit) {
      r.mab_hit = true;
      r.mab_way = memo.way;
      // Recency refresh only; the memoized way is what the hardware used.
      mab_.update(*pred, memo, memo.way);
    } else if (r.cache.resident) {
      mab_.update(*pred, memo, r.cache.way);
    }
  }

  if (r.mab_hit) {
    r.tag_reads = 0;
    r.way_accesses = 1;
  } else {
    r.tag_reads = geom_.ways;
    r.way_accesses = kind == MemKind::store ? 1 : geom_.ways;
  }
  if (!r.cache.hit && r.cache.resident) {
    r.tag_writes = refill_.tag_writes;
    r.way_writes = refill_.way_writes;
  }

  accumulate(counters_, r);
  return r;
}

void accumulate(Counters& c, const DAccessReport& r) {
  ++c.accesses;
  if (r.kind == MemKind::store) {
    ++c.stores;
    c.store_way_accesses += r.way_accesses;
  } else {
    ++c.loads;
    c.load_way_accesses += r.way_accesses;
  }
  c.tag_reads += r.tag_reads;
  c.tag_writes += r.tag_writes;
  c.way_accesses += r.way_accesses;
  c.way_writes += r.way_writes;
  if (r.bypass) {
    ++c.bypasses;
  } else if (r.mab_hit) {
    ++c.mab_hits;
  } else if (r.mab_lookup) {
    ++c.mab_misses;
  }
  if (r.cache_hit) {
    ++c.cache_hits;
  } else {
    ++c.cache_misses;
  }
}

}  // namespace wmemo
