#include "wmemo/icache_path.hpp"

#include <sstream>

namespace wmemo {

Addr next_pc(const FetchRecord& rec, const CacheGeometry& g) {
  switch (rec.transfer.kind) {
    case Transfer::Kind::fallthrough:
      return (rec.pc + g.instr_stride_bytes) & g.address_mask();
    case Transfer::Kind::branch:
      return (rec.pc + static_cast<Addr>(rec.transfer.disp)) & g.address_mask();
    case Transfer::Kind::link:
      return rec.transfer.target & g.address_mask();
  }
  return 0;
}

FlowClass classify(const FetchRecord& prev, Addr cur_pc,
                   const CacheGeometry& g) {
  const bool sequential =
      prev.transfer.kind == Transfer::Kind::fallthrough &&
      cur_pc == ((prev.pc + g.instr_stride_bytes) & g.address_mask());
  if (same_line(prev.pc, cur_pc, g))
    return sequential ? FlowClass::intra_seq : FlowClass::intra_nonseq;
  return sequential ? FlowClass::inter_seq : FlowClass::inter_nonseq;
}

ICachePath::ICachePath(const CacheGeometry& g, const MabConfig& mab_cfg,
                       IMode mode, RefillCost refill)
    : geom_(g), mode_(mode), refill_(refill), cache_(g), mab_(g, mab_cfg) {}

void ICachePath::reset() {
  cache_.reset();
  mab_.reset();
  counters_ = Counters{};
  prev_.reset();
  prev_way_ = 0;
  fetches_ = 0;
}

IAccessReport ICachePath::fetch(const FetchRecord& rec) {
  const Addr pc = rec.pc & geom_.address_mask();
  IAccessReport r;

  if (prev_) {
    const Addr expected = next_pc(*prev_, geom_);
    if (expected != pc) {
      std::ostringstream os;
      os << "fetch " << fetches_ << " at pc 0x" << std::hex << pc
         << " does not follow previous transfer (expected 0x" << expected
         << ")";
      throw FetchSequenceError(fetches_, os.str());
    }
    r.flow = classify(*prev_, pc, geom_);
  }

  const bool reuse_way = mode_ != IMode::baseline && is_intra_line(r.flow);

  std::optional<Prediction> pred;
  MabOutcome memo;
  if (mode_ == IMode::full_mab && prev_ && !is_intra_line(r.flow)) {
    const FetchRecord& p = *prev_;
    switch (p.transfer.kind) {
      case Transfer::Kind::fallthrough:
        pred = predict(p.pc, geom_.instr_stride_bytes, geom_);
        break;
      case Transfer::Kind::branch:
        pred = predict(p.pc, p.transfer.disp, geom_);
        break;
      case Transfer::Kind::link:
        pred = predict(p.transfer.target, 0, geom_);
        break;
    }
    if (pred->in_range) {
      memo = mab_.lookup(*pred);
      r.mab_lookup = true;
    } else {
      r.bypass = true;
      pred.reset();
    }
  }

  r.cache = cache_.access(pc, AccessKind::read);
  r.cache_hit = r.cache.hit;
  if (reuse_way && (!r.cache.hit || r.cache.way != prev_way_))
    throw std::logic_error("intra-line fetch did not find its line resident");

  if (mode_ == IMode::full_mab) {
    if (r.cache.victim && mab_.config().precise_invalidation)
      mab_.snoop_evict(r.cache.victim->tag, r.cache.victim->index);
    if (r.bypass) {
      mab_.bypass_invalidate();
    } else if (pred && memo.hit) {
      r.mab_hit = true;
      r.mab_way = memo.way;
      mab_.update(*pred, memo, memo.way);
    } else if (pred) {
      mab_.update(*pred, memo, r.cache.way);
    }
  }

  if (reuse_way || r.mab_hit) {
    r.tag_reads = 0;
    r.way_accesses = 1;
  } else {
    r.tag_reads = geom_.ways;
    r.way_accesses = geom_.ways;
  }
  if (!r.cache.hit) {
    r.tag_writes = refill_.tag_writes;
    r.way_writes = refill_.way_writes;
  }

  prev_ = FetchRecord{pc, rec.transfer};
  prev_way_ = r.cache.way;
  ++fetches_;
  accumulate(counters_, r);
  return r;
}

void accumulate(Counters& c, const IAccessReport& r) {
  ++c.accesses;
  ++c.flow[static_cast<std::size_t>(r.flow)];
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
