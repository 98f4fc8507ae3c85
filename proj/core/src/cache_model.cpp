#include "wmemo/cache_model.hpp"

#include <algorithm>

namespace wmemo {

SetAssocCache::SetAssocCache(const CacheGeometry& g, bool write_allocate)
    : geom_(g), write_allocate_(write_allocate) {
  geom_.validate();
  lines_.resize(std::size_t{geom_.sets} * geom_.ways);
  order_.resize(lines_.size());
  reset();
}

void SetAssocCache::reset() {
  std::fill(lines_.begin(), lines_.end(), Line{});
  for (Addr s = 0; s < geom_.sets; ++s)
    for (WayId w = 0; w < geom_.ways; ++w) order_[slot(s, w)] = w;
}

void SetAssocCache::touch(Addr set, WayId way) {
  auto first = order_.begin() + static_cast<std::ptrdiff_t>(slot(set, 0));
  auto last = first + geom_.ways;
  auto it = std::find(first, last, way);
  std::rotate(it, it + 1, last);
}

AccessOutcome SetAssocCache::access(Addr addr, AccessKind kind) {
  const AddressParts p = decompose(addr, geom_);
  AccessOutcome out;
  for (WayId w = 0; w < geom_.ways; ++w) {
    const Line& l = lines_[slot(p.index, w)];
    if (l.valid && l.tag == p.tag) {
      out.hit = true;
      out.way = w;
      touch(p.index, w);
      return out;
    }
  }
  if (kind == AccessKind::write && !write_allocate_) {
    out.resident = false;
    return out;
  }
  const WayId victim_way = order_[slot(p.index, 0)];
  Line& l = lines_[slot(p.index, victim_way)];
  if (l.valid) out.victim = Victim{l.tag, p.index};
  l.valid = true;
  l.tag = p.tag;
  out.way = victim_way;
  touch(p.index, victim_way);
  return out;
}

std::optional<WayId> SetAssocCache::probe(Addr addr) const {
  const AddressParts p = decompose(addr, geom_);
  for (WayId w = 0; w < geom_.ways; ++w) {
    const Line& l = lines_[slot(p.index, w)];
    if (l.valid && l.tag == p.tag) return w;
  }
  return std::nullopt;
}

unsigned SetAssocCache::lru_rank(Addr set, WayId way) const {
  for (unsigned r = 0; r < geom_.ways; ++r)
    if (order_[slot(set, r)] == way) return r;
  return geom_.ways;
}

unsigned SetAssocCache::valid_lines(Addr set) const {
  unsigned n = 0;
  for (WayId w = 0; w < geom_.ways; ++w) n += lines_[slot(set, w)].valid;
  return n;
}

}  // namespace wmemo
