#include "wmemo/geometry.hpp"

#include <sstream>
#include <stdexcept>

namespace wmemo {

CacheGeometry CacheGeometry::from_widths(unsigned address_bits,
                                         unsigned offset_bits,
                                         unsigned index_bits, unsigned ways,
                                         unsigned instr_stride_bytes) {
  if (offset_bits + index_bits > address_bits)
    throw std::invalid_argument("offset_bits + index_bits exceeds address_bits");
  CacheGeometry g;
  g.address_bits = address_bits;
  g.offset_bits = offset_bits;
  g.index_bits = index_bits;
  g.tag_bits = address_bits - offset_bits - index_bits;
  g.ways = ways;
  g.line_bytes = 1u << offset_bits;
  g.sets = 1u << index_bits;
  g.instr_stride_bytes = instr_stride_bytes;
  g.validate();
  return g;
}

void CacheGeometry::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid cache geometry: " + what);
  };
  if (address_bits == 0 || address_bits > 63)
    fail("address_bits must be in [1, 63]");
  if (offset_bits + index_bits + tag_bits != address_bits)
    fail("offset_bits + index_bits + tag_bits must equal address_bits");
  if (offset_bits > 20 || index_bits > 24)
    fail("offset_bits/index_bits too large");
  if (line_bytes != (1ull << offset_bits))
    fail("line_bytes must equal 2^offset_bits");
  if (sets != (1ull << index_bits)) fail("sets must equal 2^index_bits");
  if (ways < 1) fail("ways must be at least 1");
  if (instr_stride_bytes == 0 || line_bytes % instr_stride_bytes != 0)
    fail("instr_stride_bytes must divide line_bytes");
}

Addr compose(const AddressParts& parts, const CacheGeometry& g) {
  if (parts.tag > g.tag_mask())
    throw std::out_of_range("tag exceeds tag_bits");
  if (parts.index > g.index_mask())
    throw std::out_of_range("index exceeds index_bits");
  if (parts.offset > g.offset_mask())
    throw std::out_of_range("offset exceeds offset_bits");
  return (parts.tag << g.low_bits()) | (parts.index << g.offset_bits) |
         parts.offset;
}

std::string to_string(const CacheGeometry& g) {
  std::ostringstream os;
  os << g.address_bits << "-bit addr, " << g.sets << " sets x " << g.ways
     << " ways x " << g.line_bytes << "B (tag/index/offset " << g.tag_bits
     << "/" << g.index_bits << "/" << g.offset_bits << ")";
  return os.str();
}

}  // namespace wmemo
