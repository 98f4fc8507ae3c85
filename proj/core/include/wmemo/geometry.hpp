#pragma once

#include <cstdint>
#include <string>

namespace wmemo {

using Addr = std::uint64_t;
using WayId = std::uint32_t;

/// Bit-field layout of a set-associative cache address.
///
/// Defaults describe a 32kB 2-way cache with 512 sets of 32-byte lines and
/// 32-bit addresses: 18 tag bits, 9 index bits, 5 offset bits.
struct CacheGeometry {
  unsigned address_bits = 32;
  unsigned offset_bits = 5;
  unsigned index_bits = 9;
  unsigned tag_bits = 18;
  unsigned ways = 2;
  unsigned line_bytes = 32;
  unsigned sets = 512;
  unsigned instr_stride_bytes = 4;

  /// Builds a consistent geometry from the three widths and associativity.
  static CacheGeometry from_widths(unsigned address_bits, unsigned offset_bits,
                                   unsigned index_bits, unsigned ways,
                                   unsigned instr_stride_bytes = 4);

  /// Throws std::invalid_argument naming the first broken invariant.
  void validate() const;

  /// Width of the narrow adder that produces index and offset (offset + index).
  unsigned low_bits() const { return offset_bits + index_bits; }

  Addr address_mask() const { return mask(address_bits); }
  Addr tag_mask() const { return mask(tag_bits); }
  Addr index_mask() const { return mask(index_bits); }
  Addr offset_mask() const { return mask(offset_bits); }
  Addr low_mask() const { return mask(low_bits()); }

  static constexpr Addr mask(unsigned bits) {
    return bits >= 64 ? ~Addr{0} : ((Addr{1} << bits) - 1);
  }

  bool operator==(const CacheGeometry&) const = default;
};

struct AddressParts {
  Addr tag = 0;
  Addr index = 0;
  Addr offset = 0;

  bool operator==(const AddressParts&) const = default;
};

inline AddressParts decompose(Addr addr, const CacheGeometry& g) {
  return AddressParts{
      (addr >> g.low_bits()) & g.tag_mask(),
      (addr >> g.offset_bits) & g.index_mask(),
      addr & g.offset_mask(),
  };
}

/// Inverse of decompose. Throws std::out_of_range if a field exceeds its width.
Addr compose(const AddressParts& parts, const CacheGeometry& g);

/// Line identity: everything above the offset field.
inline Addr line_of(Addr addr, const CacheGeometry& g) {
  return (addr & g.address_mask()) >> g.offset_bits;
}

inline bool same_line(Addr a, Addr b, const CacheGeometry& g) {
  return line_of(a, g) == line_of(b, g);
}

std::string to_string(const CacheGeometry& g);

}  // namespace wmemo
