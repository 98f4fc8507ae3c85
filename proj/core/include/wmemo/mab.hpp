#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wmemo/geometry.hpp"

namespace wmemo {

/// Two bits stored beside each memoized tag: the carry out of the narrow
/// (offset + index wide) adder and the sign of the displacement.
struct Cflag {
  bool carry = false;
  bool neg = false;

  bool operator==(const Cflag&) const = default;
};

struct MabConfig {
  unsigned n_tag_rows = 2;
  unsigned n_index_cols = 8;
  /// Clear memoized cells whenever the cache evicts the line they name.
  /// When false only the bypass rule and the four-case clearing apply.
  bool precise_invalidation = true;

  void validate() const;
  bool operator==(const MabConfig&) const = default;
};

/// What the MAB can know about `base + disp` before the full address adder
/// finishes: the upper bits of the base, the narrow-adder carry, the sign of
/// the displacement, and the low bits of the sum.
struct Prediction {
  bool in_range = false;
  Addr base_tag = 0;
  Cflag cflag;
  Addr pred_index = 0;
  Addr pred_offset = 0;
  /// base_tag + carry - neg, modulo 2^tag_bits.
  Addr effective_tag = 0;

  bool operator==(const Prediction&) const = default;
};

/// Splits base + disp without a full-width add.
///
/// A displacement is in range when it fits in a (offset + index + 1)-bit two's
/// complement value, i.e. disp in [-2^k, 2^k - 1] with k = offset + index bits.
/// Outside that window only `in_range` is meaningful.
Prediction predict(Addr base, std::int64_t disp, const CacheGeometry& g);

inline bool displacement_in_range(std::int64_t disp, const CacheGeometry& g) {
  const std::int64_t lim = std::int64_t{1} << g.low_bits();
  return disp >= -lim && disp < lim;
}

enum class MabCase : std::uint8_t {
  hit_both = 1,     // row and column present
  miss_row = 2,     // column present, tag row replaced
  miss_col = 3,     // tag row present, column replaced
  miss_both = 4,
};

struct MabOutcome {
  std::optional<unsigned> row;
  std::optional<unsigned> col;
  /// Row and column hit and the cell's vflag is set.
  bool hit = false;
  WayId way = 0;

  MabCase update_case() const;
};

struct MabRow {
  bool valid = false;
  Addr tag = 0;
  Cflag cflag;
};

struct MabCol {
  bool valid = false;
  Addr index = 0;
};

/// A valid (row, column) cell, resolved to the line it names.
struct MemoEntry {
  Addr effective_tag = 0;
  Addr index = 0;
  WayId way = 0;
  unsigned row = 0;
  unsigned col = 0;

  bool operator==(const MemoEntry&) const = default;
};

/// Memory Address Buffer.
///
/// n1 tag rows (tag + cflag) and n2 set-index columns; cell (i, j) memoizes
/// the cache way of the line (tag of row i, index of column j) when its vflag
/// is set. Rows and columns are replaced independently by LRU. After reset
/// both recency orders are ascending by entry number, so entry 0 is the first
/// to be filled.
class Mab {
 public:
  Mab(const CacheGeometry& g, const MabConfig& cfg);

  /// Row match compares the stored (tag, cflag) pair, not the effective tag,
  /// so two encodings of one line conservatively miss each other.
  MabOutcome lookup(const Prediction& p) const;

  /// Records that the access predicted by `p` resolved to `resolved_way`.
  /// `outcome` must come from lookup(p) on this state; snoop_evict calls in
  /// between are allowed since they never move rows or columns.
  void update(const Prediction& p, const MabOutcome& outcome,
              WayId resolved_way);

  /// Out-of-range displacement: clear every vflag of the LRU tag row.
  void bypass_invalidate();

  /// Clear every cell naming the evicted line.
  void snoop_evict(Addr victim_tag, Addr victim_index);

  std::vector<MemoEntry> valid_pairs() const;

  void reset();

  const MabConfig& config() const { return cfg_; }
  const CacheGeometry& geometry() const { return geom_; }
  const MabRow& row(unsigned i) const { return rows_[i]; }
  const MabCol& col(unsigned j) const { return cols_[j]; }
  bool vflag(unsigned i, unsigned j) const { return vflag_[cell(i, j)] != 0; }
  WayId memo_way(unsigned i, unsigned j) const { return memo_way_[cell(i, j)]; }
  unsigned lru_row() const { return row_order_.front(); }
  unsigned lru_col() const { return col_order_.front(); }
  Addr effective_tag(unsigned i) const;
  /// Number of set vflags in row i / column j.
  unsigned row_population(unsigned i) const;
  unsigned col_population(unsigned j) const;

  /// Test hook: install a row directly, bypassing prediction.
  void force_row(unsigned i, const MabRow& r) { rows_[i] = r; }

 private:
  std::size_t cell(unsigned i, unsigned j) const {
    return std::size_t{i} * cfg_.n_index_cols + j;
  }
  void touch_row(unsigned i);
  void touch_col(unsigned j);
  void clear_row(unsigned i);
  void clear_col(unsigned j);

  CacheGeometry geom_;
  MabConfig cfg_;
  std::vector<MabRow> rows_;
  std::vector<MabCol> cols_;
  std::vector<std::uint8_t> vflag_;
  std::vector<WayId> memo_way_;
  std::vector<unsigned> row_order_;  // least recent first
  std::vector<unsigned> col_order_;
};

}  // namespace wmemo
