#include "wmemo/mab.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace wmemo {

void MabConfig::validate() const {
  if (n_tag_rows < 1) throw std::invalid_argument("MAB needs at least one tag row");
  if (n_index_cols < 1)
    throw std::invalid_argument("MAB needs at least one set-index column");
}

Prediction predict(Addr base, std::int64_t disp, const CacheGeometry& g) {
  Prediction p;
  p.in_range = displacement_in_range(disp, g);
  if (!p.in_range) return p;

  const unsigned k = g.low_bits();
  const Addr low_mask = g.low_mask();
  base &= g.address_mask();
  // Low k bits of the two's complement displacement; the bits above are all
  // copies of the sign because disp is in range.
  const Addr disp_low = static_cast<Addr>(disp) & low_mask;
  const Addr low_sum = (base & low_mask) + disp_low;

  p.base_tag = (base >> k) & g.tag_mask();
  p.cflag.carry = ((low_sum >> k) & 1) != 0;
  p.cflag.neg = disp < 0;
  p.pred_index = (low_sum >> g.offset_bits) & g.index_mask();
  p.pred_offset = low_sum & g.offset_mask();
  p.effective_tag = (p.base_tag + (p.cflag.carry ? 1 : 0) -
                     (p.cflag.neg ? 1 : 0)) & g.tag_mask();
  return p;
}

MabCase MabOutcome::update_case() const {
  if (row && col) return MabCase::hit_both;
  if (col) return MabCase::miss_row;
  if (row) return MabCase::miss_col;
  return MabCase::miss_both;
}

Mab::Mab(const CacheGeometry& g, const MabConfig& cfg) : geom_(g), cfg_(cfg) {
  geom_.validate();
  cfg_.validate();
  rows_.resize(cfg_.n_tag_rows);
  cols_.resize(cfg_.n_index_cols);
  vflag_.resize(std::size_t{cfg_.n_tag_rows} * cfg_.n_index_cols);
  memo_way_.resize(vflag_.size());
  row_order_.resize(cfg_.n_tag_rows);
  col_order_.resize(cfg_.n_index_cols);
  reset();
}

void Mab::reset() {
  std::fill(rows_.begin(), rows_.end(), MabRow{});
  std::fill(cols_.begin(), cols_.end(), MabCol{});
  std::fill(vflag_.begin(), vflag_.end(), 0);
  std::fill(memo_way_.begin(), memo_way_.end(), 0);
  std::iota(row_order_.begin(), row_order_.end(), 0u);
  std::iota(col_order_.begin(), col_order_.end(), 0u);
}

Addr Mab::effective_tag(unsigned i) const {
  const MabRow& r = rows_[i];
  return (r.tag + (r.cflag.carry ? 1 : 0) - (r.cflag.neg ? 1 : 0)) &
         geom_.tag_mask();
}

MabOutcome Mab::lookup(const Prediction& p) const {
  MabOutcome out;
  for (unsigned i = 0; i < cfg_.n_tag_rows; ++i) {
    const MabRow& r = rows_[i];
    if (r.valid && r.tag == p.base_tag && r.cflag == p.cflag) {
      out.row = i;
      break;
    }
  }
  for (unsigned j = 0; j < cfg_.n_index_cols; ++j) {
    if (cols_[j].valid && cols_[j].index == p.pred_index) {
      out.col = j;
      break;
    }
  }
  if (out.row && out.col && vflag(*out.row, *out.col)) {
    out.hit = true;
    out.way = memo_way(*out.row, *out.col);
  }
  return out;
}

void Mab::touch_row(unsigned i) {
  auto it = std::find(row_order_.begin(), row_order_.end(), i);
  std::rotate(it, it + 1, row_order_.end());
}

void Mab::touch_col(unsigned j) {
  auto it = std::find(col_order_.begin(), col_order_.end(), j);
  std::rotate(it, it + 1, col_order_.end());
}

void Mab::clear_row(unsigned i) {
  for (unsigned j = 0; j < cfg_.n_index_cols; ++j) vflag_[cell(i, j)] = 0;
}

void Mab::clear_col(unsigned j) {
  for (unsigned i = 0; i < cfg_.n_tag_rows; ++i) vflag_[cell(i, j)] = 0;
}

void Mab::update(const Prediction& p, const MabOutcome& outcome,
                 WayId resolved_way) {
  unsigned i = 0;
  unsigned j = 0;
  if (outcome.row) {
    i = *outcome.row;
  } else {
    i = lru_row();
    rows_[i] = MabRow{true, p.base_tag, p.cflag};
    clear_row(i);
  }
  if (outcome.col) {
    j = *outcome.col;
  } else {
    j = lru_col();
    cols_[j] = MabCol{true, p.pred_index};
    clear_col(j);
  }
  vflag_[cell(i, j)] = 1;
  memo_way_[cell(i, j)] = resolved_way;
  touch_row(i);
  touch_col(j);
}

void Mab::bypass_invalidate() { clear_row(lru_row()); }

void Mab::snoop_evict(Addr victim_tag, Addr victim_index) {
  for (unsigned i = 0; i < cfg_.n_tag_rows; ++i) {
    if (!rows_[i].valid || effective_tag(i) != victim_tag) continue;
    for (unsigned j = 0; j < cfg_.n_index_cols; ++j)
      if (cols_[j].valid && cols_[j].index == victim_index)
        vflag_[cell(i, j)] = 0;
  }
}

std::vector<MemoEntry> Mab::valid_pairs() const {
  std::vector<MemoEntry> out;
  for (unsigned i = 0; i < cfg_.n_tag_rows; ++i)
    for (unsigned j = 0; j < cfg_.n_index_cols; ++j)
      if (vflag(i, j))
        out.push_back({effective_tag(i), cols_[j].index, memo_way(i, j), i, j});
  return out;
}

unsigned Mab::row_population(unsigned i) const {
  unsigned n = 0;
  for (unsigned j = 0; j < cfg_.n_index_cols; ++j) n += vflag(i, j);
  return n;
}

unsigned Mab::col_population(unsigned j) const {
  unsigned n = 0;
  for (unsigned i = 0; i < cfg_.n_tag_rows; ++i) n += vflag(i, j);
  return n;
}

}  // namespace wmemo
