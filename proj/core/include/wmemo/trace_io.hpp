#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wmemo/dcache_path.hpp"
#include "wmemo/icache_path.hpp"

namespace wmemo {

struct MemRecord {
  MemKind kind = MemKind::load;
  Addr base = 0;
  std::int64_t disp = 0;

  bool operator==(const MemRecord&) const = default;
};

using TraceRecord = std::variant<FetchRecord, MemRecord>;

/// Raised for a malformed trace line. line and column are 1-based.
class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, std::size_t column, const std::string& msg);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Text format, one record per line:
//   # comment
//   I <pc> seq | I <pc> br <disp> | I <pc> lnk <target>
//   L <base> <disp>
//   S <base> <disp>
// Addresses are 0x-prefixed hex, displacements signed decimal.

/// Parses one line; blank and comment lines yield nullopt.
std::optional<TraceRecord> parse_line(std::string_view line,
                                      std::size_t line_no,
                                      unsigned address_bits = 32);

/// `line_numbers`, when given, receives the source line of each record.
std::vector<TraceRecord> parse_trace(std::istream& in,
                                     unsigned address_bits = 32,
                                     std::vector<std::size_t>* line_numbers = nullptr);
std::vector<TraceRecord> parse_trace(std::string_view text,
                                     unsigned address_bits = 32);

std::string format_record(const TraceRecord& r);
void emit_trace(std::ostream& out, std::span<const TraceRecord> records);
std::string emit_trace(std::span<const TraceRecord> records);

/// A counted loop: `body_fetches` straight-line instructions closed by a
/// backward branch, with loads/stores at fixed (base, disp) slots that repeat
/// every iteration.
struct LoopSpec {
  std::uint64_t iterations = 1000;
  unsigned body_fetches = 16;
  unsigned loads_per_iter = 4;
  unsigned distinct_bases = 2;
  std::int64_t disp_stride = 4;
  double store_fraction = 0.25;
  Addr code_base = 0x1000;
  Addr data_base = 0x100000;
  Addr base_spacing = 0x2040;
  std::uint64_t seed = 1;
};

std::vector<TraceRecord> gen_loop(const LoopSpec& spec, const CacheGeometry& g);

/// Pseudo-random mixed trace with calls/returns, short and long branches and
/// occasional out-of-window displacements.
struct RandomSpec {
  std::uint64_t n = 10000;
  std::uint64_t seed = 1;
  Addr pc_lo = 0x1000;
  Addr pc_hi = 0x41000;
  Addr data_lo = 0x100000;
  Addr data_hi = 0x140000;
  unsigned base_pool = 32;
  std::int64_t max_small_disp = 256;
  std::int64_t max_branch = 512;
  double mem_fraction = 0.35;
  double store_fraction = 0.3;
  double far_disp_prob = 0.02;
  double branch_prob = 0.12;
  double far_branch_prob = 0.1;
  double link_prob = 0.04;
};

std::vector<TraceRecord> gen_random(const RandomSpec& spec,
                                    const CacheGeometry& g);

/// Index of the first fetch record whose pc does not follow from the
/// previous fetch's transfer.
std::optional<std::size_t> first_inconsistent_fetch(
    std::span<const TraceRecord> records, const CacheGeometry& g);

inline bool fetch_stream_consistent(std::span<const TraceRecord> records,
                                    const CacheGeometry& g) {
  return !first_inconsistent_fetch(records, g).has_value();
}

}  // namespace wmemo
