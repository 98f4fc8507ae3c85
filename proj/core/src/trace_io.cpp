#include "wmemo/trace_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace wmemo {

TraceParseError::TraceParseError(std::size_t line, std::size_t column,
                                 const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r')
      ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::size_t line_no, unsigned address_bits)
      : line_no_(line_no), address_bits_(address_bits) {}

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw TraceParseError(line_no_, t.column, msg);
  }

  Addr address(const Token& t) const {
    std::string_view s = t.text;
    if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X'))
      fail(t, "expected 0x-prefixed hex address, got '" + std::string(s) + "'");
    s.remove_prefix(2);
    Addr v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (ec == std::errc::result_out_of_range || (ec == std::errc{} &&
        ptr == s.data() + s.size() && v > CacheGeometry::mask(address_bits_)))
      fail(t, "address out of range for " + std::to_string(address_bits_) +
                  "-bit address space");
    if (ec != std::errc{} || ptr != s.data() + s.size())
      fail(t, "malformed hex address '" + std::string(t.text) + "'");
    return v;
  }

  std::int64_t displacement(const Token& t) const {
    std::string_view s = t.text;
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 10);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
      fail(t, "malformed signed decimal displacement '" + std::string(t.text) +
                  "'");
    const std::int64_t lim = std::int64_t{1} << address_bits_;
    if (v <= -lim || v >= lim)
      fail(t, "displacement exceeds the address space");
    return v;
  }

 private:
  std::size_t line_no_;
  unsigned address_bits_;
};

}  // namespace

std::optional<TraceRecord> parse_line(std::string_view line,
                                      std::size_t line_no,
                                      unsigned address_bits) {
  const auto toks = tokenize(line);
  if (toks.empty() || toks[0].text[0] == '#') return std::nullopt;
  LineParser p(line_no, address_bits);
  const Token& op = toks[0];
  auto expect_count = [&](std::size_t n) {
    if (toks.size() < n) {
      const std::size_t col = toks.back().column + toks.back().text.size();
      throw TraceParseError(line_no, col, "missing operand");
    }
    if (toks.size() > n) p.fail(toks[n], "unexpected trailing token");
  };

  if (op.text == "L" || op.text == "S") {
    expect_count(3);
    return MemRecord{op.text == "L" ? MemKind::load : MemKind::store,
                     p.address(toks[1]), p.displacement(toks[2])};
  }
  if (op.text == "I") {
    if (toks.size() < 3) expect_count(3);
    FetchRecord f;
    f.pc = p.address(toks[1]);
    const Token& kind = toks[2];
    if (kind.text == "seq") {
      expect_count(3);
      f.transfer = Transfer::fallthrough();
    } else if (kind.text == "br") {
      expect_count(4);
      f.transfer = Transfer::branch(p.displacement(toks[3]));
    } else if (kind.text == "lnk") {
      expect_count(4);
      f.transfer = Transfer::link(p.address(toks[3]));
    } else {
      p.fail(kind, "unknown transfer '" + std::string(kind.text) +
                       "' (expected seq, br or lnk)");
    }
    return f;
  }
  p.fail(op, "unknown record type '" + std::string(op.text) + "'");
}

std::vector<TraceRecord> parse_trace(std::istream& in, unsigned address_bits,
                                     std::vector<std::size_t>* line_numbers) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto r = parse_line(line, line_no, address_bits)) {
      out.push_back(*r);
      if (line_numbers) line_numbers->push_back(line_no);
    }
  }
  return out;
}

std::vector<TraceRecord> parse_trace(std::string_view text,
                                     unsigned address_bits) {
  std::istringstream in{std::string(text)};
  return parse_trace(in, address_bits);
}

std::string format_record(const TraceRecord& r) {
  std::ostringstream os;
  if (const auto* f = std::get_if<FetchRecord>(&r)) {
    os << "I 0x" << std::hex << f->pc << std::dec;
    switch (f->transfer.kind) {
      case Transfer::Kind::fallthrough: os << " seq"; break;
      case Transfer::Kind::branch: os << " br " << f->transfer.disp; break;
      case Transfer::Kind::link:
        os << " lnk 0x" << std::hex << f->transfer.target << std::dec;
        break;
    }
  } else {
    const auto& m = std::get<MemRecord>(r);
    os << (m.kind == MemKind::load ? "L" : "S") << " 0x" << std::hex << m.base
       << std::dec << " " << m.disp;
  }
  return os.str();
}

void emit_trace(std::ostream& out, std::span<const TraceRecord> records) {
  for (const auto& r : records) out << format_record(r) << '\n';
}

std::string emit_trace(std::span<const TraceRecord> records) {
  std::ostringstream os;
  emit_trace(os, records);
  return os.str();
}

namespace {

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

bool chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

std::vector<TraceRecord> gen_loop(const LoopSpec& spec,
                                  const CacheGeometry& g) {
  std::vector<TraceRecord> out;
  if (spec.iterations == 0) return out;
  require(spec.body_fetches >= 1, "loop body needs at least one fetch");
  require(spec.loads_per_iter == 0 || spec.distinct_bases >= 1,
          "loads need at least one base register");
  const Addr space = g.address_mask();
  const Addr stride = g.instr_stride_bytes;
  require(spec.code_base % stride == 0, "code base must be stride aligned");
  require(spec.code_base + Addr{spec.body_fetches} * stride - 1 <= space,
          "loop body overflows the address space");

  std::vector<Addr> bases(spec.distinct_bases);
  for (unsigned b = 0; b < spec.distinct_bases; ++b) {
    bases[b] = spec.data_base + Addr{b} * spec.base_spacing;
    require(bases[b] <= space, "data base overflows the address space");
  }
  const unsigned per_base =
      spec.distinct_bases ? (spec.loads_per_iter + spec.distinct_bases - 1) /
                                spec.distinct_bases
                          : 0;
  const std::int64_t max_disp = std::int64_t(per_base) * spec.disp_stride;
  require(max_disp < (std::int64_t{1} << (g.address_bits - 1)) &&
              -max_disp < (std::int64_t{1} << (g.address_bits - 1)),
          "displacements overflow the address space");

  // Fixed load/store slots, placed after evenly spread body fetches.
  std::mt19937_64 rng(spec.seed);
  struct Slot {
    unsigned after_fetch;
    MemRecord rec;
  };
  std::vector<Slot> slots;
  for (unsigned l = 0; l < spec.loads_per_iter; ++l) {
    const MemKind kind =
        chance(rng, spec.store_fraction) ? MemKind::store : MemKind::load;
    const unsigned after =
        static_cast<unsigned>(std::uint64_t{l} * spec.body_fetches /
                              spec.loads_per_iter);
    const std::int64_t disp =
        std::int64_t(l / spec.distinct_bases) * spec.disp_stride;
    slots.push_back({after, MemRecord{kind, bases[l % spec.distinct_bases], disp}});
  }

  const std::int64_t back =
      -std::int64_t(spec.body_fetches - 1) * std::int64_t(stride);
  for (std::uint64_t it = 0; it < spec.iterations; ++it) {
    std::size_t s = 0;
    for (unsigned k = 0; k < spec.body_fetches; ++k) {
      FetchRecord f;
      f.pc = spec.code_base + Addr{k} * stride;
      const bool last = k + 1 == spec.body_fetches;
      if (last && it + 1 < spec.iterations)
        f.transfer = Transfer::branch(back);
      out.emplace_back(f);
      while (s < slots.size() && slots[s].after_fetch == k)
        out.emplace_back(slots[s++].rec);
    }
  }
  return out;
}

std::vector<TraceRecord> gen_random(const RandomSpec& spec,
                                    const CacheGeometry& g) {
  std::vector<TraceRecord> out;
  if (spec.n == 0) return out;
  const Addr stride = g.instr_stride_bytes;
  const Addr space = g.address_mask();
  require(spec.pc_lo < spec.pc_hi && spec.pc_hi - 1 <= space,
          "pc range must be non-empty and inside the address space");
  require(spec.pc_hi - spec.pc_lo >= 2 * stride, "pc range too small");
  require(spec.pc_lo % stride == 0, "pc range must be stride aligned");
  require(spec.data_lo < spec.data_hi && spec.data_hi - 1 <= space,
          "data range must be non-empty and inside the address space");
  require(spec.base_pool >= 1, "base pool must be non-empty");

  std::mt19937_64 rng(spec.seed);
  auto aligned = [&](Addr lo, Addr hi, Addr align) {
    const Addr first = (lo + align - 1) / align * align;
    return first + below(rng, (hi - first) / align) * align;
  };
  auto in_code = [&](Addr a) {
    return a >= spec.pc_lo && a + stride <= spec.pc_hi;
  };

  std::vector<Addr> pool(spec.base_pool);
  for (auto& b : pool) b = aligned(spec.data_lo, spec.data_hi, 4);

  const std::int64_t window = std::int64_t{1} << g.low_bits();
  std::vector<Addr> returns;
  Addr pc = aligned(spec.pc_lo, spec.pc_hi - stride, stride);

  while (out.size() < spec.n) {
    if (chance(rng, spec.mem_fraction)) {
      MemRecord m;
      m.kind = chance(rng, spec.store_fraction) ? MemKind::store : MemKind::load;
      m.base = pool[below(rng, pool.size())];
      if (chance(rng, spec.far_disp_prob)) {
        // Just outside the prediction window, or far beyond it.
        switch (below(rng, 4)) {
          case 0: m.disp = window; break;
          case 1: m.disp = -window - 4; break;
          default:
            m.disp = (window + std::int64_t(below(rng, 64)) * 4) *
                     (chance(rng, 0.5) ? 1 : -1);
        }
      } else {
        const std::int64_t span = spec.max_small_disp / 4;
        m.disp = (std::int64_t(below(rng, 2 * span + 1)) - span) * 4;
      }
      out.emplace_back(m);
      continue;
    }

    FetchRecord f;
    f.pc = pc;
    const Addr fall = pc + stride;
    if (chance(rng, spec.link_prob)) {
      if (!returns.empty() && chance(rng, 0.5)) {
        f.transfer = Transfer::link(returns.back());
        returns.pop_back();
      } else {
        f.transfer =
            Transfer::link(aligned(spec.pc_lo, spec.pc_hi - stride, stride));
        if (in_code(fall)) returns.push_back(fall);
        if (returns.size() > 16) returns.erase(returns.begin());
      }
    } else if (chance(rng, spec.branch_prob)) {
      std::int64_t disp = 0;
      if (chance(rng, spec.far_branch_prob)) {
        disp = (window + std::int64_t(below(rng, 256)) * std::int64_t(stride)) *
               (chance(rng, 0.5) ? 1 : -1);
      } else {
        const std::int64_t span = spec.max_branch / std::int64_t(stride);
        disp = (std::int64_t(below(rng, 2 * span + 1)) - span) *
               std::int64_t(stride);
      }
      if (!in_code(pc + static_cast<Addr>(disp))) disp = -disp;
      if (!in_code(pc + static_cast<Addr>(disp))) disp = 0;
      // A taken branch to the next address is plain fallthrough.
      f.transfer = disp == std::int64_t(stride) ? Transfer::fallthrough()
                                                : Transfer::branch(disp);
      if (disp == std::int64_t(stride) && !in_code(fall))
        f.transfer = Transfer::link(spec.pc_lo);
    } else if (!in_code(fall)) {
      f.transfer = Transfer::link(spec.pc_lo);
    }
    out.emplace_back(f);
    pc = next_pc(f, g);
  }
  return out;
}

std::optional<std::size_t> first_inconsistent_fetch(
    std::span<const TraceRecord> records, const CacheGeometry& g) {
  std::optional<FetchRecord> prev;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto* f = std::get_if<FetchRecord>(&records[i]);
    if (!f) continue;
    if (prev && next_pc(*prev, g) != (f->pc & g.address_mask())) return i;
    prev = *f;
  }
  return std::nullopt;
}

}  // namespace wmemo
