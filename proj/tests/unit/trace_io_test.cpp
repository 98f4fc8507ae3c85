#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "wmemo/trace_io.hpp"

namespace wmemo {
namespace {

const CacheGeometry kG;

TEST(ParseLine, Records) {
  EXPECT_EQ(parse_line("L 0x1000 8", 1), TraceRecord(MemRecord{MemKind::load, 0x1000, 8}));
  EXPECT_EQ(parse_line("S 0x20 -4", 1), TraceRecord(MemRecord{MemKind::store, 0x20, -4}));
  EXPECT_EQ(parse_line("L 0x20 +12", 1), TraceRecord(MemRecord{MemKind::load, 0x20, 12}));
  EXPECT_EQ(parse_line("I 0x100 seq", 1),
            TraceRecord(FetchRecord{0x100, Transfer::fallthrough()}));
  EXPECT_EQ(parse_line("I 0x104 br -8", 1),
            TraceRecord(FetchRecord{0x104, Transfer::branch(-8)}));
  EXPECT_EQ(parse_line("I 0x108 lnk 0x2000", 1),
            TraceRecord(FetchRecord{0x108, Transfer::link(0x2000)}));
  EXPECT_EQ(parse_line("  \t", 1), std::nullopt);
  EXPECT_EQ(parse_line("# comment", 1), std::nullopt);
  EXPECT_EQ(parse_line("", 1), std::nullopt);
}

struct BadLine {
  const char* text;
  std::size_t column;
};

class ParseErrors : public ::testing::TestWithParam<BadLine> {};

TEST_P(ParseErrors, ReportLineAndColumn) {
  try {
    parse_line(GetParam().text, 42);
    FAIL() << "accepted: " << GetParam().text;
  } catch (const TraceParseError& e) {
    EXPECT_EQ(e.line(), 42u);
    EXPECT_EQ(e.column(), GetParam().column) << e.what();
  }
}

INSTANTIATE_TEST_SUITE_P(
    Cases, ParseErrors,
    ::testing::Values(BadLine{"X 0x10 4", 1}, BadLine{"L 1000 4", 3},
                      BadLine{"L 0x10 four", 8}, BadLine{"L 0x10", 7},
                      BadLine{"L 0x10 4 5", 10}, BadLine{"I 0x10 jmp", 8},
                      BadLine{"I 0x10 br", 10}, BadLine{"I 0x10 seq 4", 12},
                      BadLine{"L 0x100000000 0", 3}, BadLine{"L 0xZZ 0", 3},
                      BadLine{"L 0x10 4294967296", 8}));

TEST(ParseTrace, CountsLinesAndRecordsPositions) {
  std::istringstream in("# header\nI 0x100 seq\n\nL 0x10 4\n");
  std::vector<std::size_t> lines;
  const auto t = parse_trace(in, 32, &lines);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(lines, (std::vector<std::size_t>{2, 4}));
  try {
    parse_trace("I 0x100 seq\nL 0x10 4\nQ\n");
    FAIL();
  } catch (const TraceParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(EmitTrace, Format) {
  const std::vector<TraceRecord> t{
      FetchRecord{0x100, Transfer::fallthrough()},
      FetchRecord{0x104, Transfer::branch(-4)},
      MemRecord{MemKind::store, 0xABC, 16},
      FetchRecord{0x100, Transfer::link(0x2000)}};
  EXPECT_EQ(emit_trace(t),
            "I 0x100 seq\nI 0x104 br -4\nS 0xabc 16\nI 0x100 lnk 0x2000\n");
}

TEST(EmitTrace, RoundTripsRandomRecords) {
  std::mt19937_64 rng(5);
  std::vector<TraceRecord> t;
  for (int i = 0; i < 20000; ++i) {
    const Addr a = rng() & 0xFFFFFFFFu;
    const std::int64_t d = std::int64_t(rng() % 0x1FFFFFFFFull) - 0xFFFFFFFFll;
    switch (rng() % 5) {
      case 0: t.push_back(MemRecord{MemKind::load, a, d}); break;
      case 1: t.push_back(MemRecord{MemKind::store, a, d}); break;
      case 2: t.push_back(FetchRecord{a, Transfer::fallthrough()}); break;
      case 3: t.push_back(FetchRecord{a, Transfer::branch(d)}); break;
      default: t.push_back(FetchRecord{a, Transfer::link(rng() & 0xFFFFFFFFu)});
    }
  }
  EXPECT_EQ(parse_trace(emit_trace(t)), t);
}

std::size_t count_fetches(const std::vector<TraceRecord>& t) {
  std::size_t n = 0;
  for (const auto& r : t) n += std::holds_alternative<FetchRecord>(r);
  return n;
}

TEST(GenLoop, SingleIterationSingleFetch) {
  LoopSpec s;
  s.iterations = 1;
  s.body_fetches = 1;
  s.loads_per_iter = 1;
  const auto t = gen_loop(s, kG);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(count_fetches(t), 1u);
  EXPECT_TRUE(fetch_stream_consistent(t, kG));
}

TEST(GenLoop, ShapeOfDefaultLoop) {
  LoopSpec s;
  s.iterations = 10;
  const auto t = gen_loop(s, kG);
  EXPECT_EQ(t.size(), 10u * (16 + 4));
  EXPECT_EQ(count_fetches(t), 160u);
  EXPECT_TRUE(fetch_stream_consistent(t, kG));
  // The back-branch leaves the last line of the body.
  ICachePath ic{kG, MabConfig{2, 16, true}, IMode::baseline};
  std::uint64_t back = 0;
  for (const auto& r : t)
    if (const auto* f = std::get_if<FetchRecord>(&r)) {
      if (f->transfer.kind == Transfer::Kind::branch) ++back;
      ic.fetch(*f);
    }
  EXPECT_EQ(back, 9u);
  EXPECT_EQ(ic.counters().flow[std::size_t(FlowClass::inter_nonseq)], 9u);
  // All displacements fit the narrow adder.
  for (const auto& r : t)
    if (const auto* m = std::get_if<MemRecord>(&r))
      EXPECT_TRUE(predict(m->base, m->disp, kG).in_range);
}

TEST(GenLoop, EmptyAndDeterministic) {
  LoopSpec s;
  s.iterations = 0;
  EXPECT_TRUE(gen_loop(s, kG).empty());
  s.iterations = 50;
  EXPECT_EQ(gen_loop(s, kG), gen_loop(s, kG));
  auto s2 = s;
  s2.seed = 2;
  EXPECT_NE(gen_loop(s, kG), gen_loop(s2, kG));
}

TEST(GenRandom, SizeDeterminismAndConsistency) {
  RandomSpec s;
  s.n = 0;
  EXPECT_TRUE(gen_random(s, kG).empty());
  s.n = 30000;
  const auto a = gen_random(s, kG);
  EXPECT_EQ(a.size(), 30000u);
  EXPECT_EQ(a, gen_random(s, kG));
  EXPECT_TRUE(fetch_stream_consistent(a, kG));
  s.seed = 9;
  EXPECT_NE(a, gen_random(s, kG));
}

TEST(GenRandom, CoversWindowEdges) {
  RandomSpec s;
  s.n = 100000;
  const auto t = gen_random(s, kG);
  const std::int64_t w = std::int64_t{1} << kG.low_bits();
  bool at_edge = false, beyond = false, link = false;
  for (const auto& r : t) {
    if (const auto* m = std::get_if<MemRecord>(&r)) {
      at_edge |= m->disp == w;
      beyond |= m->disp < -w;
    } else {
      link |= std::get<FetchRecord>(r).transfer.kind == Transfer::Kind::link;
    }
  }
  EXPECT_TRUE(at_edge);
  EXPECT_TRUE(beyond);
  EXPECT_TRUE(link);
}

TEST(FirstInconsistentFetch, FindsBreak) {
  const std::vector<TraceRecord> t{
      FetchRecord{0x100, Transfer::fallthrough()},
      MemRecord{MemKind::load, 0x10, 0},
      FetchRecord{0x104, Transfer::branch(0x20)},
      FetchRecord{0x128, Transfer::fallthrough()}};
  EXPECT_EQ(first_inconsistent_fetch(t, kG), 3u);
  EXPECT_EQ(first_inconsistent_fetch(std::span(t).first(3), kG), std::nullopt);
}

}  // namespace
}  // namespace wmemo
