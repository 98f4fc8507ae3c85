#include <gtest/gtest.h>

#include "wmemo/config.hpp"
#include "wmemo/report.hpp"

namespace wmemo {
namespace {

TEST(Config, EmptyObjectGivesDefaults) {
  const RunConfig c = parse_config("{}");
  EXPECT_EQ(c.sim.geometry.tag_bits, 18u);
  EXPECT_EQ(c.sim.dmab.n_tag_rows, 2u);
  EXPECT_EQ(c.sim.dmab.n_index_cols, 8u);
  EXPECT_EQ(c.sim.imab.n_index_cols, 16u);
  EXPECT_TRUE(c.lanes.empty());
  EXPECT_EQ(run_lanes(c).size(), default_run_lanes().size());
  EXPECT_EQ(check_lanes(c).size(), default_check_lanes().size());
  EXPECT_EQ(c.format, "json");
  // p_mab follows the configured MAB shape unless given explicitly.
  EXPECT_DOUBLE_EQ(c.energy_for(CacheSide::dcache).p_mab_active, 3.07e-3);
  EXPECT_DOUBLE_EQ(c.energy_for(CacheSide::icache).p_mab_active, 4.56e-3);
}

TEST(Config, CommentsAndOverrides) {
  const RunConfig c = parse_config(R"({
    // narrower cache
    "geometry": {"address_bits": 32, "offset_bits": 4, "index_bits": 8, "ways": 4},
    "dcache_mab": {"n_tag_rows": 1, "n_index_cols": 4, "precise_invalidation": false},
    "energy": {"dcache": {"e_way": 1e-9, "p_mab_active": 0.01, "p_mab_sleep": 0.001}},
    "modes": ["baseline", "full_mab"],
    "trace": {"generator": {"kind": "loop", "iterations": 5}},
    "sweep": {"n1": [1], "n2": [4, 8], "cache": "i", "threads": 2}
  })");
  EXPECT_EQ(c.sim.geometry.ways, 4u);
  EXPECT_EQ(c.sim.geometry.tag_bits, 20u);
  EXPECT_EQ(c.sim.geometry.line_bytes, 16u);
  EXPECT_FALSE(c.sim.dmab.precise_invalidation);
  EXPECT_EQ(c.lanes.size(), 2u);
  EXPECT_DOUBLE_EQ(c.energy_for(CacheSide::dcache).e_way, 1e-9);
  EXPECT_DOUBLE_EQ(c.energy_for(CacheSide::dcache, 2, 32).p_mab_active, 0.01);
  ASSERT_TRUE(c.generator);
  EXPECT_EQ(std::get<LoopSpec>(*c.generator).iterations, 5u);
  EXPECT_EQ(c.sweep_side, CacheSide::icache);
  EXPECT_EQ(c.sweep_n2, (std::vector<unsigned>{4, 8}));
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config(R"({"bogus": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"geometry": {"ways": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"geometry": {"offset_bits": 30, "index_bits": 9}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"geometry": {"tag_bits": 3}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"modes": ["fast"]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"modes": []})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"dcache_mab": {"n_tag_rows": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"energy": {"dcache": {"p_mab_active": 1}}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"trace": {"path": "a", "generator": {"kind": "loop"}}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"trace": {"generator": {"kind": "zigzag"}}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"output": {"format": "xml"}})"), ConfigError);
}

TEST(Config, RunLanesAlwaysCarryBaseline) {
  const RunConfig c = parse_config(R"({"modes": ["full_mab"]})");
  const auto l = run_lanes(c);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0].mode, SimMode::baseline);
  EXPECT_EQ(check_lanes(c).size(), 1u);
}

TEST(Config, ListParsers) {
  EXPECT_EQ(parse_unsigned_list("1,2, 4"), (std::vector<unsigned>{1, 2, 4}));
  EXPECT_THROW(parse_unsigned_list("1,x"), ConfigError);
  EXPECT_THROW(parse_unsigned_list("0"), ConfigError);
  EXPECT_EQ(parse_lane_list("baseline,full_mab_lazy").size(), 2u);
  EXPECT_THROW(parse_lane_list("baseline,baseline"), ConfigError);
}

AuditReport run_loop(const RunConfig& cfg) {
  LoopSpec s;
  s.iterations = 100;
  const auto t = gen_loop(s, cfg.sim.geometry);
  const auto lanes = run_lanes(cfg);
  return differential_run(t, cfg.sim, lanes);
}

TEST(Report, SchemaKeysAndReductions) {
  RunConfig cfg = parse_config("{}");
  const auto audit = run_loop(cfg);
  const auto j = build_run_report(cfg, audit);
  for (const char* k : {"geometry", "modes", "counters", "power", "reductions",
                        "violations", "audit"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["modes"].size(), 3u);
  EXPECT_GT(j["reductions"]["full_mab"]["dcache_tag_reads"].get<double>(), 0.5);
  EXPECT_EQ(j["reductions"]["baseline"]["dcache_tag_reads"].get<double>(), 0.0);
  EXPECT_TRUE(j["audit"]["ok"].get<bool>());
  EXPECT_EQ(j["counters"]["baseline"]["dcache"]["mab_hits"].get<std::uint64_t>(), 0u);
}

TEST(Report, BaselineOnlyHasZeroedMabFields) {
  RunConfig cfg = parse_config(R"({"modes": ["baseline"]})");
  const auto j = build_run_report(cfg, run_loop(cfg));
  const auto& d = j["counters"]["baseline"]["dcache"];
  EXPECT_EQ(d["mab_hits"].get<std::uint64_t>(), 0u);
  EXPECT_EQ(d["bypasses"].get<std::uint64_t>(), 0u);
  EXPECT_EQ(j["power"]["baseline"]["dcache"]["mab_energy"].get<double>(), 0.0);
}

TEST(Report, CsvHasOneRowPerModeAndSide) {
  RunConfig cfg = parse_config("{}");
  const std::string csv = run_report_csv(cfg, run_loop(cfg));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 2);
}

TEST(Report, PowerStateFollowsMode) {
  EXPECT_EQ(mab_power_state(SimMode::baseline), MabPowerState::absent);
  EXPECT_EQ(mab_power_state(SimMode::intra_only), MabPowerState::sleep);
  EXPECT_EQ(mab_power_state(SimMode::full_mab), MabPowerState::active);
}

}  // namespace
}  // namespace wmemo
