// Runs the installed-layout `wmemo` binary end to end.
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wmemo_cli_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Invocation wmemo(const std::string& args) {
    const fs::path out = dir_ / "stdout", err = dir_ / "stderr";
    const std::string cmd = std::string(WMEMO_CLI) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int st = std::system(cmd.c_str());
    Invocation r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path file(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  std::string config() const { return std::string(WMEMO_SOURCE_DIR) + "/configs/default.jsonc"; }
  std::string bundled() const { return std::string(WMEMO_SOURCE_DIR) + "/traces/loop.trace"; }

  fs::path dir_;
};

TEST_F(Cli, RunDefaultConfigOnBundledTrace) {
  const Invocation r = wmemo("--config " + config() + " run --trace " + bundled());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  for (const char* k : {"geometry", "modes", "counters", "power", "reductions", "violations"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_GT(j["reductions"]["full_mab"]["dcache_tag_reads"].get<double>(), 0.0);
  EXPECT_GT(j["reductions"]["full_mab"]["icache_tag_reads"].get<double>(), 0.0);
}

TEST_F(Cli, BaselineOnlyReportsZeroMabFields) {
  const Invocation r = wmemo("run --modes baseline --trace " + bundled());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["modes"].size(), 1u);
  for (const char* side : {"icache", "dcache"}) {
    const auto& c = j["counters"]["baseline"][side];
    EXPECT_EQ(c["mab_hits"].get<std::uint64_t>(), 0u);
    EXPECT_EQ(c["mab_misses"].get<std::uint64_t>(), 0u);
    EXPECT_EQ(j["power"]["baseline"][side]["mab_energy"].get<double>(), 0.0);
  }
}

TEST_F(Cli, MissingTraceIsIoError) {
  const Invocation r = wmemo("run --trace " + (dir_ / "absent.trace").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("absent.trace"), std::string::npos);
  EXPECT_EQ(wmemo("--config " + (dir_ / "absent.jsonc").string() + " run").code, 2);
}

TEST_F(Cli, UnwritableOutputIsIoError) {
  const Invocation r = wmemo("--out " + (dir_ / "no/such/dir/r.json").string() +
                      " run --trace " + bundled());
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, ConfigErrors) {
  EXPECT_EQ(wmemo("--config " + file("bad.json", "{\"geometry\": {\"ways\": 0}}").string() +
                  " run --trace " + bundled()).code, 1);
  EXPECT_EQ(wmemo("--config " + file("typo.json", "{\"geomtry\": {}}").string() + " run").code, 1);
  EXPECT_EQ(wmemo("run --modes warp --trace " + bundled()).code, 1);
  EXPECT_EQ(wmemo("run").code, 1);  // no trace at all
  EXPECT_EQ(wmemo("frobnicate").code, 1);
  EXPECT_EQ(wmemo("--format xml run --trace " + bundled()).code, 1);
}

TEST_F(Cli, MalformedTraceReportsLine) {
  const auto p = file("bad.trace", "I 0x100 seq\nL 0x10 4\nL 0x10 x\n");
  const Invocation r = wmemo("run --trace " + p.string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

  const auto q = file("jump.trace", "# header\nI 0x100 seq\nI 0x200 seq\n");
  const Invocation s = wmemo("check --trace " + q.string());
  EXPECT_EQ(s.code, 3);
  EXPECT_NE(s.err.find("line 3"), std::string::npos) << s.err;
}

TEST_F(Cli, GenLoopCountsAndDeterminism) {
  const Invocation a = wmemo("--seed 7 gen loop --iters 1000 --body 8 --loads 2");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 1000 * (8 + 2));
  EXPECT_TRUE(wmemo("--seed 7 gen loop --iters 1000 --body 8 --loads 2").out == a.out);
  EXPECT_TRUE(wmemo("--seed 7 gen random -n 2000").out == wmemo("--seed 7 gen random -n 2000").out);
  EXPECT_TRUE(wmemo("--seed 7 gen random -n 2000").out != wmemo("--seed 8 gen random -n 2000").out);

  const auto p = dir_ / "g.trace";
  ASSERT_EQ(wmemo("--seed 7 --out " + p.string() + " gen loop --iters 1000 --body 8 --loads 2").code, 0);
  EXPECT_TRUE(slurp(p) == a.out);
  EXPECT_EQ(wmemo("run --trace " + p.string()).code, 0);
}

TEST_F(Cli, GenEmptyAndBadSpec) {
  const Invocation r = wmemo("gen loop --iters 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(wmemo("gen loop --body 0").code, 1);
  EXPECT_EQ(wmemo("gen").code, 1);
  const Invocation n = wmemo("gen random -n 500");
  EXPECT_EQ(std::count(n.out.begin(), n.out.end(), '\n'), 500);
}

TEST_F(Cli, RunIsByteIdenticalAcrossInvocations) {
  const auto args = "--config " + config() + " --seed 3 run";
  const Invocation a = wmemo(args), b = wmemo(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_TRUE(a.out == b.out);
}

TEST_F(Cli, CheckPassesOnPreciseRandomTraces) {
  const auto p = dir_ / "r.trace";
  ASSERT_EQ(wmemo("--seed 11 --out " + p.string() + " gen random -n 20000").code, 0);
  const Invocation r = wmemo("check --trace " + p.string());
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["audit"]["ok"].get<bool>());
  EXPECT_TRUE(j["audit"].contains("lazy_invalidation_warning"));
}

TEST_F(Cli, CheckFailsOnInjectedFaultAndListsSteps) {
  const Invocation r = wmemo("check --inject-fault 25 --trace " + bundled());
  EXPECT_NE(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_FALSE(j["violations"].empty());
  EXPECT_EQ(j["violations"][0]["step"].get<std::uint64_t>(), 25u);
  EXPECT_EQ(j["violations"][0]["kind"].get<std::string>(), "transparency");
}

TEST_F(Cli, CheckLazyInvalidationFindingWarnsButPasses) {
  // Bypassed loads evict a line memoized in the most recent tag row.
  const auto p = file("lazy.trace",
                      "L 0x4000 0\nL 0x140e0 0\nL 0x4000 0\n"
                      "L 0x0 32768\nL 0x4000 32768\nL 0x4000 0\n");
  const Invocation r = wmemo("check --trace " + p.string());
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["audit"]["lazy_invalidation_warning"].get<bool>());
  EXPECT_GE(j["audit"]["stale_mab"].get<std::uint64_t>(), 1u);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(Cli, SweepGridShapeOrderAndTablePower) {
  const Invocation r = wmemo("sweep --n1 1,2 --n2 4,8,16,32 --trace " + bundled());
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n1,n2,tag_reads,way_accesses,mab_hits,total_energy,avg_power");
  std::vector<std::pair<int, int>> order;
  std::vector<double> energy;
  while (std::getline(in, line)) {
    int n1 = 0, n2 = 0;
    unsigned long long tags = 0, ways = 0, hits = 0;
    double e = 0, pw = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%d,%d,%llu,%llu,%llu,%lf,%lf", &n1, &n2,
                          &tags, &ways, &hits, &e, &pw), 7) << line;
    order.emplace_back(n1, n2);
    energy.push_back(e);
  }
  const std::vector<std::pair<int, int>> want{{1, 4}, {1, 8}, {1, 16}, {1, 32},
                                              {2, 4}, {2, 8}, {2, 16}, {2, 32}};
  EXPECT_EQ(order, want);
  // Bigger MABs draw more power on a trace every shape memoizes equally well.
  for (std::size_t i = 1; i < 4; ++i) {
    EXPECT_GT(energy[i], energy[i - 1]);
    EXPECT_GT(energy[i + 4], energy[i + 3]);
  }
  const Invocation j = wmemo("--format json sweep --n1 1 --n2 4 --trace " + bundled());
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out).size(), 1u);
}

}  // namespace
