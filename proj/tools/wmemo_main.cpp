// wmemo: command-line front end for the way-memoization cache simulator.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "wmemo/config.hpp"
#include "wmemo/report.hpp"

namespace {

using namespace wmemo;

enum Exit : int {
  kOk = 0,
  kConfigError = 1,
  kIoError = 2,
  kTraceError = 3,
  kCheckFailed = 4,
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
  if (!path || *path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("error writing to stdout");
    return;
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + *path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("error writing '" + *path + "'");
}

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> trace;
  // Subcommand flags that override config values.
  std::optional<std::string> modes;
  std::optional<std::string> n1, n2, side;
  std::optional<unsigned> threads;
};

RunConfig load_config(const Globals& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) cfg = parse_config(read_file(g.config_path));
  if (g.seed) cfg.seed = *g.seed;
  if (g.out) cfg.out_path = *g.out;
  if (g.format) cfg.format = *g.format;
  if (g.trace) {
    cfg.trace_path = *g.trace;
    cfg.generator.reset();
  }
  if (g.modes) cfg.lanes = parse_lane_list(*g.modes);
  if (g.n1) cfg.sweep_n1 = parse_unsigned_list(*g.n1);
  if (g.n2) cfg.sweep_n2 = parse_unsigned_list(*g.n2);
  if (g.side) cfg.sweep_side = *g.side == "icache" ? CacheSide::icache : CacheSide::dcache;
  if (g.threads) cfg.sweep_threads = *g.threads;
  cfg.validate();
  return cfg;
}

std::vector<TraceRecord> generate(GeneratorSpec spec, std::uint64_t seed,
                                  const CacheGeometry& g) {
  return std::visit(
      [&](auto& s) -> std::vector<TraceRecord> {
        s.seed = seed;
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, LoopSpec>)
          return gen_loop(s, g);
        else
          return gen_random(s, g);
      },
      spec);
}

std::vector<TraceRecord> load_trace(const RunConfig& cfg) {
  const CacheGeometry& g = cfg.sim.geometry;
  if (cfg.generator) return generate(*cfg.generator, cfg.seed, g);
  if (!cfg.trace_path)
    throw ConfigError("no trace given: set trace.path or trace.generator, or pass --trace");
  std::ifstream in(*cfg.trace_path);
  if (!in) throw IoError("cannot open trace '" + *cfg.trace_path + "'");
  std::vector<std::size_t> lines;
  std::vector<TraceRecord> t;
  try {
    t = parse_trace(in, g.address_bits, &lines);
  } catch (const TraceParseError& e) {
    throw TraceError(*cfg.trace_path + ":" + e.what());
  }
  if (in.bad()) throw IoError("error reading trace '" + *cfg.trace_path + "'");
  if (const auto bad = first_inconsistent_fetch(t, g))
    throw TraceError(*cfg.trace_path + ":line " + std::to_string(lines[*bad]) +
                     ": fetch pc contradicts the previous fetch's control transfer");
  return t;
}

std::string render_report(const RunConfig& cfg, const AuditReport& audit) {
  if (cfg.format == "csv") return run_report_csv(cfg, audit);
  return build_run_report(cfg, audit).dump(2) + "\n";
}

int cmd_run(const Globals& g) {
  const RunConfig cfg = load_config(g);
  const auto trace = load_trace(cfg);
  const auto lanes = run_lanes(cfg);
  const AuditReport audit = differential_run(trace, cfg.sim, lanes);
  write_output(cfg.out_path, render_report(cfg, audit));
  return kOk;
}

int cmd_check(const Globals& g, std::optional<std::uint64_t> inject_at) {
  const RunConfig cfg = load_config(g);
  const auto trace = load_trace(cfg);
  const auto lanes = check_lanes(cfg);
  AuditOptions opts;
  opts.inject_fault_at = inject_at;
  const AuditReport audit = differential_run(trace, cfg.sim, lanes, opts);
  write_output(cfg.out_path, render_report(cfg, audit));
  std::cerr << "check: " << audit.steps << " steps, " << audit.gated_violations
            << " violations";
  if (audit.finding_violations > 0)
    std::cerr << ", " << audit.finding_violations
              << " lazy-invalidation findings (warning, not a failure)";
  std::cerr << "\n";
  return audit.ok() ? kOk : kCheckFailed;
}

int cmd_sweep(const Globals& g) {
  const RunConfig cfg = load_config(g);
  const auto trace = load_trace(cfg);
  SweepSpec spec;
  spec.n1_list = cfg.sweep_n1;
  spec.n2_list = cfg.sweep_n2;
  spec.side = cfg.sweep_side;
  spec.energy = cfg.energy_for(cfg.sweep_side);
  const bool explicit_p = cfg.sweep_side == CacheSide::dcache
                              ? cfg.dcache_p_mab_explicit
                              : cfg.icache_p_mab_explicit;
  if (!explicit_p) spec.power_table = cfg.power_table;
  spec.threads = cfg.sweep_threads;
  const auto cells = sweep(trace, cfg.sim, spec);
  // The grid is CSV unless JSON is asked for on the command line.
  if (g.format && *g.format == "json")
    write_output(cfg.out_path, sweep_json(cells).dump(2) + "\n");
  else
    write_output(cfg.out_path, sweep_csv(cells));
  return kOk;
}

struct GenFlags {
  std::string kind;
  std::optional<std::uint64_t> iters, n;
  std::optional<unsigned> body, loads, bases;
  std::optional<std::int64_t> stride;
  std::optional<double> store_frac, mem_frac;
};

int cmd_gen(const Globals& g, const GenFlags& f) {
  const RunConfig cfg = load_config(g);
  GeneratorSpec spec;
  if (f.kind == "loop") {
    LoopSpec s = cfg.generator && std::holds_alternative<LoopSpec>(*cfg.generator)
                     ? std::get<LoopSpec>(*cfg.generator)
                     : LoopSpec{};
    if (f.iters) s.iterations = *f.iters;
    if (f.body) s.body_fetches = *f.body;
    if (f.loads) s.loads_per_iter = *f.loads;
    if (f.bases) s.distinct_bases = *f.bases;
    if (f.stride) s.disp_stride = *f.stride;
    if (f.store_frac) s.store_fraction = *f.store_frac;
    spec = s;
  } else if (f.kind == "random") {
    RandomSpec s = cfg.generator && std::holds_alternative<RandomSpec>(*cfg.generator)
                       ? std::get<RandomSpec>(*cfg.generator)
                       : RandomSpec{};
    if (f.n) s.n = *f.n;
    if (f.mem_frac) s.mem_fraction = *f.mem_frac;
    if (f.store_frac) s.store_fraction = *f.store_frac;
    spec = s;
  } else if (cfg.generator) {
    spec = *cfg.generator;
  } else {
    throw ConfigError("gen needs a kind (loop or random) or a trace.generator in the config");
  }
  std::vector<TraceRecord> t;
  try {
    t = generate(spec, cfg.seed, cfg.sim.geometry);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad generator spec: ") + e.what());
  }
  write_output(cfg.out_path, emit_trace(t));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-driven set-associative cache simulator with MAB way memoization"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON config file (comments allowed)");
  app.add_option("--seed", g.seed, "Seed for trace generators");
  app.add_option("--out", g.out, "Output path ('-' or absent: stdout)");
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* run = app.add_subcommand("run", "Simulate a trace in every configured mode and report");
  auto* check = app.add_subcommand("check", "Differential audit: transparency, MAB consistency, dominance");
  auto* sw = app.add_subcommand("sweep", "Grid over MAB shapes (n1 tag rows x n2 index columns)");
  auto* gen = app.add_subcommand("gen", "Write a synthetic trace");

  for (auto* sc : {run, check, sw}) {
    sc->add_option("--trace", g.trace, "Trace file; overrides the config's trace section");
    sc->fallthrough();
  }
  std::optional<std::uint64_t> inject_at;
  check->add_option("--inject-fault", inject_at,
                    "Flip one lane's hit flag at this step (tests the audit itself)");

  run->add_option("--modes", g.modes, "Comma-separated lanes, e.g. baseline,full_mab");
  check->add_option("--modes", g.modes, "Comma-separated lanes to audit");
  sw->add_option("--n1", g.n1, "Tag-row counts, comma separated");
  sw->add_option("--n2", g.n2, "Index-column counts, comma separated");
  sw->add_option("--cache", g.side, "dcache or icache")->check(CLI::IsMember({"dcache", "icache"}));
  sw->add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  GenFlags gf;
  gen->fallthrough();
  gen->add_option("kind", gf.kind, "loop or random")->check(CLI::IsMember({"loop", "random"}));
  gen->add_option("--iters", gf.iters, "loop: iterations");
  gen->add_option("--body", gf.body, "loop: fetches per iteration");
  gen->add_option("--loads", gf.loads, "loop: memory ops per iteration");
  gen->add_option("--bases", gf.bases, "loop: distinct base registers");
  gen->add_option("--stride", gf.stride, "loop: displacement stride in bytes");
  gen->add_option("--store-frac", gf.store_frac, "fraction of memory ops that are stores");
  gen->add_option("-n", gf.n, "random: record count");
  gen->add_option("--mem-frac", gf.mem_frac, "random: fraction of memory records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(g);
    if (*check) return cmd_check(g, inject_at);
    if (*sw) return cmd_sweep(g);
    if (*gen) return cmd_gen(g, gf);
  } catch (const ConfigError& e) {
    std::cerr << "wmemo: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "wmemo: I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const TraceError& e) {
    std::cerr << "wmemo: trace error: " << e.what() << "\n";
    return kTraceError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "wmemo: config error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
