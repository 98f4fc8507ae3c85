#include "wmemo/config.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace wmemo {

using nlohmann::json;

namespace {

// Reads members of one JSON object and rejects anything left unread.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <typename T>
  bool read(const std::string& key, T& out) {
    const json* v = find(key);
    if (!v) return false;
    try {
      out = v->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
    return true;
  }

  unsigned read_count(const std::string& key, unsigned fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer() || v->get<std::int64_t>() < 0)
      throw ConfigError(where_ + "." + key + ": expected a non-negative integer");
    return v->get<unsigned>();
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::vector<unsigned> unsigned_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<unsigned> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
      throw ConfigError(where + ": entries must be positive integers");
    out.push_back(v.get<unsigned>());
  }
  return out;
}

CacheGeometry geometry_from_json(const json& j) {
  ObjectReader r(j, "geometry");
  CacheGeometry d;
  const unsigned address_bits = r.read_count("address_bits", d.address_bits);
  const unsigned offset_bits = r.read_count("offset_bits", d.offset_bits);
  const unsigned index_bits = r.read_count("index_bits", d.index_bits);
  const unsigned ways = r.read_count("ways", d.ways);
  const unsigned stride = r.read_count("instr_stride_bytes", d.instr_stride_bytes);
  CacheGeometry g;
  try {
    g = CacheGeometry::from_widths(address_bits, offset_bits, index_bits, ways,
                                   stride);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  // Derived fields may be restated; they must agree.
  auto check = [&](const char* key, unsigned expect) {
    if (r.read_count(key, expect) != expect)
      throw ConfigError(std::string("geometry.") + key + " must be " +
                        std::to_string(expect) + " for the given widths");
  };
  check("tag_bits", g.tag_bits);
  check("line_bytes", g.line_bytes);
  check("sets", g.sets);
  r.done();
  return g;
}

MabConfig mab_from_json(const json& j, const std::string& where, MabConfig m) {
  ObjectReader r(j, where);
  m.n_tag_rows = r.read_count("n_tag_rows", m.n_tag_rows);
  m.n_index_cols = r.read_count("n_index_cols", m.n_index_cols);
  r.read("precise_invalidation", m.precise_invalidation);
  r.done();
  return m;
}

EnergyParams energy_from_json(const json& j, const std::string& where,
                              bool& p_mab_explicit) {
  ObjectReader r(j, where);
  EnergyParams p;
  r.read("e_way", p.e_way);
  r.read("e_tag", p.e_tag);
  const bool a = r.read("p_mab_active", p.p_mab_active);
  const bool s = r.read("p_mab_sleep", p.p_mab_sleep);
  if (a != s)
    throw ConfigError(where + ": give both p_mab_active and p_mab_sleep or neither");
  p_mab_explicit = a;
  r.read("clock_hz", p.clock_hz);
  r.read("cycles_per_access", p.cycles_per_access);
  r.done();
  return p;
}

MabPowerTable power_table_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("mab_power_table: expected an array");
  MabPowerTable t;
  for (const auto& e : j) {
    ObjectReader r(e, "mab_power_table[]");
    const unsigned n1 = r.read_count("n1", 0);
    const unsigned n2 = r.read_count("n2", 0);
    double active_mw = -1, sleep_mw = -1;
    r.read("active_mw", active_mw);
    r.read("sleep_mw", sleep_mw);
    r.done();
    if (n1 == 0 || n2 == 0 || active_mw < 0 || sleep_mw < 0)
      throw ConfigError(
          "mab_power_table entries need n1, n2, active_mw and sleep_mw");
    t[{n1, n2}] = MabPower{active_mw * 1e-3, sleep_mw * 1e-3};
  }
  return t;
}

CacheSide side_from_string(const std::string& s) {
  if (s == "dcache" || s == "d") return CacheSide::dcache;
  if (s == "icache" || s == "i") return CacheSide::icache;
  throw ConfigError("cache side must be dcache or icache, got '" + s + "'");
}

}  // namespace

GeneratorSpec generator_from_json(const json& j) {
  ObjectReader r(j, "trace.generator");
  std::string kind;
  if (!r.read("kind", kind)) throw ConfigError("trace.generator.kind is required");
  if (kind == "loop") {
    LoopSpec s;
    r.read("iterations", s.iterations);
    s.body_fetches = r.read_count("body_fetches", s.body_fetches);
    s.loads_per_iter = r.read_count("loads_per_iter", s.loads_per_iter);
    s.distinct_bases = r.read_count("distinct_bases", s.distinct_bases);
    r.read("disp_stride", s.disp_stride);
    r.read("store_fraction", s.store_fraction);
    r.read("code_base", s.code_base);
    r.read("data_base", s.data_base);
    r.read("base_spacing", s.base_spacing);
    r.done();
    return s;
  }
  if (kind == "random") {
    RandomSpec s;
    r.read("n", s.n);
    r.read("pc_lo", s.pc_lo);
    r.read("pc_hi", s.pc_hi);
    r.read("data_lo", s.data_lo);
    r.read("data_hi", s.data_hi);
    s.base_pool = r.read_count("base_pool", s.base_pool);
    r.read("max_small_disp", s.max_small_disp);
    r.read("max_branch", s.max_branch);
    r.read("mem_fraction", s.mem_fraction);
    r.read("store_fraction", s.store_fraction);
    r.read("far_disp_prob", s.far_disp_prob);
    r.read("branch_prob", s.branch_prob);
    r.read("far_branch_prob", s.far_branch_prob);
    r.read("link_prob", s.link_prob);
    r.done();
    return s;
  }
  throw ConfigError("trace.generator.kind must be loop or random, got '" + kind + "'");
}

std::vector<LaneSpec> default_run_lanes() {
  return {*lane_from_name("baseline"), *lane_from_name("intra_only"),
          *lane_from_name("full_mab")};
}

std::vector<LaneSpec> default_check_lanes() {
  auto l = default_run_lanes();
  l.push_back(*lane_from_name("full_mab_lazy"));
  return l;
}

std::vector<LaneSpec> run_lanes(const RunConfig& cfg) {
  std::vector<LaneSpec> l = cfg.lanes.empty() ? default_run_lanes() : cfg.lanes;
  const bool has_baseline = std::any_of(l.begin(), l.end(), [](const LaneSpec& x) {
    return x.mode == SimMode::baseline;
  });
  if (!has_baseline) l.insert(l.begin(), *lane_from_name("baseline"));
  return l;
}

std::vector<LaneSpec> check_lanes(const RunConfig& cfg) {
  return cfg.lanes.empty() ? default_check_lanes() : cfg.lanes;
}

std::vector<LaneSpec> parse_lane_list(const std::string& csv) {
  std::vector<LaneSpec> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto lane = lane_from_name(item);
    if (!lane)
      throw ConfigError("unknown mode '" + item +
                        "' (expected baseline, intra_only, full_mab, full_mab_lazy)");
    for (const auto& l : out)
      if (l.name == lane->name) throw ConfigError("mode '" + item + "' listed twice");
    out.push_back(*lane);
  }
  if (out.empty()) throw ConfigError("mode list is empty");
  return out;
}

std::vector<unsigned> parse_unsigned_list(const std::string& csv) {
  std::vector<unsigned> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<unsigned>(v));
    } catch (const std::exception&) {
      throw ConfigError("expected a positive integer list, got '" + csv + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  ObjectReader r(j, "config");
  if (const json* v = r.find("geometry")) c.sim.geometry = geometry_from_json(*v);
  if (const json* v = r.find("dcache_mab"))
    c.sim.dmab = mab_from_json(*v, "dcache_mab", c.sim.dmab);
  if (const json* v = r.find("icache_mab"))
    c.sim.imab = mab_from_json(*v, "icache_mab", c.sim.imab);
  if (const json* v = r.find("refill")) {
    ObjectReader rr(*v, "refill");
    c.sim.refill.tag_writes = rr.read_count("tag_writes", c.sim.refill.tag_writes);
    c.sim.refill.way_writes = rr.read_count("way_writes", c.sim.refill.way_writes);
    rr.done();
  }
  r.read("write_allocate", c.sim.write_allocate);
  if (const json* v = r.find("modes")) {
    if (!v->is_array()) throw ConfigError("modes: expected an array of names");
    std::string csv;
    for (const auto& m : *v) {
      if (!m.is_string()) throw ConfigError("modes: expected strings");
      csv += m.get<std::string>() + ",";
    }
    c.lanes = parse_lane_list(csv);
  }
  if (const json* v = r.find("energy")) {
    ObjectReader er(*v, "energy");
    if (const json* d = er.find("dcache"))
      c.dcache_energy = energy_from_json(*d, "energy.dcache", c.dcache_p_mab_explicit);
    if (const json* i = er.find("icache"))
      c.icache_energy = energy_from_json(*i, "energy.icache", c.icache_p_mab_explicit);
    er.done();
  }
  if (const json* v = r.find("mab_power_table"))
    c.power_table = power_table_from_json(*v);
  if (const json* v = r.find("trace")) {
    ObjectReader tr(*v, "trace");
    std::string path;
    if (tr.read("path", path)) c.trace_path = path;
    if (const json* g = tr.find("generator")) c.generator = generator_from_json(*g);
    tr.done();
    if (c.trace_path && c.generator)
      throw ConfigError("trace: give either path or generator, not both");
  }
  r.read("seed", c.seed);
  if (const json* v = r.find("output")) {
    ObjectReader orr(*v, "output");
    std::string path;
    if (orr.read("path", path)) c.out_path = path;
    orr.read("format", c.format);
    orr.done();
  }
  if (const json* v = r.find("sweep")) {
    ObjectReader sr(*v, "sweep");
    if (const json* n1 = sr.find("n1")) c.sweep_n1 = unsigned_list(*n1, "sweep.n1");
    if (const json* n2 = sr.find("n2")) c.sweep_n2 = unsigned_list(*n2, "sweep.n2");
    std::string side;
    if (sr.read("cache", side)) c.sweep_side = side_from_string(side);
    c.sweep_threads = sr.read_count("threads", c.sweep_threads);
    sr.done();
  }
  r.done();
  c.validate();
  return c;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

EnergyParams RunConfig::energy_for(CacheSide side) const {
  const MabConfig& m = side == CacheSide::dcache ? sim.dmab : sim.imab;
  return energy_for(side, m.n_tag_rows, m.n_index_cols);
}

EnergyParams RunConfig::energy_for(CacheSide side, unsigned n1,
                                   unsigned n2) const {
  EnergyParams e = side == CacheSide::dcache ? dcache_energy : icache_energy;
  const bool explicit_p =
      side == CacheSide::dcache ? dcache_p_mab_explicit : icache_p_mab_explicit;
  if (!explicit_p) {
    if (auto p = lookup_mab_power(power_table, n1, n2)) {
      e.p_mab_active = p->active;
      e.p_mab_sleep = p->sleep;
    }
  }
  return e;
}

void RunConfig::validate() const {
  try {
    sim.validate();
    icache_energy.validate();
    dcache_energy.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (format != "json" && format != "csv")
    throw ConfigError("output format must be json or csv, got '" + format + "'");
  if (sweep_n1.empty() || sweep_n2.empty())
    throw ConfigError("sweep lists must be non-empty");
}

}  // namespace wmemo
