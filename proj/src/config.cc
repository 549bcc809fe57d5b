#include "symtop/config.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "symtop/report_io.h"

namespace symtop {

namespace {

constexpr std::array<const char*, 6> kTasks = {"verify-quantum", "verify-classical", "simulate",
                                              "restricted-sk",  "three-wave",       "resonance-report"};

int line_at(const std::string& text, std::size_t pos) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(std::min(pos, text.size())), '\n'));
}

class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    const int line = locate(path);
    std::ostringstream os;
    os << source_;
    if (line > 0) os << ":" << line;
    os << ": field '" << path << "': " << what;
    throw ConfigError(os.str(), line, path);
  }

  void only_keys(const nlohmann::json& obj, const std::string& path, std::set<std::string> allowed) const {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) fail(join(path, key), "unknown key");
    }
  }

  double number(const nlohmann::json& obj, const std::string& path, const std::string& key, double fallback,
                bool required = false) const {
    const auto full = join(path, key);
    if (!obj.contains(key)) {
      if (required) fail(full, "missing");
      return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(full, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(full, "must be finite");
    return d;
  }

  long long integer(const nlohmann::json& obj, const std::string& path, const std::string& key, long long fallback,
                    long long lo, long long hi) const {
    const auto full = join(path, key);
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(full, "expected an integer");
    const long long x = v.is_number_unsigned() ? static_cast<long long>(std::min<std::uint64_t>(
                                                     v.get<std::uint64_t>(), std::numeric_limits<long long>::max()))
                                               : v.get<long long>();
    if (x < lo || x > hi) {
      fail(full, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return x;
  }

  bool boolean(const nlohmann::json& obj, const std::string& path, const std::string& key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) fail(join(path, key), "expected true or false");
    return obj.at(key).get<bool>();
  }

  std::string string(const nlohmann::json& obj, const std::string& path, const std::string& key,
                     const std::string& fallback, bool required = false) const {
    if (!obj.contains(key)) {
      if (required) fail(join(path, key), "missing");
      return fallback;
    }
    if (!obj.at(key).is_string()) fail(join(path, key), "expected a string");
    return obj.at(key).get<std::string>();
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  // Line of the last path component, found by scanning for each key in turn.
  int locate(const std::string& path) const {
    std::size_t pos = 0;
    std::stringstream ss(path);
    std::string part;
    bool found = false;
    while (std::getline(ss, part, '.')) {
      const auto at = text_.find("\"" + part + "\"", pos);
      if (at == std::string::npos) break;
      pos = at;
      found = true;
    }
    return found ? line_at(text_, pos) : 0;
  }

  const std::string& text_;
  std::string source_;
};

}  // namespace

ConfigError::ConfigError(const std::string& message, int line, std::string field)
    : std::runtime_error(message), line_(line), field_(std::move(field)) {}

bool is_known_task(const std::string& task) {
  return std::any_of(kTasks.begin(), kTasks.end(), [&](const char* t) { return task == t; });
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const int line = e.byte == 0 ? 0 : line_at(text, e.byte - 1);
    std::string what = e.what();
    if (const auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
    throw ConfigError(source + ":" + std::to_string(line) + ": " + what, line, "");
  }
  const Reader r(text, source);
  r.only_keys(doc, "", {"schema", "task", "inertia", "dipole", "J_max", "tolerances", "seed", "output", "params"});
  if (!doc.contains("schema")) r.fail("schema", "missing");
  if (r.integer(doc, "", "schema", 0, 0, 1000) != kConfigSchema) {
    r.fail("schema", "unsupported schema version, expected " + std::to_string(kConfigSchema));
  }

  ExperimentConfig cfg;
  cfg.task = r.string(doc, "", "task", "", true);
  if (!is_known_task(cfg.task)) r.fail("task", "unknown task '" + cfg.task + "'");

  if (!doc.contains("inertia")) r.fail("inertia", "missing");
  const auto& in = doc.at("inertia");
  r.only_keys(in, "inertia", {"I2", "I3", "resonance_exact"});
  const double i2 = r.number(in, "inertia", "I2", 0.0, true);
  const double i3 = r.number(in, "inertia", "I3", 0.0, true);
  if (!(i2 > 0.0)) r.fail("inertia.I2", "must be positive");
  if (!(i3 > 0.0)) r.fail("inertia.I3", "must be positive");
  cfg.inertia = Inertia(i2, i3, r.boolean(in, "inertia", "resonance_exact", true));

  if (!doc.contains("dipole")) r.fail("dipole", "missing");
  const auto& d = doc.at("dipole");
  r.only_keys(d, "dipole", {"d1", "d2", "d3"});
  const double d1 = r.number(d, "dipole", "d1", 0.0);
  const double d2 = r.number(d, "dipole", "d2", 0.0);
  const double d3 = r.number(d, "dipole", "d3", 0.0);
  if (d1 == 0.0 && d2 == 0.0 && d3 == 0.0) r.fail("dipole", "dipole must be nonzero");
  cfg.dipole = Dipole(d1, d2, d3);

  cfg.j_max = static_cast<int>(r.integer(doc, "", "J_max", cfg.j_max, 1, 12));
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    r.only_keys(t, "tolerances", {"rank", "closure", "unitarity"});
    for (auto [key, slot] : {std::pair{"rank", &cfg.tolerances.rank}, std::pair{"closure", &cfg.tolerances.closure},
                             std::pair{"unitarity", &cfg.tolerances.unitarity}}) {
      *slot = r.number(t, "tolerances", key, *slot);
      if (!(*slot > 0.0 && *slot < 1.0)) r.fail(std::string("tolerances.") + key, "must lie in (0, 1)");
    }
  }
  cfg.seed = static_cast<std::uint64_t>(r.integer(doc, "", "seed", 1, 0, std::numeric_limits<long long>::max()));
  cfg.output = r.string(doc, "", "output", cfg.output);

  if (doc.contains("params")) {
    const auto& p = doc.at("params");
    r.only_keys(p, "params",
                {"j", "k", "m", "max_block", "allow_large_blocks", "samples", "depth", "horizon", "step", "u_max",
                 "segments", "eps", "phases", "steps_per_period"});
    auto& tp = cfg.params;
    tp.j = static_cast<int>(r.integer(p, "params", "j", tp.j, 0, 12));
    tp.k = static_cast<int>(r.integer(p, "params", "k", tp.k, -12, 12));
    tp.m = static_cast<int>(r.integer(p, "params", "m", tp.m, -12, 12));
    tp.max_block = static_cast<int>(r.integer(p, "params", "max_block", tp.max_block, 0, 11));
    tp.allow_large_blocks = r.boolean(p, "params", "allow_large_blocks", tp.allow_large_blocks);
    tp.samples = static_cast<int>(r.integer(p, "params", "samples", tp.samples, 1, 10000000));
    tp.depth = static_cast<int>(r.integer(p, "params", "depth", tp.depth, 2, 4));
    tp.segments = static_cast<int>(r.integer(p, "params", "segments", tp.segments, 1, 100000));
    tp.phases = static_cast<int>(r.integer(p, "params", "phases", tp.phases, 1, 4096));
    tp.steps_per_period = static_cast<int>(r.integer(p, "params", "steps_per_period", tp.steps_per_period, 4, 100000));
    tp.horizon = r.number(p, "params", "horizon", tp.horizon);
    tp.step = r.number(p, "params", "step", tp.step);
    tp.u_max = r.number(p, "params", "u_max", tp.u_max);
    tp.eps = r.number(p, "params", "eps", tp.eps);
    if (!(tp.horizon > 0.0)) r.fail("params.horizon", "must be positive");
    if (!(tp.step > 0.0)) r.fail("params.step", "must be positive");
    if (!(tp.u_max >= 0.0)) r.fail("params.u_max", "must be non-negative");
    if (!(tp.eps > 0.0)) r.fail("params.eps", "must be positive");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(path.string() + ": cannot open file", 0, "");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path.string());
}

nlohmann::json ExperimentConfig::to_json() const {
  const auto& p = params;
  return {{"schema", kConfigSchema},
          {"task", task},
          {"inertia", {{"I2", inertia.i2}, {"I3", inertia.i3}, {"resonance_exact", inertia.resonance_exact}}},
          {"dipole", {{"d1", dipole.d1}, {"d2", dipole.d2}, {"d3", dipole.d3}}},
          {"J_max", j_max},
          {"tolerances",
           {{"rank", tolerances.rank}, {"closure", tolerances.closure}, {"unitarity", tolerances.unitarity}}},
          {"seed", seed},
          {"output", output},
          {"params",
           {{"j", p.j},
            {"k", p.k},
            {"m", p.m},
            {"max_block", p.max_block},
            {"allow_large_blocks", p.allow_large_blocks},
            {"samples", p.samples},
            {"depth", p.depth},
            {"horizon", p.horizon},
            {"step", p.step},
            {"u_max", p.u_max},
            {"segments", p.segments},
            {"eps", p.eps},
            {"phases", p.phases},
            {"steps_per_period", p.steps_per_period}}}};
}

std::string ExperimentConfig::hash() const {
  auto j = to_json();
  j.erase("output");
  return hex64(fnv1a(dump_json(j)));
}

}  // namespace symtop
