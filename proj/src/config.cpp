#include "qotto/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qotto/errors.hpp"

namespace qotto {

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::cycle: return "cycle";
    case RunMode::sweep: return "sweep";
    case RunMode::optimize: return "optimize";
    case RunMode::montecarlo: return "montecarlo";
    case RunMode::control: return "control";
  }
  return "?";
}

RunMode run_mode_from_string(const std::string& s) {
  for (RunMode m : {RunMode::cycle, RunMode::sweep, RunMode::optimize, RunMode::montecarlo, RunMode::control})
    if (to_string(m) == s) return m;
  throw InvalidArgument("unknown mode '" + s + "' (cycle | sweep | optimize | montecarlo | control)");
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& text, int line, const std::string& key) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw ParseError(line, key, "expected a number, got '" + text + "'");
  return value;
}

double parse_double(const std::string& text, int line, const std::string& key) {
  const double v = parse_number<double>(text, line, key);
  if (!std::isfinite(v)) throw ParseError(line, key, "value must be finite");
  return v;
}

bool parse_bool(const std::string& text, int line, const std::string& key) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ParseError(line, key, "expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string to_string(OmegaLadder l) { return l == OmegaLadder::midpoint ? "midpoint" : "right_endpoint"; }

template <typename E>
E parse_enum(const std::string& text, int line, const std::string& key, std::initializer_list<E> options) {
  std::string names;
  for (E e : options) {
    if (to_string(e) == text) return e;
    names += (names.empty() ? "" : " | ") + to_string(e);
  }
  throw ParseError(line, key, "expected one of " + names + ", got '" + text + "'");
}

constexpr std::initializer_list<OmegaLadder> kLadders{OmegaLadder::midpoint, OmegaLadder::right_endpoint};
constexpr std::initializer_list<SweepVariable> kVariables{SweepVariable::cycle_time, SweepVariable::lambda,
                                                          SweepVariable::sigma, SweepVariable::coupling};
constexpr std::initializer_list<SweepObjective> kObjectives{SweepObjective::power, SweepObjective::entropy_production,
                                                            SweepObjective::w_friction};
constexpr std::initializer_list<SweepMode> kSweepModes{SweepMode::lindblad, SweepMode::noise};
constexpr std::initializer_list<NoiseDistribution> kDistributions{NoiseDistribution::uniform,
                                                                  NoiseDistribution::gaussian};
constexpr std::initializer_list<NoiseKind> kKinds{NoiseKind::segment_time, NoiseKind::frequency};
constexpr std::initializer_list<EnsembleMode> kEnsembles{EnsembleMode::restart, EnsembleMode::continuous};
constexpr std::initializer_list<RunMode> kRunModes{RunMode::cycle, RunMode::sweep, RunMode::optimize,
                                                   RunMode::montecarlo, RunMode::control};

using Setter = std::function<void(RunConfig&, const std::string&, int, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& key_table() {
  static const std::map<std::string, std::map<std::string, Setter>> table = [] {
    std::map<std::string, std::map<std::string, Setter>> t;
    auto engine = [](double EngineParams::*f) {
      return Setter([f](RunConfig& c, const std::string& v, int line, const std::string& key) {
        c.engine.*f = parse_double(v, line, key);
      });
    };
    t["engine"] = {
        {"J", engine(&EngineParams::coupling)},          {"omega_a", engine(&EngineParams::omega_a)},
        {"omega_b", engine(&EngineParams::omega_b)},     {"T_h", engine(&EngineParams::t_hot)},
        {"T_c", engine(&EngineParams::t_cold)},          {"Gamma_h", engine(&EngineParams::gamma_hot)},
        {"Gamma_c", engine(&EngineParams::gamma_cold)},  {"gamma_h", engine(&EngineParams::dephasing_hot)},
        {"gamma_c", engine(&EngineParams::dephasing_cold)}, {"Lambda_ab", engine(&EngineParams::lambda_ab)},
        {"Lambda_ba", engine(&EngineParams::lambda_ba)},
    };
    auto schedule = [](double Schedule::*f) {
      return Setter([f](RunConfig& c, const std::string& v, int line, const std::string& key) {
        c.schedule.*f = parse_double(v, line, key);
      });
    };
    t["schedule"] = {
        {"tau_h", schedule(&Schedule::tau_h)},
        {"tau_ba", schedule(&Schedule::tau_ba)},
        {"tau_c", schedule(&Schedule::tau_c)},
        {"tau_ab", schedule(&Schedule::tau_ab)},
    };
    t["noise"] = {
        {"segments", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.noise.segments = parse_number<int>(v, l, k);
         }},
        {"sigma_ab", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.noise.sigma_ab = parse_double(v, l, k);
         }},
        {"sigma_ba", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.noise.sigma_ba = parse_double(v, l, k);
         }},
        {"distribution", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.noise.distribution = parse_enum(v, l, k, kDistributions);
         }},
        {"kind", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.noise.kind = parse_enum(v, l, k, kKinds);
         }},
        {"ensemble", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.noise.mode = parse_enum(v, l, k, kEnsembles);
         }},
        {"n_cycles", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.noise.n_cycles = parse_number<int>(v, l, k);
         }},
        {"n_batches", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.noise.n_batches = parse_number<int>(v, l, k);
         }},
        {"allow_time_reversal", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.noise.allow_time_reversal = parse_bool(v, l, k);
         }},
    };
    t["sweep"] = {
        {"variable", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.sweep.variable = parse_enum(v, l, k, kVariables);
         }},
        {"grid", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.sweep.grid.clear();
           for (const std::string& item : split_list(v)) c.sweep.grid.push_back(parse_double(item, l, k));
         }},
        {"grid_linspace", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           const std::vector<std::string> items = split_list(v);
           if (items.size() != 3) throw ParseError(l, k, "expected 'start, stop, count'");
           const double a = parse_double(items[0], l, k);
           const double b = parse_double(items[1], l, k);
           const int n = parse_number<int>(items[2], l, k);
           if (n < 1) throw ParseError(l, k, "count must be >= 1");
           c.sweep.grid.clear();
           for (int i = 0; i < n; ++i) c.sweep.grid.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
         }},
        {"objective", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.sweep.objective = parse_enum(v, l, k, kObjectives);
         }},
        {"lambda_ratio", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.sweep.lambda_ratio = parse_double(v, l, k);
         }},
        {"modes", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.sweep.modes.clear();
           for (const std::string& item : split_list(v)) c.sweep.modes.push_back(parse_enum(item, l, k, kSweepModes));
           if (c.sweep.modes.empty()) throw ParseError(l, k, "at least one mode is needed");
         }},
        {"lubricated_Lambda_ba", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.sweep.lubricated_lambda_ba = parse_double(v, l, k);
         }},
        {"lubricated_Lambda_ab", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.sweep.lubricated_lambda_ab = parse_double(v, l, k);
         }},
    };
    t["run"] = {
        {"mode", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.mode = parse_enum(v, l, k, kRunModes);
         }},
        {"output", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           if (v.empty()) throw ParseError(l, k, "output directory is empty");
           c.output_dir = v;
         }},
        {"seed", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.seed = parse_number<std::uint64_t>(v, l, k);
         }},
        {"threads", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.threads = parse_number<int>(v, l, k);
         }},
        {"segments", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.integrator.segments = parse_number<int>(v, l, k);
         }},
        {"ladder", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.integrator.ladder = parse_enum(v, l, k, kLadders);
         }},
        {"resolution", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.resolution = parse_number<int>(v, l, k);
         }},
        {"tau_total", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.tau_total = parse_double(v, l, k);
         }},
        {"random_starts", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.random_starts = parse_number<int>(v, l, k);
         }},
        {"floor_fraction", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
           c.floor_fraction = parse_double(v, l, k);
         }},
    };
    return t;
  }();
  return table;
}

constexpr const char* kRequiredEngineKeys[] = {"J", "omega_a", "omega_b", "T_h", "T_c", "Gamma_h", "Gamma_c"};

// Message of a ValidationError without its "ValidationError: key: " prefix.
std::string bare_message(const ValidationError& e) {
  std::string what = e.what();
  const std::string prefix = e.kind() + ": " + (e.key().empty() ? "" : e.key() + ": ");
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

}  // namespace

void RunConfig::validate() const {
  engine.validate();
  schedule.validate();
  noise.validate();
  if (integrator.segments < 1) throw ValidationError("segments", "must be >= 1");
  if (resolution < 1) throw ValidationError("resolution", "must be >= 1");
  if (threads < 1) throw ValidationError("threads", "must be >= 1");
  if (!(tau_total > 0.0)) throw ValidationError("tau_total", "must be > 0");
  if (random_starts < 0) throw ValidationError("random_starts", "must be >= 0");
  if (!(floor_fraction > 0.0) || !(floor_fraction < 0.25)) throw ValidationError("floor_fraction", "must be in (0, 0.25)");
  if (!(sweep.lambda_ratio > 0.0)) throw ValidationError("lambda_ratio", "must be > 0");
  if (sweep.lubricated_lambda_ab < 0.0) throw ValidationError("lubricated_Lambda_ab", "must be >= 0");
  if (sweep.lubricated_lambda_ba < 0.0) throw ValidationError("lubricated_Lambda_ba", "must be >= 0");
  if (sweep.modes.empty()) throw ValidationError("modes", "at least one mode is needed");
  const bool needs_grid = mode == RunMode::sweep || (mode == RunMode::optimize && !sweep.grid.empty());
  if (needs_grid) {
    sweep_spec().validate();
    const bool nonneg = sweep.variable != SweepVariable::coupling;
    for (double v : sweep.grid) {
      if (nonneg && v < 0.0) throw ValidationError("grid", "values must be >= 0 for " + to_string(sweep.variable));
      if (sweep.variable == SweepVariable::cycle_time && v <= 0.0) throw ValidationError("grid", "cycle times must be > 0");
    }
  }
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec s;
  s.variable = sweep.variable;
  s.grid = sweep.grid;
  s.base = engine;
  s.schedule = schedule;
  s.objective = sweep.objective;
  s.lambda_ratio = sweep.lambda_ratio;
  return s;
}

OptimizeOptions RunConfig::optimize_options() const {
  OptimizeOptions o;
  o.random_starts = random_starts;
  o.seed = seed;
  o.floor_fraction = floor_fraction;
  o.settings = integrator;
  o.threads = threads;
  return o;
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  const auto& table = key_table();
  std::map<std::string, int> seen;  // key -> line
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string stripped = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') throw ParseError(line, "", "malformed section header '" + stripped + "'");
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (!table.count(section)) throw ParseError(line, "", "unknown section [" + section + "]");
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ParseError(line, "", "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (section.empty()) throw ParseError(line, key, "key outside of any section");
    const auto& keys = table.at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw ParseError(line, key, "unknown key in [" + section + "]");
    const std::string qualified = section + "." + key;
    if (seen.count(qualified))
      throw ParseError(line, key, "duplicate key (first set on line " + std::to_string(seen[qualified]) + ")");
    if (value.empty()) throw ParseError(line, key, "missing value");
    it->second(config, value, line, key);
    seen[qualified] = line;
  }
  for (const char* key : kRequiredEngineKeys)
    if (!seen.count(std::string("engine.") + key)) throw ValidationError(key, "missing required key in [engine]");
  config.noise.seed = config.seed;

  try {
    config.validate();
  } catch (const ValidationError& e) {
    for (const auto& [qualified, l] : seen) {
      if (qualified.substr(qualified.find('.') + 1) == e.key())
        throw ValidationError(e.key(), "line " + std::to_string(l) + ": " + bare_message(e));
    }
    throw;
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::ordered_json manifest_json(const RunConfig& c) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["code"] = {{"name", "qotto"}, {"version", QOTTO_VERSION}};
  j["mode"] = to_string(c.mode);
  j["engine"] = {
      {"J", c.engine.coupling},           {"omega_a", c.engine.omega_a},    {"omega_b", c.engine.omega_b},
      {"T_h", c.engine.t_hot},            {"T_c", c.engine.t_cold},         {"Gamma_h", c.engine.gamma_hot},
      {"Gamma_c", c.engine.gamma_cold},   {"gamma_h", c.engine.dephasing_hot}, {"gamma_c", c.engine.dephasing_cold},
      {"Lambda_ab", c.engine.lambda_ab},  {"Lambda_ba", c.engine.lambda_ba},
  };
  j["schedule"] = {{"tau_h", c.schedule.tau_h},
                   {"tau_ba", c.schedule.tau_ba},
                   {"tau_c", c.schedule.tau_c},
                   {"tau_ab", c.schedule.tau_ab}};
  j["noise"] = {{"segments", c.noise.segments},
                {"sigma_ab", c.noise.sigma_ab},
                {"sigma_ba", c.noise.sigma_ba},
                {"distribution", to_string(c.noise.distribution)},
                {"kind", to_string(c.noise.kind)},
                {"ensemble", to_string(c.noise.mode)},
                {"n_cycles", c.noise.n_cycles},
                {"n_batches", c.noise.n_batches},
                {"allow_time_reversal", c.noise.allow_time_reversal}};
  ordered_json modes = ordered_json::array();
  for (SweepMode m : c.sweep.modes) modes.push_back(to_string(m));
  j["sweep"] = {{"variable", to_string(c.sweep.variable)},
                {"grid", c.sweep.grid},
                {"objective", to_string(c.sweep.objective)},
                {"lambda_ratio", c.sweep.lambda_ratio},
                {"modes", modes},
                {"lubricated_Lambda_ba", c.sweep.lubricated_lambda_ba},
                {"lubricated_Lambda_ab", c.sweep.lubricated_lambda_ab}};
  j["run"] = {{"mode", to_string(c.mode)},
              {"output", c.output_dir},
              {"seed", c.seed},
              {"threads", c.threads},
              {"segments", c.integrator.segments},
              {"ladder", to_string(c.integrator.ladder)},
              {"resolution", c.resolution},
              {"tau_total", c.tau_total},
              {"random_starts", c.random_starts},
              {"floor_fraction", c.floor_fraction}};
  j["derived"] = {
      {"pure_dephasing_hot", std::abs(c.engine.dephasing_hot)},
      {"pure_dephasing_cold", std::abs(c.engine.dephasing_cold)},
      {"gamma_h_sign", c.engine.dephasing_hot < 0.0 ? "negative (|gamma_h| used)" : "non-negative"},
      {"gamma_c_sign", c.engine.dephasing_cold < 0.0 ? "negative (|gamma_c| used)" : "non-negative"},
  };
  return j;
}

RunConfig parse_manifest(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, "", std::string("manifest is not valid JSON: ") + e.what());
  }
  auto field = [&](const char* section, const char* key) -> const nlohmann::json& {
    if (!j.contains(section) || !j[section].contains(key)) throw ParseError(0, key, std::string("manifest lacks ") + section + "." + key);
    return j[section][key];
  };
  RunConfig c;
  try {
    c.mode = run_mode_from_string(field("run", "mode").get<std::string>());
    const auto eng = [&](const char* key) { return field("engine", key).get<double>(); };
    c.engine.coupling = eng("J");
    c.engine.omega_a = eng("omega_a");
    c.engine.omega_b = eng("omega_b");
    c.engine.t_hot = eng("T_h");
    c.engine.t_cold = eng("T_c");
    c.engine.gamma_hot = eng("Gamma_h");
    c.engine.gamma_cold = eng("Gamma_c");
    c.engine.dephasing_hot = eng("gamma_h");
    c.engine.dephasing_cold = eng("gamma_c");
    c.engine.lambda_ab = eng("Lambda_ab");
    c.engine.lambda_ba = eng("Lambda_ba");
    c.schedule.tau_h = field("schedule", "tau_h").get<double>();
    c.schedule.tau_ba = field("schedule", "tau_ba").get<double>();
    c.schedule.tau_c = field("schedule", "tau_c").get<double>();
    c.schedule.tau_ab = field("schedule", "tau_ab").get<double>();
    c.noise.segments = field("noise", "segments").get<int>();
    c.noise.sigma_ab = field("noise", "sigma_ab").get<double>();
    c.noise.sigma_ba = field("noise", "sigma_ba").get<double>();
    c.noise.distribution = parse_enum(field("noise", "distribution").get<std::string>(), 0, "distribution", kDistributions);
    c.noise.kind = parse_enum(field("noise", "kind").get<std::string>(), 0, "kind", kKinds);
    c.noise.mode = parse_enum(field("noise", "ensemble").get<std::string>(), 0, "ensemble", kEnsembles);
    c.noise.n_cycles = field("noise", "n_cycles").get<int>();
    c.noise.n_batches = field("noise", "n_batches").get<int>();
    c.noise.allow_time_reversal = field("noise", "allow_time_reversal").get<bool>();
    c.sweep.variable = parse_enum(field("sweep", "variable").get<std::string>(), 0, "variable", kVariables);
    c.sweep.grid = field("sweep", "grid").get<std::vector<double>>();
    c.sweep.objective = parse_enum(field("sweep", "objective").get<std::string>(), 0, "objective", kObjectives);
    c.sweep.lambda_ratio = field("sweep", "lambda_ratio").get<double>();
    c.sweep.modes.clear();
    for (const auto& m : field("sweep", "modes")) c.sweep.modes.push_back(parse_enum(m.get<std::string>(), 0, "modes", kSweepModes));
    c.sweep.lubricated_lambda_ba = field("sweep", "lubricated_Lambda_ba").get<double>();
    c.sweep.lubricated_lambda_ab = field("sweep", "lubricated_Lambda_ab").get<double>();
    c.output_dir = field("run", "output").get<std::string>();
    c.seed = field("run", "seed").get<std::uint64_t>();
    c.threads = field("run", "threads").get<int>();
    c.integrator.segments = field("run", "segments").get<int>();
    c.integrator.ladder = parse_enum(field("run", "ladder").get<std::string>(), 0, "ladder", kLadders);
    c.resolution = field("run", "resolution").get<int>();
    c.tau_total = field("run", "tau_total").get<double>();
    c.random_starts = field("run", "random_starts").get<int>();
    c.floor_fraction = field("run", "floor_fraction").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, "", std::string("manifest field has the wrong type: ") + e.what());
  }
  c.noise.seed = c.seed;
  c.validate();
  return c;
}

}  // namespace qotto
