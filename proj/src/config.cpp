#include "structsim/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "structsim/errors.hpp"

namespace structsim {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    long long x = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw UsageError("bad integer for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError("bad boolean for " + key + ": '" + value + "'");
}

const std::set<std::string>& known_transformations() {
  static const std::set<std::string> ids = [] {
    std::set<std::string> s{"T7"}; // procedural, no template entry
    for (const CatalogEntry& e : catalog_templates()) s.insert(e.id);
    return s;
  }();
  return ids;
}

} // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "min-match") {
    cfg.min_match = static_cast<int>(parse_int(key, value));
    if (cfg.min_match < 1) throw UsageError("min-match must be at least 1");
  } else if (key == "mode") {
    if (value == "baseline") {
      cfg.mode = CompareMode::Baseline;
      cfg.linearize = LinearizeMode::Baseline;
    } else if (value == "normalized") {
      cfg.mode = CompareMode::Normalized;
      cfg.linearize = LinearizeMode::Eog;
    } else {
      throw UsageError("mode must be 'baseline' or 'normalized', got '" + value + "'");
    }
  } else if (key == "seed") {
    cfg.seed = static_cast<uint64_t>(parse_int(key, value));
    cfg.attack.seed = cfg.seed;
  } else if (key == "intensity") {
    cfg.intensity = static_cast<int>(parse_int(key, value));
    if (cfg.intensity < 0) throw UsageError("intensity must be non-negative");
    cfg.attack.intensity = cfg.intensity;
  } else if (key == "attack") {
    if (value == "insertion") cfg.attack.kind = AttackKind::Insertion;
    else if (value == "refactoring") cfg.attack.kind = AttackKind::Refactoring;
    else throw UsageError("attack must be 'insertion' or 'refactoring', got '" + value + "'");
    cfg.attack_given = true;
  } else if (key == "disable") {
    // Comma-separated transformation ids.
    std::string rest = value;
    while (!rest.empty()) {
      size_t comma = rest.find(',');
      std::string id = trim(rest.substr(0, comma));
      rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
      if (id.empty()) continue;
      if (!known_transformations().count(id))
        throw UsageError("unknown transformation id: '" + id + "'");
      cfg.norm.disabled.insert(id);
    }
  } else if (key == "no-reorder") {
    cfg.norm.reorder = !parse_bool(key, value);
  } else if (key == "no-dead-code") {
    cfg.norm.dead_code = !parse_bool(key, value);
  } else if (key == "jobs") {
    cfg.jobs = static_cast<int>(parse_int(key, value));
    if (cfg.jobs < 0) throw UsageError("jobs must be non-negative");
  } else if (key == "io") {
    cfg.io_file = value;
  } else if (key == "output") {
    cfg.output = value;
  } else if (key == "step-budget") {
    cfg.step_budget = parse_int(key, value);
    if (cfg.step_budget < 1) throw UsageError("step-budget must be positive");
    cfg.attack.step_budget = cfg.step_budget;
  } else {
    throw UsageError("unknown config key: '" + key + "'");
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config file: " + path);
  std::string line;
  int ln = 0;
  while (std::getline(f, line)) {
    ++ln;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(ln) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw UsageError(path + ":" + std::to_string(ln) + ": empty key");
    apply_config_entry(cfg, key, value);
  }
}

std::string manifest_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["tool"] = "structsim";
  j["version"] = kToolVersion;
  j["command"] = cfg.command;
  j["inputs"] = cfg.inputs;
  j["output"] = cfg.output;
  j["minMatch"] = cfg.min_match;
  j["mode"] = cfg.mode == CompareMode::Baseline ? "baseline" : "normalized";
  j["seed"] = cfg.seed;
  j["intensity"] = cfg.intensity;
  j["attack"] = cfg.attack.kind == AttackKind::Insertion ? "insertion" : "refactoring";
  j["disabled"] = std::vector<std::string>(cfg.norm.disabled.begin(), cfg.norm.disabled.end());
  j["reorder"] = cfg.norm.reorder;
  j["deadCode"] = cfg.norm.dead_code;
  j["jobs"] = cfg.jobs;
  j["stepBudget"] = cfg.step_budget;
  if (!cfg.io_file.empty()) j["io"] = cfg.io_file;
  return j.dump(2) + "\n";
}

} // namespace structsim
