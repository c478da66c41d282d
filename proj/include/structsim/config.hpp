#pragma once

#include <string>
#include <vector>

#include "structsim/attack.hpp"
#include "structsim/catalog.hpp"
#include "structsim/compare.hpp"

namespace structsim {

inline constexpr const char* kToolVersion = "1.0.0";

// Fully-resolved run configuration for one CLI invocation. Loadable from a
// key=value config file; command-line flags override file values.
struct RunConfig {
  std::string command;              // detect|normalize|tokenize|obfuscate|evaluate
  std::vector<std::string> inputs;  // files/directories
  std::string output = "out";

  int min_match = 9;
  CompareMode mode = CompareMode::Normalized;
  LinearizeMode linearize = LinearizeMode::Eog;
  NormalizationConfig norm;
  AttackSpec attack;
  int jobs = 0;
  uint64_t seed = 1;
  int intensity = 0;
  long long step_budget = 1000000;
  std::string io_file;       // io.json with test-input vectors
  bool attack_given = false; // an attack kind was explicitly configured
};

// Config file: one `key = value` per line, # comments, keys matching the
// long CLI flags (min-match, mode, seed, intensity, attack, disable,
// no-reorder, no-dead-code, jobs, io, output, step-budget). Throws
// UsageError on unknown keys or malformed lines.
void load_config_file(RunConfig& cfg, const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

// manifest.json content: config, seed and tool version (no timestamps, so
// reruns are byte-identical).
std::string manifest_json(const RunConfig& cfg);

} // namespace structsim
