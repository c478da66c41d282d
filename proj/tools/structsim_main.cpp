#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "structsim/catalog.hpp"
#include "structsim/compare.hpp"
#include "structsim/config.hpp"
#include "structsim/corpus.hpp"
#include "structsim/errors.hpp"
#include "structsim/evaluate.hpp"
#include "structsim/frontend.hpp"
#include "structsim/linearize.hpp"

namespace fs = std::filesystem;
using namespace structsim;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw UsageError("cannot write " + p.string());
  f << text;
}

std::vector<Submission> load_inputs(const std::vector<std::string>& inputs) {
  std::vector<Submission> subs;
  for (const std::string& in : inputs) {
    if (!fs::exists(in)) throw UsageError("input does not exist: " + in);
    if (fs::is_directory(in)) {
      std::vector<Submission> c = load_corpus(in);
      subs.insert(subs.end(), c.begin(), c.end());
    } else {
      subs.push_back(load_submission(in));
    }
  }
  std::sort(subs.begin(), subs.end(),
            [](const Submission& a, const Submission& b) { return a.id < b.id; });
  for (size_t i = 1; i < subs.size(); ++i)
    if (subs[i].id == subs[i - 1].id)
      throw UsageError("duplicate submission id: " + subs[i].id);
  return subs;
}

IoVectors find_io_vectors(const RunConfig& cfg) {
  if (!cfg.io_file.empty()) return load_io_vectors(cfg.io_file);
  for (const std::string& in : cfg.inputs) {
    fs::path p = fs::path(in) / "io.json";
    if (fs::is_directory(in) && fs::exists(p)) return load_io_vectors(p.string());
  }
  return {};
}

void emit_manifest(const RunConfig& cfg) {
  write_file(fs::path(cfg.output) / "manifest.json", manifest_json(cfg));
}

void warn_errors(const std::vector<std::string>& errors) {
  for (const std::string& e : errors) std::cerr << "warning: " << e << "\n";
}

int run_detect(const RunConfig& cfg) {
  std::vector<Submission> subs = load_inputs(cfg.inputs);
  CorpusCompareOptions co;
  co.min_match = cfg.min_match;
  co.mode = cfg.mode;
  co.norm = cfg.norm;
  co.jobs = cfg.jobs;
  CorpusReport rep = compare_corpus(subs, co);
  emit_manifest(cfg);
  write_file(fs::path(cfg.output) / "comparison.csv", comparison_csv(rep.results));
  write_file(fs::path(cfg.output) / "comparison.json", comparison_json(rep));
  warn_errors(rep.errors);
  std::cout << "compared " << rep.included.size() << " submissions, "
            << rep.results.size() << " pairs -> " << cfg.output << "/comparison.csv\n";
  for (const ComparisonResult& r : rep.results)
    std::cout << r.id_a << " " << r.id_b << " " << r.similarity_avg << "\n";
  return 0;
}

int run_normalize(const RunConfig& cfg) {
  std::vector<Submission> subs = load_inputs(cfg.inputs);
  emit_manifest(cfg);
  nlohmann::json errs = nlohmann::json::array();
  int ok = 0;
  for (const Submission& s : subs) {
    try {
      Cpg cpg = build_cpg(parse_submission(s));
      cpg = normalize(std::move(cpg), cfg.norm);
      write_submission(cfg.output, print_submission(cpg.ast, s.id));
      ++ok;
    } catch (const Error& e) {
      errs.push_back({{"id", s.id}, {"error", e.kind()}, {"message", e.what()}});
      std::cerr << "warning: " << s.id << ": " << e.what() << "\n";
    }
  }
  if (!errs.empty())
    write_file(fs::path(cfg.output) / "errors.json", errs.dump(2) + "\n");
  std::cout << "normalized " << ok << "/" << subs.size() << " submissions -> "
            << cfg.output << "\n";
  if (ok == 0) throw PipelineError("no submission could be normalized");
  return 0;
}

int run_tokenize(const RunConfig& cfg) {
  std::vector<Submission> subs = load_inputs(cfg.inputs);
  emit_manifest(cfg);
  nlohmann::json errs = nlohmann::json::array();
  int ok = 0;
  for (const Submission& s : subs) {
    try {
      TokenSequence seq = pipeline_tokens(s, cfg.mode, cfg.norm);
      write_file(fs::path(cfg.output) / (s.id + ".tokens"), dump_tokens(seq));
      ++ok;
    } catch (const Error& e) {
      errs.push_back({{"id", s.id}, {"error", e.kind()}, {"message", e.what()}});
      std::cerr << "warning: " << s.id << ": " << e.what() << "\n";
    }
  }
  if (!errs.empty())
    write_file(fs::path(cfg.output) / "errors.json", errs.dump(2) + "\n");
  std::cout << "tokenized " << ok << "/" << subs.size() << " submissions -> "
            << cfg.output << "\n";
  if (ok == 0) throw PipelineError("no submission could be tokenized");
  return 0;
}

int run_obfuscate(const RunConfig& cfg) {
  std::vector<Submission> subs = load_inputs(cfg.inputs);
  IoVectors io = find_io_vectors(cfg);
  emit_manifest(cfg);
  nlohmann::json errs = nlohmann::json::array();
  int ok = 0;
  for (size_t i = 0; i < subs.size(); ++i) {
    const Submission& s = subs[i];
    AttackSpec spec = cfg.attack;
    spec.seed = cfg.seed + i; // per-program stream, still reproducible
    std::vector<std::vector<std::string>> inputs;
    auto it = io.find(s.id);
    if (it != io.end()) inputs = it->second;
    try {
      AttackResult r = run_attack(s, spec, inputs);
      write_submission(cfg.output, r.attacked);
      write_file(fs::path(cfg.output) / s.id / "edits.json", edit_log_json(r.edits));
      ++ok;
    } catch (const Error& e) {
      errs.push_back({{"id", s.id}, {"error", e.kind()}, {"message", e.what()}});
      std::cerr << "warning: " << s.id << ": " << e.what() << "\n";
    }
  }
  if (!errs.empty())
    write_file(fs::path(cfg.output) / "errors.json", errs.dump(2) + "\n");
  std::cout << "attacked " << ok << "/" << subs.size() << " submissions -> "
            << cfg.output << "\n";
  if (ok == 0) throw PipelineError("no submission could be attacked");
  return 0;
}

int run_evaluate(const RunConfig& cfg, bool attack_given) {
  std::vector<Submission> subs = load_inputs(cfg.inputs);
  IoVectors io = find_io_vectors(cfg);
  EvaluateOptions eo;
  eo.min_match = cfg.min_match;
  eo.seed = cfg.seed;
  eo.intensity = cfg.intensity;
  eo.step_budget = cfg.step_budget;
  eo.norm = cfg.norm;
  eo.jobs = cfg.jobs;
  if (attack_given) eo.attacks = {cfg.attack.kind};
  emit_manifest(cfg);
  ExperimentReport rep = run_evaluation(subs, io, eo);
  write_file(fs::path(cfg.output) / "report.csv", report_csv(rep));
  write_file(fs::path(cfg.output) / "report.json", report_json(rep));
  warn_errors(rep.notes);
  for (const ExperimentRow& r : rep.rows)
    std::cout << r.attack << "/" << r.approach << ": median separation "
              << r.median_separation_pp << " pp, delta " << r.separation_delta.delta
              << " (" << r.separation_delta.interpretation << ")\n";
  std::cout << "report -> " << cfg.output << "/report.csv\n";
  return 0;
}

struct RawArgs {
  std::string config;
  int min_match = 9;
  std::string mode;
  uint64_t seed = 1;
  int intensity = 0;
  std::string attack;
  std::string disable;
  int jobs = 0;
  std::string io;
  std::string output;
  long long step_budget = 1000000;
  std::vector<std::string> inputs;
};

// Adds the shared option set; per-command irrelevant options are simply not
// registered.
void add_options(CLI::App* cmd, RawArgs& raw, bool compare_opts, bool attack_opts) {
  cmd->add_option("--config", raw.config, "key=value config file (flags override)");
  cmd->add_option("--output,-o", raw.output, "output directory (default: out)");
  cmd->add_option("--disable", raw.disable, "comma-separated transformation ids to skip");
  cmd->add_flag("--no-reorder", "disable statement reordering");
  cmd->add_flag("--no-dead-code", "disable dead-code and unreachable-code removal");
  cmd->add_option("--jobs", raw.jobs, "worker threads (0 = all cores)");
  if (compare_opts) {
    cmd->add_option("--min-match", raw.min_match, "minimal match length (default 9)");
    cmd->add_option("--mode", raw.mode, "baseline|normalized (default normalized)");
  }
  if (attack_opts) {
    cmd->add_option("--seed", raw.seed, "attack/bootstrap RNG seed");
    cmd->add_option("--intensity", raw.intensity, "edits per program (0 = scaled)");
    cmd->add_option("--attack,--kind", raw.attack, "insertion|refactoring");
    cmd->add_option("--io", raw.io, "io.json with test-input vectors");
    cmd->add_option("--step-budget", raw.step_budget, "interpreter step budget");
  }
  cmd->add_option("inputs", raw.inputs, "input files or directories")->required();
}

// Config file first, then every flag the user actually passed.
RunConfig resolve_config(CLI::App* cmd, const RawArgs& raw) {
  RunConfig cfg;
  cfg.command = cmd->get_name();
  if (cmd->count("--config")) load_config_file(cfg, raw.config);
  auto passed = [&](const std::string& f) {
    return cmd->get_option_no_throw(f) && cmd->count(f) > 0;
  };
  if (passed("--min-match")) apply_config_entry(cfg, "min-match", std::to_string(raw.min_match));
  if (passed("--mode")) apply_config_entry(cfg, "mode", raw.mode);
  if (passed("--seed")) apply_config_entry(cfg, "seed", std::to_string(raw.seed));
  if (passed("--intensity")) apply_config_entry(cfg, "intensity", std::to_string(raw.intensity));
  if (passed("--attack")) apply_config_entry(cfg, "attack", raw.attack);
  if (passed("--disable")) apply_config_entry(cfg, "disable", raw.disable);
  if (passed("--no-reorder")) apply_config_entry(cfg, "no-reorder", "true");
  if (passed("--no-dead-code")) apply_config_entry(cfg, "no-dead-code", "true");
  if (passed("--jobs")) apply_config_entry(cfg, "jobs", std::to_string(raw.jobs));
  if (passed("--io")) apply_config_entry(cfg, "io", raw.io);
  if (passed("--output")) apply_config_entry(cfg, "output", raw.output);
  if (passed("--step-budget"))
    apply_config_entry(cfg, "step-budget", std::to_string(raw.step_budget));
  cfg.inputs = raw.inputs;
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"structsim: plagiarism detection with normalization-based "
               "obfuscation reversal"};
  app.set_version_flag("--version", std::string("structsim ") + kToolVersion);
  app.require_subcommand(1);

  RawArgs raw;
  CLI::App* detect = app.add_subcommand("detect", "compare all submission pairs");
  add_options(detect, raw, true, false);
  CLI::App* normalize_cmd =
      app.add_subcommand("normalize", "write normalized pretty-printed sources");
  add_options(normalize_cmd, raw, false, false);
  CLI::App* tokenize_cmd = app.add_subcommand("tokenize", "write token dumps");
  add_options(tokenize_cmd, raw, true, false);
  CLI::App* obfuscate = app.add_subcommand("obfuscate", "generate attacked corpus");
  add_options(obfuscate, raw, false, true);
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "attack, detect both modes, run statistics");
  add_options(evaluate, raw, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    RunConfig cfg = resolve_config(cmd, raw);
    bool attack_given = cfg.command == "evaluate" &&
                        (cmd->count("--attack") > 0 || cfg.attack_given);
    if (cfg.command == "detect") return run_detect(cfg);
    if (cfg.command == "normalize") return run_normalize(cfg);
    if (cfg.command == "tokenize") return run_tokenize(cfg);
    if (cfg.command == "obfuscate") return run_obfuscate(cfg);
    return run_evaluate(cfg, attack_given);
  } catch (const UsageError& e) {
    std::cerr << nlohmann::json({{"error", e.kind()}, {"message", e.what()}}).dump()
              << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << nlohmann::json({{"error", e.kind()}, {"message", e.what()}}).dump()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json({{"error", "InternalError"}, {"message", e.what()}}).dump()
              << "\n";
    return 2;
  }
}
