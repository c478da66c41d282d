#pragma once

#include <string>
#include <vector>

#include "structsim/attack.hpp"
#include "structsim/stats.hpp"

namespace structsim {

struct EvaluateOptions {
  int min_match = 9;
  uint64_t seed = 7;
  int intensity = 0;               // 0 = scaled to program size
  std::vector<AttackKind> attacks = {AttackKind::Insertion, AttackKind::Refactoring};
  int attacked_count = 10;         // corpus programs attacked (first k by id)
  long long step_budget = 1000000; // interpreter budget for attack validation
  NormalizationConfig norm;
  int jobs = 0;
};

// One experiment block: one attack kind evaluated under one detector mode.
struct ExperimentRow {
  std::string attack;            // insertion|refactoring
  std::string approach;          // baseline|normalized
  double median_plagiarism = 0;  // median similarity of plagiarism pairs
  double median_unrelated = 0;
  double median_separation_pp = 0;
  DeltaResult separation_delta;  // delta(plagiarism sims, unrelated sims)
};

// Cross-approach comparison per attack kind (normalized vs baseline).
struct ExperimentComparison {
  std::string attack;
  EffectReport plagiarism; // improvement on plagiarism pairs
  EffectReport unrelated;  // false-positive impact on unrelated pairs
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<ExperimentComparison> comparisons;
  std::vector<std::string> attacked_ids;
  std::vector<std::string> notes; // per-submission exclusions etc.
};

// Full harness: attack the corpus, compare all pairs in baseline and
// normalized mode, compute the metrics. Plagiarism pairs are
// (original, attacked copy of it); unrelated pairs are original x original.
ExperimentReport run_evaluation(const std::vector<Submission>& corpus,
                                const IoVectors& io, const EvaluateOptions& opt);

std::string report_csv(const ExperimentReport& r);
std::string report_json(const ExperimentReport& r);

} // namespace structsim
