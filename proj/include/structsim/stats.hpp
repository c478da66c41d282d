#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "structsim/compare.hpp"

namespace structsim {

double median(std::vector<double> v); // throws StatsError on empty input

// median(plagiarism) - median(unrelated), in percentage points.
double median_separation(const std::vector<double>& plagiarism,
                         const std::vector<double>& unrelated);

// One-sided (greater) Wilcoxon signed-rank p-value for paired samples:
// H1: x > y. Pratt zero handling (zeros ranked, then dropped). Exact
// distribution for <= 12 nonzero differences, normal approximation with tie
// correction and continuity correction otherwise. All-zero differences give
// p = 1. Throws StatsError on length mismatch or fewer than 5 nonzero
// differences.
double wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y);

double cliffs_delta_value(const std::vector<double>& x, const std::vector<double>& y);

const char* delta_interpretation(double delta); // Negligible..Very Large

struct DeltaResult {
  double delta = 0;
  std::string interpretation;
  double ci_lo = 0, ci_hi = 0; // 95% bootstrap percentile interval
};

DeltaResult cliffs_delta(const std::vector<double>& x, const std::vector<double>& y,
                         uint64_t seed = 12345, int resamples = 10000);

struct EffectReport {
  double median_diff_pp = 0; // median(x) - median(y), pp
  double wilcoxon_p = 1;
  DeltaResult delta;
};

EffectReport effect_report(const std::vector<double>& x, const std::vector<double>& y,
                           uint64_t seed = 12345);

// Pair labels for an evaluation run; pairs are unordered id pairs.
struct PairLabels {
  std::vector<std::pair<std::string, std::string>> plagiarism;
  std::vector<std::pair<std::string, std::string>> unrelated;
};

struct RunEffects {
  EffectReport plagiarism; // improvement on plagiarism pairs (high delta good)
  EffectReport unrelated;  // adverse impact on unrelated pairs (low delta good)
};

// Compares two runs over the same pair set (before = baseline, after =
// normalized). Throws StatsError when a labeled pair is missing from either
// run.
RunEffects interpret_run(const std::vector<ComparisonResult>& before,
                         const std::vector<ComparisonResult>& after,
                         const PairLabels& labels, uint64_t seed = 12345);

} // namespace structsim
