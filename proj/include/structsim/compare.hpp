#pragma once

#include <string>
#include <vector>

#include "structsim/catalog.hpp"
#include "structsim/corpus.hpp"
#include "structsim/linearize.hpp"

namespace structsim {

struct Tile {
  int start_a = 0;
  int start_b = 0;
  int length = 0;
  Span span_a, span_b; // source location of the first matched token
};

struct ComparisonResult {
  std::string id_a, id_b;
  std::vector<Tile> tiles;
  int len_a = 0, len_b = 0;
  int matched = 0;            // sum of tile lengths
  double similarity_avg = 0;  // 2*matched / (len_a + len_b)
  double similarity_max = 0;  // matched / min(len_a, len_b)
};

// Greedy string tiling: repeatedly take the longest common substring of
// unmarked tokens (ties: smallest startA, then startB), mark it, stop when
// the longest remaining run is shorter than min_match.
std::vector<Tile> match_sequences(const TokenSequence& a, const TokenSequence& b,
                                  int min_match);

ComparisonResult compare_tokens(const std::string& id_a, const TokenSequence& a,
                                const std::string& id_b, const TokenSequence& b,
                                int min_match);

enum class CompareMode { Baseline, Normalized };

struct CorpusCompareOptions {
  int min_match = 9;
  CompareMode mode = CompareMode::Normalized;
  NormalizationConfig norm;
  int jobs = 0; // 0 = library default (all-pairs map parallelized with OpenMP)
};

struct CorpusReport {
  std::vector<ComparisonResult> results;  // descending similarity_avg
  std::vector<std::string> included;      // submission ids that tokenized
  std::vector<std::string> errors;        // per-submission pipeline failures
};

// All n*(n-1)/2 pairs. Submissions that fail to parse/normalize are excluded
// with an error entry; a corpus yielding < 2 usable submissions throws
// PipelineError. `compare_corpus_serial` is the reference implementation the
// parallel path is tested against.
CorpusReport compare_corpus(const std::vector<Submission>& subs,
                            const CorpusCompareOptions& opt);
CorpusReport compare_corpus_serial(const std::vector<Submission>& subs,
                                   const CorpusCompareOptions& opt);

// Tokenization half of the corpus pipeline, exposed for reuse: parse,
// resolve, (normalize,) tokenize one submission.
TokenSequence pipeline_tokens(const Submission& s, CompareMode mode,
                              const NormalizationConfig& norm);

// CSV: header + one row per result: idA,idB,similarityAvg,similarityMax,
// matchedTokens,lenA,lenB. Numbers with 6 significant digits.
std::string comparison_csv(const std::vector<ComparisonResult>& results);

// JSON report including tiles with source spans.
std::string comparison_json(const CorpusReport& report);

} // namespace structsim
