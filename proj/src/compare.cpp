#include "structsim/compare.hpp"

#include <algorithm>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "structsim/errors.hpp"

namespace structsim {

std::vector<Tile> match_sequences(const TokenSequence& a, const TokenSequence& b,
                                  int min_match) {
  if (min_match < 1) throw UsageError("minimum match length must be >= 1");
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  std::vector<char> ma(static_cast<size_t>(n), 0), mb(static_cast<size_t>(m), 0);
  std::vector<Tile> tiles;

  // Greedy: one longest unmarked common substring per step, smallest
  // (startA, startB) on ties; both loops ascend, so the first maximum wins.
  while (true) {
    int best = 0, bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (ma[static_cast<size_t>(i)]) continue;
      if (n - i <= best) break; // no longer run can start here
      for (int j = 0; j < m; ++j) {
        if (mb[static_cast<size_t>(j)] || a.tokens[static_cast<size_t>(i)] != b.tokens[static_cast<size_t>(j)])
          continue;
        int k = 0;
        while (i + k < n && j + k < m && !ma[static_cast<size_t>(i + k)] &&
               !mb[static_cast<size_t>(j + k)] &&
               a.tokens[static_cast<size_t>(i + k)] == b.tokens[static_cast<size_t>(j + k)])
          ++k;
        if (k > best) {
          best = k;
          bi = i;
          bj = j;
        }
      }
    }
    if (best < min_match) break;
    for (int k = 0; k < best; ++k) {
      ma[static_cast<size_t>(bi + k)] = 1;
      mb[static_cast<size_t>(bj + k)] = 1;
    }
    Tile t;
    t.start_a = bi;
    t.start_b = bj;
    t.length = best;
    t.span_a = a.spans[static_cast<size_t>(bi)];
    t.span_b = b.spans[static_cast<size_t>(bj)];
    tiles.push_back(t);
  }
  std::sort(tiles.begin(), tiles.end(), [](const Tile& x, const Tile& y) {
    return x.start_a != y.start_a ? x.start_a < y.start_a : x.start_b < y.start_b;
  });
  return tiles;
}

ComparisonResult compare_tokens(const std::string& id_a, const TokenSequence& a,
                                const std::string& id_b, const TokenSequence& b,
                                int min_match) {
  ComparisonResult r;
  r.id_a = id_a;
  r.id_b = id_b;
  r.len_a = static_cast<int>(a.size());
  r.len_b = static_cast<int>(b.size());
  r.tiles = match_sequences(a, b, min_match);
  for (const Tile& t : r.tiles) r.matched += t.length;
  if (r.len_a + r.len_b > 0)
    r.similarity_avg = 2.0 * r.matched / (r.len_a + r.len_b);
  if (std::min(r.len_a, r.len_b) > 0)
    r.similarity_max = static_cast<double>(r.matched) / std::min(r.len_a, r.len_b);
  return r;
}

TokenSequence pipeline_tokens(const Submission& s, CompareMode mode,
                              const NormalizationConfig& norm) {
  Ast ast = parse_submission(s);
  Cpg cpg = build_cpg(std::move(ast));
  if (mode == CompareMode::Normalized) {
    cpg = normalize(std::move(cpg), norm);
    return tokenize(cpg, LinearizeMode::Eog);
  }
  return tokenize(cpg, LinearizeMode::Baseline);
}

namespace {

CorpusReport corpus_core(const std::vector<Submission>& subs,
                         const CorpusCompareOptions& opt, bool parallel) {
  (void)parallel;
  const int n = static_cast<int>(subs.size());
  if (n < 2) throw PipelineError("corpus comparison needs at least 2 submissions");

  std::vector<TokenSequence> seqs(static_cast<size_t>(n));
  std::vector<std::string> errors(static_cast<size_t>(n));
  std::vector<char> ok(static_cast<size_t>(n), 0);

#ifdef _OPENMP
  int threads = opt.jobs > 0 ? opt.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (parallel)
#endif
  for (int i = 0; i < n; ++i) {
    try {
      seqs[static_cast<size_t>(i)] = pipeline_tokens(subs[static_cast<size_t>(i)], opt.mode, opt.norm);
      ok[static_cast<size_t>(i)] = 1;
    } catch (const Error& e) {
      errors[static_cast<size_t>(i)] = subs[static_cast<size_t>(i)].id + ": " + e.what();
    }
  }

  CorpusReport report;
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    if (ok[static_cast<size_t>(i)]) {
      idx.push_back(i);
      report.included.push_back(subs[static_cast<size_t>(i)].id);
    } else {
      report.errors.push_back(errors[static_cast<size_t>(i)]);
    }
  }
  const int k = static_cast<int>(idx.size());
  if (k < 2) throw PipelineError("fewer than 2 submissions survived the pipeline");

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) pairs.emplace_back(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);

  std::vector<ComparisonResult> results(pairs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (parallel)
#endif
  for (long long p = 0; p < static_cast<long long>(pairs.size()); ++p) {
    auto [i, j] = pairs[static_cast<size_t>(p)];
    results[static_cast<size_t>(p)] =
        compare_tokens(subs[static_cast<size_t>(i)].id, seqs[static_cast<size_t>(i)],
                       subs[static_cast<size_t>(j)].id, seqs[static_cast<size_t>(j)], opt.min_match);
  }

  std::sort(results.begin(), results.end(),
            [](const ComparisonResult& x, const ComparisonResult& y) {
              if (x.similarity_avg != y.similarity_avg)
                return x.similarity_avg > y.similarity_avg;
              if (x.id_a != y.id_a) return x.id_a < y.id_a;
              return x.id_b < y.id_b;
            });
  report.results = std::move(results);
  return report;
}

std::string num6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

} // namespace

CorpusReport compare_corpus(const std::vector<Submission>& subs,
                            const CorpusCompareOptions& opt) {
  return corpus_core(subs, opt, true);
}

CorpusReport compare_corpus_serial(const std::vector<Submission>& subs,
                                   const CorpusCompareOptions& opt) {
  return corpus_core(subs, opt, false);
}

std::string comparison_csv(const std::vector<ComparisonResult>& results) {
  std::string out = "idA,idB,similarityAvg,similarityMax,matchedTokens,lenA,lenB\n";
  for (const auto& r : results) {
    out += r.id_a + "," + r.id_b + "," + num6(r.similarity_avg) + "," +
           num6(r.similarity_max) + "," + std::to_string(r.matched) + "," +
           std::to_string(r.len_a) + "," + std::to_string(r.len_b) + "\n";
  }
  return out;
}

std::string comparison_json(const CorpusReport& report) {
  nlohmann::json j;
  j["included"] = report.included;
  j["errors"] = report.errors;
  j["results"] = nlohmann::json::array();
  for (const auto& r : report.results) {
    nlohmann::json jr;
    jr["idA"] = r.id_a;
    jr["idB"] = r.id_b;
    jr["similarityAvg"] = r.similarity_avg;
    jr["similarityMax"] = r.similarity_max;
    jr["matchedTokens"] = r.matched;
    jr["lenA"] = r.len_a;
    jr["lenB"] = r.len_b;
    jr["tiles"] = nlohmann::json::array();
    for (const auto& t : r.tiles) {
      jr["tiles"].push_back({{"startA", t.start_a},
                             {"startB", t.start_b},
                             {"length", t.length},
                             {"spanA", {{"line", t.span_a.line}, {"col", t.span_a.col}}},
                             {"spanB", {{"line", t.span_b.line}, {"col", t.span_b.col}}}});
    }
    j["results"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

} // namespace structsim
