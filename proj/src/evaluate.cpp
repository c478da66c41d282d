#include "structsim/evaluate.hpp"

#include <cstdio>
#include <map>

#include <json.hpp>

#include "structsim/errors.hpp"

namespace structsim {

namespace {

std::string num6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const char* attack_name(AttackKind k) {
  return k == AttackKind::Insertion ? "insertion" : "refactoring";
}

using SimMap = std::map<std::pair<std::string, std::string>, double>;

SimMap similarity_map(const std::vector<ComparisonResult>& results) {
  SimMap m;
  for (const ComparisonResult& r : results) {
    m[{r.id_a, r.id_b}] = r.similarity_avg;
    m[{r.id_b, r.id_a}] = r.similarity_avg;
  }
  return m;
}

std::vector<double> pick_sims(const SimMap& m,
                              const std::vector<std::pair<std::string, std::string>>& pairs,
                              std::vector<std::string>& notes, const std::string& ctx) {
  std::vector<double> out;
  for (const auto& p : pairs) {
    auto it = m.find(p);
    if (it == m.end()) {
      notes.push_back(ctx + ": pair " + p.first + "/" + p.second + " missing from run");
      continue;
    }
    out.push_back(it->second);
  }
  return out;
}

nlohmann::json delta_json(const DeltaResult& d) {
  return {{"delta", d.delta},
          {"interpretation", d.interpretation},
          {"ciLo", d.ci_lo},
          {"ciHi", d.ci_hi}};
}

nlohmann::json effect_json(const EffectReport& e) {
  return {{"medianDiffPp", e.median_diff_pp},
          {"wilcoxonP", e.wilcoxon_p},
          {"delta", delta_json(e.delta)}};
}

} // namespace

ExperimentReport run_evaluation(const std::vector<Submission>& corpus,
                                const IoVectors& io, const EvaluateOptions& opt) {
  if (corpus.size() < 2) throw UsageError("evaluation needs at least two submissions");
  ExperimentReport rep;
  size_t k = std::min(static_cast<size_t>(opt.attacked_count), corpus.size());

  for (AttackKind kind : opt.attacks) {
    const std::string aname = attack_name(kind);
    std::vector<Submission> pool = corpus;
    PairLabels labels;
    for (size_t i = 0; i < corpus.size(); ++i)
      for (size_t j = i + 1; j < corpus.size(); ++j)
        labels.unrelated.emplace_back(corpus[i].id, corpus[j].id);

    for (size_t i = 0; i < k; ++i) {
      const Submission& s = corpus[i];
      AttackSpec spec;
      spec.kind = kind;
      spec.intensity = opt.intensity;
      spec.seed = opt.seed + i; // distinct but reproducible per program
      spec.step_budget = opt.step_budget;
      std::vector<std::vector<std::string>> inputs;
      auto it = io.find(s.id);
      if (it != io.end()) inputs = it->second;
      try {
        AttackResult ar = run_attack(s, spec, inputs);
        Submission attacked = std::move(ar.attacked);
        attacked.id = s.id + "_" + aname;
        labels.plagiarism.emplace_back(s.id, attacked.id);
        rep.attacked_ids.push_back(attacked.id);
        pool.push_back(std::move(attacked));
      } catch (const Error& e) {
        rep.notes.push_back(aname + ": attack on " + s.id + " failed: " + e.what());
      }
    }
    if (labels.plagiarism.empty()) {
      rep.notes.push_back(aname + ": no attacked programs, experiment skipped");
      continue;
    }

    CorpusCompareOptions co;
    co.min_match = opt.min_match;
    co.norm = opt.norm;
    co.jobs = opt.jobs;
    co.mode = CompareMode::Baseline;
    CorpusReport base = compare_corpus(pool, co);
    co.mode = CompareMode::Normalized;
    CorpusReport normd = compare_corpus(pool, co);
    for (const std::string& e : base.errors) rep.notes.push_back(aname + "/baseline: " + e);
    for (const std::string& e : normd.errors) rep.notes.push_back(aname + "/normalized: " + e);

    struct Run {
      const char* approach;
      const CorpusReport* report;
    };
    for (const Run& run : {Run{"baseline", &base}, Run{"normalized", &normd}}) {
      SimMap m = similarity_map(run.report->results);
      std::vector<double> plag =
          pick_sims(m, labels.plagiarism, rep.notes, aname + "/" + run.approach);
      std::vector<double> unrel =
          pick_sims(m, labels.unrelated, rep.notes, aname + "/" + run.approach);
      if (plag.empty() || unrel.empty()) {
        rep.notes.push_back(aname + "/" + std::string(run.approach) +
                            ": not enough pairs, row skipped");
        continue;
      }
      ExperimentRow row;
      row.attack = aname;
      row.approach = run.approach;
      row.median_plagiarism = median(plag);
      row.median_unrelated = median(unrel);
      row.median_separation_pp = median_separation(plag, unrel);
      row.separation_delta = cliffs_delta(plag, unrel, opt.seed);
      rep.rows.push_back(std::move(row));
    }

    try {
      RunEffects eff = interpret_run(base.results, normd.results, labels, opt.seed);
      rep.comparisons.push_back({aname, eff.plagiarism, eff.unrelated});
    } catch (const StatsError& e) {
      rep.notes.push_back(aname + ": cross-approach test unavailable: " + e.what());
    }
  }
  return rep;
}

std::string report_csv(const ExperimentReport& r) {
  std::string out =
      "attack,approach,medianPlagiarism,medianUnrelated,medianSeparationPp,"
      "delta,deltaCiLo,deltaCiHi,interpretation\n";
  for (const ExperimentRow& row : r.rows) {
    out += row.attack + "," + row.approach + "," + num6(row.median_plagiarism) + "," +
           num6(row.median_unrelated) + "," + num6(row.median_separation_pp) + "," +
           num6(row.separation_delta.delta) + "," + num6(row.separation_delta.ci_lo) + "," +
           num6(row.separation_delta.ci_hi) + "," + row.separation_delta.interpretation +
           "\n";
  }
  return out;
}

std::string report_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const ExperimentRow& row : r.rows)
    j["rows"].push_back({{"attack", row.attack},
                         {"approach", row.approach},
                         {"medianPlagiarism", row.median_plagiarism},
                         {"medianUnrelated", row.median_unrelated},
                         {"medianSeparationPp", row.median_separation_pp},
                         {"separationDelta", delta_json(row.separation_delta)}});
  j["comparisons"] = nlohmann::json::array();
  for (const ExperimentComparison& c : r.comparisons)
    j["comparisons"].push_back({{"attack", c.attack},
                                {"plagiarism", effect_json(c.plagiarism)},
                                {"unrelated", effect_json(c.unrelated)}});
  j["attackedIds"] = r.attacked_ids;
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

} // namespace structsim
