#include "structsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "structsim/errors.hpp"

namespace structsim {

double median(std::vector<double> v) {
  if (v.empty()) throw StatsError("empty group");
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double median_separation(const std::vector<double>& plagiarism,
                         const std::vector<double>& unrelated) {
  return (median(plagiarism) - median(unrelated)) * 100.0;
}

namespace {

// Midranks of |d| over all pairs (zeros included — Pratt handling).
std::vector<double> midranks(const std::vector<double>& absd) {
  size_t n = absd.size();
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return absd[a] < absd[b]; });
  std::vector<double> rank(n, 0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && absd[idx[j + 1]] == absd[idx[i]]) ++j;
    double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) rank[idx[k]] = mid;
    i = j + 1;
  }
  return rank;
}

double upper_tail_normal(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

} // namespace

double wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw StatsError("pair mismatch: unequal sample lengths");
  size_t n = x.size();
  std::vector<double> d(n), absd(n);
  for (size_t i = 0; i < n; ++i) {
    d[i] = x[i] - y[i];
    absd[i] = std::fabs(d[i]);
  }
  std::vector<double> rank = midranks(absd);

  std::vector<double> nz_ranks;
  double w_obs = 0;
  size_t zeros = 0;
  for (size_t i = 0; i < n; ++i) {
    if (d[i] == 0) {
      ++zeros;
      continue;
    }
    nz_ranks.push_back(rank[i]);
    if (d[i] > 0) w_obs += rank[i];
  }
  size_t nz = nz_ranks.size();
  if (nz == 0) return 1.0; // no evidence either way
  if (nz < 5) throw StatsError("too few pairs: need at least 5 nonzero differences");

  if (nz <= 12) {
    // Exact null distribution: all 2^nz sign assignments over the Pratt ranks.
    uint64_t total = uint64_t{1} << nz;
    uint64_t count = 0;
    for (uint64_t mask = 0; mask < total; ++mask) {
      double w = 0;
      for (size_t i = 0; i < nz; ++i)
        if (mask & (uint64_t{1} << i)) w += nz_ranks[i];
      if (w >= w_obs - 1e-9) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(total);
  }

  // Normal approximation with Pratt zero adjustment and tie correction.
  double N = static_cast<double>(n);
  double m = static_cast<double>(zeros);
  double mean = (N * (N + 1) - m * (m + 1)) / 4.0;
  double var = (N * (N + 1) * (2 * N + 1) - m * (m + 1) * (2 * m + 1)) / 24.0;
  std::vector<double> sorted_nz;
  for (size_t i = 0; i < n; ++i)
    if (d[i] != 0) sorted_nz.push_back(absd[i]);
  std::sort(sorted_nz.begin(), sorted_nz.end());
  for (size_t i = 0; i < sorted_nz.size();) {
    size_t j = i;
    while (j + 1 < sorted_nz.size() && sorted_nz[j + 1] == sorted_nz[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    if (t > 1) var -= (t * t * t - t) / 48.0;
    i = j + 1;
  }
  if (var <= 0) return 1.0;
  double z = (w_obs - 0.5 - mean) / std::sqrt(var);
  double p = upper_tail_normal(z);
  return std::min(1.0, std::max(p, 1e-300));
}

double cliffs_delta_value(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty()) throw StatsError("empty group");
  std::vector<double> ys = y;
  std::sort(ys.begin(), ys.end());
  long long num = 0;
  for (double xi : x) {
    auto lo = std::lower_bound(ys.begin(), ys.end(), xi);
    auto hi = std::upper_bound(ys.begin(), ys.end(), xi);
    long long less = lo - ys.begin();        // y values < xi
    long long greater = ys.end() - hi;       // y values > xi
    num += less - greater;
  }
  return static_cast<double>(num) /
         (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

const char* delta_interpretation(double delta) {
  double a = std::fabs(delta);
  if (a < 0.147) return "Negligible";
  if (a < 0.33) return "Small";
  if (a < 0.474) return "Medium";
  if (a < 0.8) return "Large";
  return "Very Large";
}

DeltaResult cliffs_delta(const std::vector<double>& x, const std::vector<double>& y,
                         uint64_t seed, int resamples) {
  DeltaResult r;
  r.delta = cliffs_delta_value(x, y);
  r.interpretation = delta_interpretation(r.delta);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> dx(0, x.size() - 1), dy(0, y.size() - 1);
  std::vector<double> boot;
  boot.reserve(static_cast<size_t>(resamples));
  std::vector<double> rx(x.size()), ry(y.size());
  for (int b = 0; b < resamples; ++b) {
    for (auto& v : rx) v = x[dx(rng)];
    for (auto& v : ry) v = y[dy(rng)];
    boot.push_back(cliffs_delta_value(rx, ry));
  }
  std::sort(boot.begin(), boot.end());
  auto quantile = [&](double q) {
    size_t i = static_cast<size_t>(std::llround(q * static_cast<double>(boot.size() - 1)));
    return boot[i];
  };
  r.ci_lo = quantile(0.025);
  r.ci_hi = quantile(0.975);
  return r;
}

EffectReport effect_report(const std::vector<double>& x, const std::vector<double>& y,
                           uint64_t seed) {
  EffectReport r;
  r.median_diff_pp = (median(x) - median(y)) * 100.0;
  r.wilcoxon_p = wilcoxon_signed_rank(x, y);
  r.delta = cliffs_delta(x, y, seed);
  return r;
}

namespace {

std::map<std::pair<std::string, std::string>, double>
similarity_map(const std::vector<ComparisonResult>& results) {
  std::map<std::pair<std::string, std::string>, double> m;
  for (const auto& r : results) {
    m[{r.id_a, r.id_b}] = r.similarity_avg;
    m[{r.id_b, r.id_a}] = r.similarity_avg;
  }
  return m;
}

std::vector<double> pick(const std::map<std::pair<std::string, std::string>, double>& m,
                         const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<double> out;
  for (const auto& p : pairs) {
    auto it = m.find(p);
    if (it == m.end())
      throw StatsError("pair mismatch: (" + p.first + ", " + p.second + ") missing from run");
    out.push_back(it->second);
  }
  return out;
}

} // namespace

RunEffects interpret_run(const std::vector<ComparisonResult>& before,
                         const std::vector<ComparisonResult>& after,
                         const PairLabels& labels, uint64_t seed) {
  auto mb = similarity_map(before);
  auto ma = similarity_map(after);
  RunEffects e;
  e.plagiarism = effect_report(pick(ma, labels.plagiarism), pick(mb, labels.plagiarism), seed);
  e.unrelated = effect_report(pick(ma, labels.unrelated), pick(mb, labels.unrelated), seed);
  return e;
}

} // namespace structsim
