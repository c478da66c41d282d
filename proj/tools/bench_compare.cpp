// Benchmark: serial vs OpenMP-parallel corpus comparison on a directory of
// submissions (defaults to the bundled corpus).
#include <chrono>
#include <iostream>
#include <string>

#include "structsim/compare.hpp"
#include "structsim/corpus.hpp"
#include "structsim/errors.hpp"

using namespace structsim;

namespace {

double run_timed(const std::vector<Submission>& subs, const CorpusCompareOptions& opt,
                 bool parallel, CorpusReport& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = parallel ? compare_corpus(subs, opt) : compare_corpus_serial(subs, opt);
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "corpus";
  int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  try {
    std::vector<Submission> subs = load_corpus(dir);
    CorpusCompareOptions opt;
    opt.min_match = 9;
    opt.mode = CompareMode::Normalized;

    CorpusReport serial, parallel;
    double ts = 1e300, tp = 1e300;
    for (int i = 0; i < repeats; ++i) {
      ts = std::min(ts, run_timed(subs, opt, false, serial));
      tp = std::min(tp, run_timed(subs, opt, true, parallel));
    }

    bool same = serial.results.size() == parallel.results.size();
    for (size_t i = 0; same && i < serial.results.size(); ++i) {
      const ComparisonResult &a = serial.results[i], &b = parallel.results[i];
      same = a.id_a == b.id_a && a.id_b == b.id_b && a.matched == b.matched &&
             a.similarity_avg == b.similarity_avg;
    }

    std::cout << "submissions: " << subs.size() << ", pairs: " << serial.results.size()
              << "\n";
    std::cout << "serial:   " << ts << " s\n";
    std::cout << "parallel: " << tp << " s (speedup " << (tp > 0 ? ts / tp : 0) << "x)\n";
    std::cout << "results identical: " << (same ? "yes" : "NO") << "\n";
    return same ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
