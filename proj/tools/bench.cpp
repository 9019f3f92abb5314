// Times the OpenMP corpus kernels against their serial references on a
// seeded synthetic workload and verifies they produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qdt/batch.hpp"
#include "qdt/corruption.hpp"
#include "qdt/rng.hpp"
#include "qdt/sampler.hpp"
#include "qdt/tree.hpp"

using namespace qdt;

namespace {

struct Workload {
  std::vector<TokenSeq> questions;
  std::vector<TokenSeq> golds;
  std::vector<TokenSeq> preds;
  std::vector<TokenSeq> clues;
  std::vector<DatasetExample> examples;
};

Workload make_workload(std::size_t size, std::uint64_t seed) {
  Workload w;
  SplitMix64 rng(seed);
  CorruptionRates rates{0.05, 0.05, 0.05, 0.85};
  while (w.golds.size() < size) {
    QdtTree tree = sample_tree(rng);
    TokenSeq gold = serialize(tree);
    TokenSeq question = strip_separators(gold);
    if (question.empty()) continue;
    Branch whole{0, TokenKind::sep_des, 0, gold};
    w.preds.push_back(corrupt(whole, rates, rng.next()).tokens);
    w.clues.push_back(corrupt(whole, rates, rng.next()).tokens);
    w.examples.push_back(DatasetExample{"ex" + std::to_string(w.golds.size()),
                                        question, gold});
    w.questions.push_back(std::move(question));
    w.golds.push_back(std::move(gold));
  }
  return w;
}

template <typename F>
double time_ms(F&& f) {
  auto start = std::chrono::steady_clock::now();
  f();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const char* kernel, double serial_ms, double parallel_ms,
            bool identical) {
  std::printf("%-22s %10.1f ms %10.1f ms   x%.2f   %s\n", kernel, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t size = 2000;
  std::uint64_t seed = 42;
  if (argc > 1) size = static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10));
  if (argc > 2) seed = std::strtoull(argv[2], nullptr, 10);

#ifdef _OPENMP
  std::printf("threads: %d, examples: %zu, seed: %llu\n", omp_get_max_threads(),
              size, static_cast<unsigned long long>(seed));
#else
  std::printf("threads: 1 (OpenMP disabled), examples: %zu\n", size);
#endif

  Workload w = make_workload(size, seed);
  int mismatches = 0;

  {
    batch::TreeEvalReport serial, parallel;
    double s = time_ms([&] { serial = batch::evaluate_trees_serial(w.preds, w.golds); });
    double p = time_ms(
        [&] { parallel = batch::evaluate_trees_parallel(w.preds, w.golds); });
    bool same = serial.per_example_ged == parallel.per_example_ged &&
                serial.em == parallel.em && serial.tda == parallel.tda;
    report("eval-tree (EM/TDA/GED)", s, p, same);
    if (!same) ++mismatches;
    std::printf("  em %.4f  tda %.4f  ged %.4f\n", serial.em, serial.tda,
                serial.ged_mean);
  }
  {
    batch::SeqEvalReport serial, parallel;
    double s = time_ms([&] { serial = batch::evaluate_seqs_serial(w.preds, w.golds); });
    double p =
        time_ms([&] { parallel = batch::evaluate_seqs_parallel(w.preds, w.golds); });
    bool same = serial.em == parallel.em && serial.bleu == parallel.bleu &&
                serial.rouge == parallel.rouge;
    report("eval-seq (EM/BLEU/ROUGE)", s, p, same);
    if (!same) ++mismatches;
  }
  {
    CorruptionRates rates;
    TrainingSet serial, parallel;
    double s = time_ms(
        [&] { serial = batch::generate_training_set_serial(w.examples, rates, seed); });
    double p = time_ms([&] {
      parallel = batch::generate_training_set_parallel(w.examples, rates, seed);
    });
    bool same = serial.records.size() == parallel.records.size();
    for (std::size_t i = 0; same && i < serial.records.size(); ++i) {
      same = training_record_to_json(serial.records[i]) ==
             training_record_to_json(parallel.records[i]);
    }
    report("corrupt (training set)", s, p, same);
    if (!same) ++mismatches;
  }
  {
    batch::DecipherBatchResult serial, parallel;
    double s = time_ms(
        [&] { serial = batch::decipher_corpus_serial(w.questions, w.clues); });
    double p = time_ms(
        [&] { parallel = batch::decipher_corpus_parallel(w.questions, w.clues); });
    bool same = serial.outputs == parallel.outputs;
    report("decipher (align)", s, p, same);
    if (!same) ++mismatches;
  }

  return mismatches == 0 ? 0 : 1;
}
