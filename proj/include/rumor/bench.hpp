#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rumor/hybrid.hpp"

namespace rumor {

/// A model in a benchmark grid: pure clustering or hybrid with a config.
struct ModelSpec {
  std::string name;  // "pure" or "hybrid:<p>"
  bool pure = true;
  HybridConfig config;
};

ModelSpec pure_model();
ModelSpec hybrid_model(const HybridConfig& config);

/// Parses "pure,hybrid:0.4,hybrid:0.8"; hybrid entries copy `base` and set p.
std::vector<ModelSpec> parse_models(std::string_view text, const HybridConfig& base);

struct BenchOptions {
  std::vector<std::size_t> sizes;
  std::vector<ModelSpec> models;
  int iterations = 5;
  std::uint64_t seed = 0;
  double threshold = 0.6;  // ground-truth clustering
  Linkage linkage = Linkage::Complete;
  unsigned threads = 1;
  /// Run iterations concurrently. Only quality figures stay meaningful.
  bool parallel_iterations = false;
};

struct BenchSample {
  std::string model;
  std::size_t size = 0;
  int iteration = 0;
  double runtime_s = 0;
  double precision = 0;
  double recall = 0;
  double f_score = 0;
};

struct MeanWithCi {
  double mean = 0;
  std::optional<double> ci95;  // half-width; absent for a single iteration
};

struct BenchRow {
  std::string model;
  std::size_t size = 0;
  int iterations = 0;
  MeanWithCi runtime_s;
  MeanWithCi precision;
  MeanWithCi recall;
  MeanWithCi f_score;
};

struct BenchReport {
  int iterations = 0;
  std::vector<BenchRow> rows;        // by size, then model order
  std::vector<BenchSample> samples;  // by size, iteration, model order
};

/// Seeded subset of `size` corpus positions for one iteration (ascending).
std::vector<std::size_t> bench_subset(std::size_t corpus_size, std::size_t size, std::uint64_t seed, int iteration);

/// For every size and iteration: draw a subset, cluster it fully to get the
/// reference partition, run each model, time it and score it against the
/// reference. Timings cover clustering only. Pure-model rows are timed on the
/// reference run and score 1 by construction.
BenchReport run_bench(std::span<const TokenSet> corpus, const BenchOptions& options);

std::string bench_report_to_json(const BenchReport& report, int indent = 2);

/// model,size,iteration,runtime_s,precision,recall,f_score
void write_bench_csv(std::ostream& out, const BenchReport& report);

}  // namespace rumor
