#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rumor/corpus.hpp"
#include "rumor/hclust.hpp"
#include "rumor/knn.hpp"

namespace rumor {

struct HybridConfig {
  double train_portion = 0.4;  // (0, 1]
  double threshold = 0.6;      // (0, 1]
  int k = 1;
  Linkage linkage = Linkage::Complete;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PhaseTimes {
  double split = 0;
  double train_matrix = 0;
  double train_cluster = 0;
  double knn_fit = 0;
  double knn_predict = 0;
  double residual_matrix = 0;
  double residual_cluster = 0;
  double merge = 0;
  double total = 0;
};

/// What the cluster-then-classify run did, phase by phase.
struct HybridTrace {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> initial_partition_sizes;  // by training label
  std::size_t singleton_count_after_relabel = 0;
  std::vector<std::pair<Label, std::size_t>> knn_assigned_counts;  // ascending label
  std::size_t residual_pool_size = 0;
  std::vector<std::size_t> residual_partition_sizes;  // by residual label
  PhaseTimes seconds;
};

struct HybridResult {
  Labeling labeling;  // compact, no sentinel
  HybridTrace trace;
};

struct Split {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> rest;   // ascending
};

/// Seeded uniform sample of round(p * n) positions (half away from zero),
/// clamped to [2, n] when n >= 2.
Split sample_split(std::size_t n, double train_portion, std::uint64_t seed);

/// Replaces the label of every one-member class with the sentinel.
Labeling relabel_singletons(const Labeling& labels);

/// Writes residual labels, shifted past the largest base label, into the
/// sentinel positions of `base`. residual_indices must be exactly those
/// positions, ascending.
Labeling merge_labelings(const Labeling& base, std::span<const std::size_t> residual_indices,
                         const Labeling& residual_labels);

/// Agglomerative clustering of the whole corpus; labels compacted.
Labeling pure_cluster(std::span<const TokenSet> corpus, double threshold, Linkage linkage, unsigned threads = 1);

/// Cluster a sample, propagate its labels with k-NN, then re-cluster the
/// documents left with the sentinel label.
HybridResult hybrid_cluster(std::span<const TokenSet> corpus, const HybridConfig& config, unsigned threads = 1);

}  // namespace rumor
