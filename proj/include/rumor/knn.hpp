#pragma once

#include <span>
#include <vector>

#include "rumor/corpus.hpp"
#include "rumor/distance.hpp"
#include "rumor/hclust.hpp"

namespace rumor {

/// Reusable per-thread buffers for KnnModel queries.
struct KnnScratch {
  std::vector<std::uint32_t> stamp;
  std::vector<std::uint32_t> shared;
  std::vector<DocIndex> touched;
  std::uint32_t generation = 0;
};

/// k-nearest-neighbour classifier under token_distance. The sentinel label
/// is an ordinary class.
class KnnModel {
 public:
  KnnModel(std::vector<TokenSet> train_docs, Labeling train_labels, int k);

  int k() const { return k_; }
  std::size_t train_size() const { return docs_.size(); }
  const Labeling& train_labels() const { return labels_; }
  const InvertedIndex& index() const { return index_; }

  /// The k training documents closest to the query, ordered by
  /// (distance, training position).
  std::vector<Neighbor> nearest(const TokenSet& query) const;
  std::vector<Neighbor> nearest(const TokenSet& query, KnnScratch& scratch) const;

  /// Majority label of the k nearest. Vote ties go to the label of the
  /// nearest neighbour among the tied labels.
  Label predict(const TokenSet& query) const;
  Label predict(const TokenSet& query, KnnScratch& scratch) const;

  std::vector<Label> predict_batch(std::span<const TokenSet> queries, unsigned threads = 1) const;

 private:
  Label vote(const std::vector<Neighbor>& neighbors) const;

  std::vector<TokenSet> docs_;
  Labeling labels_;
  InvertedIndex index_;
  int k_;
};

KnnModel fit(std::vector<TokenSet> train_docs, Labeling train_labels, int k);

}  // namespace rumor
