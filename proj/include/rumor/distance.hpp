#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "rumor/common.hpp"
#include "rumor/corpus.hpp"

namespace rumor {

/// 1 - shared / max(size_a, size_b). Every distance in the library goes
/// through this expression so that all routes produce identical bits.
inline double overlap_distance(std::size_t shared, std::size_t size_a, std::size_t size_b) {
  const std::size_t larger = size_a > size_b ? size_a : size_b;
  return 1.0 - static_cast<double>(shared) / static_cast<double>(larger);
}

/// Size of the intersection of two ascending id sequences (sorted merge).
std::size_t intersection_size(std::span<const TokenId> a, std::span<const TokenId> b);

/// Max-normalized token-overlap distance. Throws InvalidArgument on an empty set.
double token_distance(const TokenSet& a, const TokenSet& b);

/// Upper-triangular pairwise distances, row-major, diagonal omitted.
class CondensedDistanceMatrix {
 public:
  CondensedDistanceMatrix() = default;
  explicit CondensedDistanceMatrix(std::size_t n, double fill = 0.0);
  CondensedDistanceMatrix(std::size_t n, std::vector<double> values);

  std::size_t n() const { return n_; }

  static std::size_t offset(std::size_t n, std::size_t i, std::size_t j) {
    return i * n - i * (i + 1) / 2 + j - i - 1;
  }
  std::size_t offset(std::size_t i, std::size_t j) const { return offset(n_, i, j); }

  /// Symmetric access; at(i, i) == 0.
  double at(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    return i < j ? values_[offset(i, j)] : values_[offset(j, i)];
  }
  double& ref(std::size_t i, std::size_t j) { return i < j ? values_[offset(i, j)] : values_[offset(j, i)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Binary dump: "CDM1", u64 n (LE), then n(n-1)/2 LE IEEE-754 doubles.
  void write_binary(std::ostream& out) const;
  static CondensedDistanceMatrix read_binary(std::istream& in);

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Distances between every pair of documents. Rows are computed on
/// `threads` workers; the result does not depend on the thread count.
CondensedDistanceMatrix distance_matrix(std::span<const TokenSet> docs, unsigned threads = 1);

/// Token -> ascending doc positions. Positions index the sequence the index
/// was built from, not TokenSet::doc_index.
class InvertedIndex {
 public:
  InvertedIndex() = default;
  explicit InvertedIndex(std::span<const TokenSet> docs);

  /// Postings of a token; empty when the token never occurs.
  std::span<const DocIndex> postings(TokenId token) const {
    return token < postings_.size() ? std::span<const DocIndex>(postings_[token]) : std::span<const DocIndex>{};
  }
  std::size_t doc_frequency(TokenId token) const { return postings(token).size(); }
  std::size_t doc_count() const { return doc_sizes_.size(); }
  std::size_t doc_size(DocIndex doc) const { return doc_sizes_[doc]; }
  std::span<const std::uint32_t> doc_sizes() const { return doc_sizes_; }
  /// One past the largest token id present.
  std::size_t token_bound() const { return postings_.size(); }

 private:
  std::vector<std::vector<DocIndex>> postings_;
  std::vector<std::uint32_t> doc_sizes_;
};

InvertedIndex build_index(std::span<const TokenSet> docs);

struct Neighbor {
  DocIndex doc = 0;
  double distance = 0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Every indexed document within `radius` of the query, ascending by doc
/// position. Exact: only documents sharing no token are skipped, and those
/// are at distance 1. radius must be in [0, 1).
std::vector<Neighbor> neighbors_within(const InvertedIndex& index, const TokenSet& query, double radius);

}  // namespace rumor
