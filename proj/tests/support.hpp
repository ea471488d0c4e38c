#pragma once

// Independent reference implementations and fixtures shared by the unit and
// acceptance tests. Nothing here calls the routines it is used to check.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rumor/corpus.hpp"
#include "rumor/distance.hpp"
#include "rumor/hclust.hpp"

namespace support {

using rumor::Label;
using rumor::Linkage;
using rumor::TokenId;
using rumor::TokenSet;

inline TokenSet token_set(std::initializer_list<TokenId> ids, rumor::DocIndex doc = 0) {
  std::set<TokenId> s(ids);
  return TokenSet{doc, std::vector<TokenId>(s.begin(), s.end())};
}

/// Shared-token count through std::set, unrelated to the library merge.
inline std::size_t shared_count(const TokenSet& a, const TokenSet& b) {
  const std::set<TokenId> sa(a.tokens.begin(), a.tokens.end());
  std::size_t n = 0;
  for (const TokenId t : b.tokens) n += sa.count(t);
  return n;
}

inline double reference_distance(const TokenSet& a, const TokenSet& b) {
  const std::size_t larger = std::max(a.size(), b.size());
  return 1.0 - static_cast<double>(shared_count(a, b)) / static_cast<double>(larger);
}

/// Random token set of size [lo, hi] over ids [0, vocab).
inline TokenSet random_set(std::mt19937_64& rng, std::size_t vocab, std::size_t lo, std::size_t hi,
                           rumor::DocIndex doc = 0) {
  std::uniform_int_distribution<std::size_t> len(lo, hi);
  std::uniform_int_distribution<TokenId> tok(0, static_cast<TokenId>(vocab - 1));
  const std::size_t want = std::min(len(rng), vocab);
  std::set<TokenId> s;
  while (s.size() < want) s.insert(tok(rng));
  return TokenSet{doc, std::vector<TokenId>(s.begin(), s.end())};
}

/// Corpus of near-duplicate families: each document copies one of `families`
/// base sets and replaces a random share of its tokens.
inline std::vector<TokenSet> family_corpus(std::mt19937_64& rng, std::size_t n, std::size_t families,
                                           double edit_rate, std::size_t vocab = 3000) {
  std::vector<TokenSet> bases;
  for (std::size_t f = 0; f < families; ++f) bases.push_back(random_set(rng, vocab, 15, 40));
  std::uniform_int_distribution<std::size_t> pick(0, families - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<TokenId> tok(0, static_cast<TokenId>(vocab - 1));
  std::vector<TokenSet> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::set<TokenId> s;
    for (const TokenId t : bases[pick(rng)].tokens) s.insert(u(rng) < edit_rate ? tok(rng) : t);
    out.push_back(TokenSet{static_cast<rumor::DocIndex>(i), std::vector<TokenId>(s.begin(), s.end())});
  }
  return out;
}

using FullMatrix = std::vector<std::vector<double>>;

inline FullMatrix full_from_sets(const std::vector<TokenSet>& docs) {
  FullMatrix m(docs.size(), std::vector<double>(docs.size(), 0.0));
  for (std::size_t i = 0; i < docs.size(); ++i)
    for (std::size_t j = i + 1; j < docs.size(); ++j) m[i][j] = m[j][i] = reference_distance(docs[i], docs[j]);
  return m;
}

inline FullMatrix random_full(std::mt19937_64& rng, std::size_t n, int levels = 0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> q(0, std::max(levels, 1));
  FullMatrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m[i][j] = m[j][i] = levels > 0 ? static_cast<double>(q(rng)) / levels : u(rng);
  return m;
}

inline rumor::CondensedDistanceMatrix condensed(const FullMatrix& m) {
  rumor::CondensedDistanceMatrix c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) c.ref(i, j) = m[i][j];
  return c;
}

/// Labels renumbered 0.. by first occurrence.
inline std::vector<Label> canonical(const std::vector<Label>& labels) {
  std::map<Label, Label> ids;
  std::vector<Label> out;
  for (const Label l : labels) out.push_back(ids.emplace(l, static_cast<Label>(ids.size())).first->second);
  return out;
}

inline bool same_partition(const std::vector<Label>& a, const std::vector<Label>& b) {
  return a.size() == b.size() && canonical(a) == canonical(b);
}

/// Textbook greedy agglomeration: every step recomputes every cluster-pair
/// linkage from the original distances and merges the closest pair (ties:
/// lexicographically smallest pair of smallest members). Stops when the
/// closest pair is farther than the threshold.
struct NaiveResult {
  std::vector<Label> labels;
  std::vector<double> merge_distances;
};

inline NaiveResult naive_agglomerate(const FullMatrix& d, Linkage linkage, double threshold) {
  const std::size_t n = d.size();
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
  NaiveResult res;
  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double link = linkage == Linkage::Single ? 2.0 : (linkage == Linkage::Complete ? -1.0 : 0.0);
        for (const std::size_t x : clusters[a]) {
          for (const std::size_t y : clusters[b]) {
            if (linkage == Linkage::Single) link = std::min(link, d[x][y]);
            else if (linkage == Linkage::Complete) link = std::max(link, d[x][y]);
            else link += d[x][y];
          }
        }
        if (linkage == Linkage::Average)
          link /= static_cast<double>(clusters[a].size() * clusters[b].size());
        // clusters are kept ordered by smallest member, so (a, b) order is
        // the smallest-member order
        if (link < best) {
          best = link;
          ba = a;
          bb = b;
        }
      }
    }
    if (clusters.size() < 2 || best > threshold) break;
    res.merge_distances.push_back(best);
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    std::sort(clusters[ba].begin(), clusters[ba].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  res.labels.assign(n, 0);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (const std::size_t x : clusters[c]) res.labels[x] = static_cast<Label>(c);
  return res;
}

/// k nearest (distance, position) by scanning every training document.
inline std::vector<std::pair<double, std::size_t>> exhaustive_knn(const std::vector<TokenSet>& train,
                                                                  const TokenSet& query, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < train.size(); ++i) all.emplace_back(reference_distance(query, train[i]), i);
  std::sort(all.begin(), all.end());
  all.resize(std::min(k, all.size()));
  return all;
}

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("rumor-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace support
