#include "rumor/knn.hpp"

#include <algorithm>

#include "rumor/parallel.hpp"

namespace rumor {

KnnModel::KnnModel(std::vector<TokenSet> train_docs, Labeling train_labels, int k)
    : docs_(std::move(train_docs)), labels_(std::move(train_labels)), k_(k) {
  if (docs_.empty()) throw InvalidArgument("k-NN needs a non-empty training set");
  if (k_ < 1) throw InvalidArgument("k must be >= 1");
  if (static_cast<std::size_t>(k_) > docs_.size()) {
    throw InvalidArgument("k = " + std::to_string(k_) + " exceeds the training size " + std::to_string(docs_.size()));
  }
  if (labels_.size() != docs_.size()) throw InvalidArgument("training labels are not aligned with documents");
  index_ = InvertedIndex(docs_);
}

KnnModel fit(std::vector<TokenSet> train_docs, Labeling train_labels, int k) {
  return KnnModel(std::move(train_docs), std::move(train_labels), k);
}

std::vector<Neighbor> KnnModel::nearest(const TokenSet& query) const {
  KnnScratch scratch;
  return nearest(query, scratch);
}

namespace {

struct Candidate {
  double distance;
  DocIndex doc;
  std::size_t shared;
  std::size_t larger;  // max(|query|, |doc|)
};

bool closer(const Candidate& a, const Candidate& b) {
  return a.distance != b.distance ? a.distance < b.distance : a.doc < b.doc;
}

}  // namespace

// Exact search over the query's tokens from rarest to most common, counting
// shared tokens per training document. After the first m tokens a document
// with count c shares at most c + (q - m) tokens, and one never touched at
// most q - m. Documents whose count reaches a new high are verified exactly;
// the search ends once every unverified document is bounded away from the
// k-th best, or all tokens are counted and the counts are exact.
std::vector<Neighbor> KnnModel::nearest(const TokenSet& query, KnnScratch& scratch) const {
  if (query.empty()) throw InvalidArgument("k-NN query with an empty token set");
  const std::size_t n = docs_.size();
  const std::size_t q = query.size();
  const auto k = static_cast<std::size_t>(k_);

  if (scratch.stamp.size() != n) {
    scratch.stamp.assign(n, 0);
    scratch.shared.assign(n, 0);
    scratch.generation = 0;
  }
  if (++scratch.generation == 0) {
    std::fill(scratch.stamp.begin(), scratch.stamp.end(), 0);
    scratch.generation = 1;
  }
  const std::uint32_t gen = scratch.generation;  // stamp == gen: verified
  auto& count = scratch.shared;
  auto& touched = scratch.touched;
  touched.clear();

  std::vector<TokenId> order(query.tokens);
  std::sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
    const auto fa = index_.doc_frequency(a);
    const auto fb = index_.doc_frequency(b);
    return fa != fb ? fa < fb : a < b;
  });
  std::size_t remaining_cost = 0;
  for (const TokenId t : order) remaining_cost += index_.doc_frequency(t);

  std::vector<Candidate> best;  // sorted by closer(), at most k entries
  best.reserve(k + 1);
  auto offer = [&](DocIndex d, std::size_t shared) {
    const std::size_t larger = std::max(q, docs_[d].size());
    const Candidate c{overlap_distance(shared, q, docs_[d].size()), d, shared, larger};
    if (best.size() == k && !closer(c, best.back())) return;
    best.insert(std::upper_bound(best.begin(), best.end(), c, closer), c);
    if (best.size() > k) best.pop_back();
  };
  auto verify = [&](DocIndex d) {
    scratch.stamp[d] = gen;
    offer(d, intersection_size(query.tokens, docs_[d].tokens));
  };
  // Smallest distance document d can still reach after m counted tokens.
  auto lower_bound = [&](DocIndex d, std::size_t m) {
    const std::size_t size_d = docs_[d].size();
    const std::size_t most = std::min({count[d] + (q - m), size_d, q});
    return overlap_distance(most, q, size_d);
  };

  std::uint32_t top_count = 0;
  std::size_t spent = 0;
  std::size_t next_check = 0;
  bool done = false;
  for (std::size_t j = 0; j < q && !done; ++j) {
    const auto posting = index_.postings(order[j]);
    for (const DocIndex d : posting) {
      if (count[d]++ == 0) touched.push_back(d);
      if (scratch.stamp[d] != gen && (best.size() < k || count[d] > top_count)) {
        top_count = std::max(top_count, count[d]);
        verify(d);
      }
    }
    spent += posting.size();
    remaining_cost -= posting.size();
    const std::size_t m = j + 1;
    if (m == q || best.size() < k || spent < next_check) continue;
    const Candidate& kth = best.back();
    // Untouched documents: m / q > (larger - shared) / larger.
    if (m * kth.larger <= (kth.larger - kth.shared) * q) continue;
    std::size_t open = 0;
    for (const DocIndex d : touched)
      if (scratch.stamp[d] != gen && lower_bound(d, m) <= kth.distance) ++open;
    if (open * 2 * q > remaining_cost) {
      next_check = 2 * spent;
      continue;
    }
    for (const DocIndex d : touched)
      if (scratch.stamp[d] != gen && lower_bound(d, m) <= best.back().distance) verify(d);
    done = true;
  }
  if (!done) {
    // Every token counted: counts are exact.
    for (const DocIndex d : touched) {
      if (scratch.stamp[d] == gen) continue;
      scratch.stamp[d] = gen;
      offer(d, count[d]);
    }
  }
  for (const DocIndex d : touched) count[d] = 0;

  std::vector<Neighbor> out;
  out.reserve(k);
  for (const auto& c : best) out.push_back({c.doc, c.distance});
  if (out.size() < k) {
    // Everything left shares no token: distance 1, earliest positions first.
    for (const DocIndex d : touched) scratch.stamp[d] = gen;
    for (DocIndex d = 0; out.size() < k && d < n; ++d) {
      if (scratch.stamp[d] != gen) out.push_back({d, 1.0});
    }
  }
  return out;
}

Label KnnModel::vote(const std::vector<Neighbor>& neighbors) const {
  if (neighbors.size() == 1) return labels_[neighbors.front().doc];
  std::vector<std::pair<Label, int>> tally;
  for (const auto& nb : neighbors) {
    const Label l = labels_[nb.doc];
    auto it = std::find_if(tally.begin(), tally.end(), [l](const auto& p) { return p.first == l; });
    if (it == tally.end()) {
      tally.emplace_back(l, 1);
    } else {
      ++it->second;
    }
  }
  int top = 0;
  for (const auto& [l, c] : tally) top = std::max(top, c);
  // tally is in order of first appearance, i.e. nearest member first.
  for (const auto& [l, c] : tally)
    if (c == top) return l;
  return tally.front().first;
}

Label KnnModel::predict(const TokenSet& query) const {
  KnnScratch scratch;
  return predict(query, scratch);
}

Label KnnModel::predict(const TokenSet& query, KnnScratch& scratch) const { return vote(nearest(query, scratch)); }

std::vector<Label> KnnModel::predict_batch(std::span<const TokenSet> queries, unsigned threads) const {
  std::vector<Label> out(queries.size());
  parallel_for_with_state(
      queries.size(), threads, [] { return KnnScratch{}; },
      [&](KnnScratch& scratch, std::size_t i) { out[i] = predict(queries[i], scratch); }, 32);
  return out;
}

}  // namespace rumor
