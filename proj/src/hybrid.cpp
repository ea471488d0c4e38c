#include "rumor/hybrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "rumor/random.hpp"

namespace rumor {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<TokenSet> gather(std::span<const TokenSet> corpus, std::span<const std::size_t> indices) {
  std::vector<TokenSet> out;
  out.reserve(indices.size());
  for (const std::size_t i : indices) out.push_back(corpus[i]);
  return out;
}

std::vector<std::size_t> class_sizes(const Labeling& labels) {
  std::vector<std::size_t> sizes;
  for (const Label l : labels.labels) {
    if (l < 0) continue;
    if (static_cast<std::size_t>(l) >= sizes.size()) sizes.resize(static_cast<std::size_t>(l) + 1, 0);
    ++sizes[static_cast<std::size_t>(l)];
  }
  return sizes;
}

}  // namespace

void HybridConfig::validate() const {
  if (!(train_portion > 0.0 && train_portion <= 1.0)) throw InvalidArgument("train portion must be in (0, 1]");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("distance threshold must be in (0, 1]");
  if (k < 1) throw InvalidArgument("k must be >= 1");
}

Split sample_split(std::size_t n, double train_portion, std::uint64_t seed) {
  if (!(train_portion > 0.0 && train_portion <= 1.0)) throw InvalidArgument("train portion must be in (0, 1]");
  if (n == 0) throw InvalidArgument("cannot split an empty corpus");
  auto m = static_cast<std::size_t>(std::llround(train_portion * static_cast<double>(n)));
  if (n >= 2) m = std::clamp<std::size_t>(m, 2, n);
  else m = 1;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  // Partial Fisher-Yates: the first m slots are a uniform sample.
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(perm[i], perm[j]);
  }
  Split s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m));
  s.rest.assign(perm.begin() + static_cast<std::ptrdiff_t>(m), perm.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.rest.begin(), s.rest.end());
  return s;
}

Labeling relabel_singletons(const Labeling& labels) {
  std::unordered_map<Label, std::size_t> counts;
  for (const Label l : labels.labels) {
    if (l == kSingletonLabel) throw InvalidArgument("labels passed to relabel_singletons already hold the sentinel");
    ++counts[l];
  }
  Labeling out = labels;
  for (auto& l : out.labels)
    if (counts[l] == 1) l = kSingletonLabel;
  return out;
}

Labeling merge_labelings(const Labeling& base, std::span<const std::size_t> residual_indices,
                         const Labeling& residual_labels) {
  if (residual_indices.size() != residual_labels.size()) {
    throw InvalidArgument("residual indices and labels differ in length");
  }
  Label max_base = kSingletonLabel;
  std::size_t sentinels = 0;
  for (const Label l : base.labels) {
    if (l == kSingletonLabel) ++sentinels;
    else max_base = std::max(max_base, l);
  }
  if (sentinels != residual_indices.size()) {
    throw InvalidArgument("residual indices do not match the sentinel positions of the base labeling");
  }
  const Label offset = max_base + 1;
  Labeling out = base;
  for (std::size_t r = 0; r < residual_indices.size(); ++r) {
    const std::size_t pos = residual_indices[r];
    if (pos >= base.size() || base[pos] != kSingletonLabel || (r > 0 && residual_indices[r - 1] >= pos)) {
      throw InvalidArgument("residual index " + std::to_string(pos) + " is not an ascending sentinel position");
    }
    if (residual_labels[r] < 0) throw InvalidArgument("residual labels must be non-negative");
    out[pos] = residual_labels[r] + offset;
  }
  return out;
}

Labeling pure_cluster(std::span<const TokenSet> corpus, double threshold, Linkage linkage, unsigned threads) {
  if (corpus.size() == 1) return Labeling{{0}};
  return agglomerate(distance_matrix(corpus, threads), linkage, threshold).labeling;
}

HybridResult hybrid_cluster(std::span<const TokenSet> corpus, const HybridConfig& config, unsigned threads) {
  config.validate();
  const std::size_t n = corpus.size();
  if (n < 2) throw InvalidArgument("hybrid clustering needs at least two documents");
  const auto started = Clock::now();
  HybridResult result;
  HybridTrace& trace = result.trace;

  // 1. sample
  auto t = Clock::now();
  Split split = sample_split(n, config.train_portion, config.seed);
  trace.seconds.split = seconds_since(t);

  // 2-3. cluster the sample
  std::vector<TokenSet> train = gather(corpus, split.train);
  t = Clock::now();
  CondensedDistanceMatrix train_matrix = distance_matrix(train, threads);
  trace.seconds.train_matrix = seconds_since(t);
  t = Clock::now();
  const Labeling train_labels = agglomerate(std::move(train_matrix), config.linkage, config.threshold).labeling;
  trace.seconds.train_cluster = seconds_since(t);
  trace.initial_partition_sizes = class_sizes(train_labels);

  // 4. singletons become the sentinel class
  const Labeling relabeled = relabel_singletons(train_labels);
  trace.singleton_count_after_relabel =
      static_cast<std::size_t>(std::count(relabeled.labels.begin(), relabeled.labels.end(), kSingletonLabel));

  // 5-6. classify the rest and assemble the full labeling
  Labeling full;
  full.labels.assign(n, kSingletonLabel);
  for (std::size_t i = 0; i < split.train.size(); ++i) full[split.train[i]] = relabeled[i];
  if (!split.rest.empty()) {
    t = Clock::now();
    const KnnModel model = fit(std::move(train), relabeled, config.k);
    trace.seconds.knn_fit = seconds_since(t);
    t = Clock::now();
    const std::vector<TokenSet> rest = gather(corpus, split.rest);
    const std::vector<Label> predicted = model.predict_batch(rest, threads);
    trace.seconds.knn_predict = seconds_since(t);
    std::map<Label, std::size_t> assigned;
    for (std::size_t i = 0; i < split.rest.size(); ++i) {
      full[split.rest[i]] = predicted[i];
      ++assigned[predicted[i]];
    }
    trace.knn_assigned_counts.assign(assigned.begin(), assigned.end());
  }

  // 7-9. re-cluster everything still carrying the sentinel
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < n; ++i)
    if (full[i] == kSingletonLabel) pool.push_back(i);
  trace.residual_pool_size = pool.size();
  Labeling residual;
  if (pool.size() == 1) {
    residual.labels = {0};
  } else if (pool.size() >= 2) {
    const std::vector<TokenSet> pool_docs = gather(corpus, pool);
    t = Clock::now();
    CondensedDistanceMatrix pool_matrix = distance_matrix(pool_docs, threads);
    trace.seconds.residual_matrix = seconds_since(t);
    t = Clock::now();
    residual = agglomerate(std::move(pool_matrix), config.linkage, config.threshold).labeling;
    trace.seconds.residual_cluster = seconds_since(t);
  }
  trace.residual_partition_sizes = class_sizes(residual);

  t = Clock::now();
  result.labeling = compact_labels(merge_labelings(full, pool, residual));
  trace.seconds.merge = seconds_since(t);
  trace.train_indices = std::move(split.train);
  trace.seconds.total = seconds_since(started);
  return result;
}

}  // namespace rumor
