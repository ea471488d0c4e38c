#include "rumor/hclust.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "rumor/csv.hpp"
#include "rumor/format.hpp"

namespace rumor {

Linkage parse_linkage(std::string_view name) {
  if (name == "complete") return Linkage::Complete;
  if (name == "average") return Linkage::Average;
  if (name == "single") return Linkage::Single;
  throw InvalidArgument("unknown linkage '" + std::string(name) + "' (expected complete, average or single)");
}

std::string to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::Complete: return "complete";
    case Linkage::Average: return "average";
    case Linkage::Single: return "single";
  }
  return "?";
}

Labeling compact_labels(const Labeling& in) {
  std::unordered_map<Label, Label> remap;
  Labeling out;
  out.labels.reserve(in.size());
  for (const Label l : in.labels) {
    if (l == kSingletonLabel) {
      out.labels.push_back(l);
      continue;
    }
    auto [it, inserted] = remap.emplace(l, static_cast<Label>(remap.size()));
    out.labels.push_back(it->second);
  }
  return out;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Keeps the smaller root so that roots are smallest members.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

Labeling labels_from_sets(DisjointSets& sets, std::size_t n) {
  Labeling out;
  out.labels.assign(n, kSingletonLabel);
  std::vector<Label> by_root(n, kSingletonLabel);
  Label next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = sets.find(i);
    if (by_root[r] == kSingletonLabel) by_root[r] = next++;
    out.labels[i] = by_root[r];
  }
  return out;
}

struct SlotMerge {
  std::size_t a;  // surviving slot (smaller index)
  std::size_t b;
  double distance;
};

/// Turns slot-level merges (already in a dependency-respecting order) into
/// dendrogram steps with fresh cluster ids.
std::vector<MergeStep> to_merge_steps(const std::vector<SlotMerge>& slot_merges, std::size_t n) {
  DisjointSets sets(n);
  std::vector<std::size_t> cluster_of_root(n);
  std::vector<std::size_t> size_of_root(n, 1);
  std::iota(cluster_of_root.begin(), cluster_of_root.end(), 0);
  std::vector<MergeStep> steps;
  steps.reserve(slot_merges.size());
  for (const auto& m : slot_merges) {
    const std::size_t ra = sets.find(m.a);
    const std::size_t rb = sets.find(m.b);
    const std::size_t ca = cluster_of_root[ra];
    const std::size_t cb = cluster_of_root[rb];
    const std::size_t size = size_of_root[ra] + size_of_root[rb];
    steps.push_back({std::min(ca, cb), std::max(ca, cb), m.distance, size});
    sets.unite(ra, rb);
    const std::size_t r = sets.find(ra);
    cluster_of_root[r] = n + steps.size() - 1;
    size_of_root[r] = size;
  }
  return steps;
}

/// Nearest-neighbor chain for reducible linkages. Slots keep the smallest
/// member index of their cluster, so "smaller slot" is the tie rule.
std::vector<SlotMerge> nn_chain(CondensedDistanceMatrix& m, Linkage linkage) {
  const std::size_t n = m.n();
  std::vector<SlotMerge> merges;
  if (n < 2) return merges;
  merges.reserve(n - 1);

  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);
  std::vector<std::size_t> sizes(n, 1);
  std::vector<std::size_t> chain;
  chain.reserve(n);
  std::span<double> v = m.values();

  auto dist = [&](std::size_t i, std::size_t j) {
    return i < j ? v[CondensedDistanceMatrix::offset(n, i, j)] : v[CondensedDistanceMatrix::offset(n, j, i)];
  };

  while (active.size() > 1) {
    if (chain.empty()) chain.push_back(active.front());
    std::size_t x = 0;
    std::size_t y = 0;
    double best = 0;
    for (;;) {
      x = chain.back();
      best = std::numeric_limits<double>::infinity();
      y = x;
      // Active slots are scanned in ascending order, so the first strict
      // improvement wins ties in favour of the smaller slot.
      for (const std::size_t c : active) {
        if (c == x) continue;
        const double d = dist(x, c);
        if (d < best) {
          best = d;
          y = c;
        }
      }
      if (chain.size() >= 2 && y == chain[chain.size() - 2]) break;
      chain.push_back(y);
    }
    chain.pop_back();
    chain.pop_back();

    const std::size_t a = std::min(x, y);
    const std::size_t b = std::max(x, y);
    merges.push_back({a, b, best});

    const double na = static_cast<double>(sizes[a]);
    const double nb = static_cast<double>(sizes[b]);
    for (const std::size_t c : active) {
      if (c == a || c == b) continue;
      const double da = dist(a, c);
      const double db = dist(b, c);
      double nd;
      if (linkage == Linkage::Complete) {
        nd = std::max(da, db);
      } else {
        // Weighted mean, clamped to its mathematical range so rounding can
        // never break reducibility.
        nd = std::clamp((na * da + nb * db) / (na + nb), std::min(da, db), std::max(da, db));
      }
      if (nd < best) throw Error("linkage update decreased below the merge distance");
      (a < c ? v[CondensedDistanceMatrix::offset(n, a, c)] : v[CondensedDistanceMatrix::offset(n, c, a)]) = nd;
    }
    sizes[a] += sizes[b];
    active.erase(std::lower_bound(active.begin(), active.end(), b));
  }

  std::stable_sort(merges.begin(), merges.end(),
                   [](const SlotMerge& l, const SlotMerge& r) { return l.distance < r.distance; });
  return merges;
}

/// Prim's algorithm; the sorted tree edges are the single-linkage merges.
std::vector<SlotMerge> mst_single(const CondensedDistanceMatrix& m) {
  const std::size_t n = m.n();
  std::vector<SlotMerge> edges;
  if (n < 2) return edges;
  edges.reserve(n - 1);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  std::vector<char> in_tree(n, 0);
  std::size_t cur = 0;
  in_tree[0] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    double next_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
      if (in_tree[c]) continue;
      const double d = m.at(cur, c);
      if (d < best[c]) {
        best[c] = d;
        from[c] = cur;
      }
      if (best[c] < next_d) {
        next_d = best[c];
        next = c;
      }
    }
    in_tree[next] = 1;
    edges.push_back({std::min(from[next], next), std::max(from[next], next), next_d});
    cur = next;
  }
  std::stable_sort(edges.begin(), edges.end(), [](const SlotMerge& l, const SlotMerge& r) {
    if (l.distance != r.distance) return l.distance < r.distance;
    if (l.a != r.a) return l.a < r.a;
    return l.b < r.b;
  });
  return edges;
}

}  // namespace

Clustering agglomerate(CondensedDistanceMatrix matrix, Linkage linkage, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("distance threshold must be in (0, 1]");
  const std::size_t n = matrix.n();
  Clustering out;
  if (n == 0) return out;
  const auto slot_merges = linkage == Linkage::Single ? mst_single(matrix) : nn_chain(matrix, linkage);
  out.merges = to_merge_steps(slot_merges, n);

  DisjointSets sets(n);
  for (const auto& m : slot_merges) {
    if (m.distance > threshold) break;
    sets.unite(m.a, m.b);
  }
  out.labeling = labels_from_sets(sets, n);
  return out;
}

Labeling cut(const std::vector<MergeStep>& merges, std::size_t n, double threshold) {
  if (n == 0) {
    if (!merges.empty()) throw InvalidArgument("merges given for an empty hierarchy");
    return {};
  }
  if (merges.size() > n - 1) throw InvalidArgument("more merges than a hierarchy over n leaves allows");
  std::vector<std::size_t> rep(n + merges.size());
  std::vector<std::size_t> size(n + merges.size(), 1);
  std::vector<char> used(n + merges.size(), 0);
  std::iota(rep.begin(), rep.begin() + static_cast<std::ptrdiff_t>(n), 0);
  DisjointSets sets(n);
  for (std::size_t k = 0; k < merges.size(); ++k) {
    const auto& m = merges[k];
    const std::size_t limit = n + k;
    if (m.left >= limit || m.right >= limit || m.left == m.right) {
      throw InvalidArgument("merge " + std::to_string(k) + " refers to a cluster that does not exist yet");
    }
    if (used[m.left] || used[m.right]) {
      throw InvalidArgument("merge " + std::to_string(k) + " reuses an already merged cluster");
    }
    if (m.new_size != size[m.left] + size[m.right]) {
      throw InvalidArgument("merge " + std::to_string(k) + " has an inconsistent size");
    }
    used[m.left] = used[m.right] = 1;
    rep[limit] = rep[m.left];
    size[limit] = m.new_size;
    if (m.distance <= threshold) sets.unite(rep[m.left], rep[m.right]);
  }
  return labels_from_sets(sets, n);
}

void write_dendrogram_csv(std::ostream& out, const std::vector<MergeStep>& merges) {
  out << "left,right,distance,new_size\n";
  for (const auto& m : merges) {
    out << m.left << ',' << m.right << ',' << format_double(m.distance) << ',' << m.new_size << '\n';
  }
}

}  // namespace rumor
