#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rumor/common.hpp"
#include "rumor/distance.hpp"

namespace rumor {

enum class Linkage { Complete, Average, Single };

Linkage parse_linkage(std::string_view name);
std::string to_string(Linkage linkage);

/// Cluster labels aligned with document order. kSingletonLabel (-1) marks
/// singleton or not-yet-assigned documents; label values only identify parts.
struct Labeling {
  std::vector<Label> labels;

  std::size_t size() const { return labels.size(); }
  Label operator[](std::size_t i) const { return labels[i]; }
  Label& operator[](std::size_t i) { return labels[i]; }
  friend bool operator==(const Labeling&, const Labeling&) = default;
};

/// Renumbers non-sentinel labels to 0..m-1 in order of first occurrence.
Labeling compact_labels(const Labeling& in);

/// One dendrogram merge. Leaves are clusters 0..n-1; the k-th merge creates
/// cluster n + k. left < right.
struct MergeStep {
  std::size_t left = 0;
  std::size_t right = 0;
  double distance = 0;
  std::size_t new_size = 0;
  friend bool operator==(const MergeStep&, const MergeStep&) = default;
};

struct Clustering {
  std::vector<MergeStep> merges;  // complete hierarchy, ascending distance
  Labeling labeling;              // flat partition at the threshold
};

/// Agglomerative clustering with a distance-threshold cut.
///
/// Complete and average linkage use the nearest-neighbor chain; single linkage
/// uses a minimum spanning tree. Equal linkage distances are resolved in favour
/// of the pair whose smallest-member indices are lexicographically least, so
/// the hierarchy equals the one produced by greedy closest-pair merging under
/// that tie rule. Pairs merge while their linkage distance is <= threshold.
/// Labels are 0..m-1 in order of each cluster's smallest member.
///
/// The matrix is consumed (its storage is reused for linkage updates).
/// threshold must be in (0, 1].
Clustering agglomerate(CondensedDistanceMatrix matrix, Linkage linkage, double threshold);

/// Flat partition after applying the merges with distance <= threshold.
/// Throws InvalidArgument if the merges do not form a valid hierarchy over
/// n leaves.
Labeling cut(const std::vector<MergeStep>& merges, std::size_t n, double threshold);

/// CSV rows left,right,distance,new_size in merge order (with header).
void write_dendrogram_csv(std::ostream& out, const std::vector<MergeStep>& merges);

}  // namespace rumor
