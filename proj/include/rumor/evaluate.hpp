#pragma once

#include <span>
#include <string>
#include <vector>

#include "rumor/hclust.hpp"

namespace rumor {

struct PairMetrics {
  double precision = 0;
  double recall = 0;
  double f_score = 0;
};

/// Precision and recall of predicted group `l` against ground group `g`
/// (document index sets). g must be non-empty; precision is 0 for empty l.
PairMetrics pair_metrics(std::span<const std::size_t> g, std::span<const std::size_t> l);

struct GroupMatch {
  Label ground = 0;
  Label predicted = 0;
  std::size_t ground_size = 0;
  std::size_t predicted_size = 0;
  std::size_t overlap = 0;
  PairMetrics metrics;
};

struct EvalReport {
  double precision = 0;
  double recall = 0;
  double f_score = 0;
  std::size_t groups_evaluated = 0;
  std::size_t docs_covered = 0;
  std::size_t documents = 0;
  std::vector<GroupMatch> groups;
};

/// Matched-group evaluation. Ground groups are visited largest first (ties:
/// smaller first member); each is scored against the predicted group with
/// the largest overlap (ties: smaller predicted group, then smaller first
/// member). Visiting stops once the visited ground groups cover at least half
/// of the documents; the reported scores are means over the visited groups.
EvalReport evaluate(const Labeling& ground, const Labeling& predicted);

/// True when both labelings induce the same partition.
bool partition_equal(const Labeling& a, const Labeling& b);

std::string eval_report_to_json(const EvalReport& report, int indent = 2);

}  // namespace rumor
