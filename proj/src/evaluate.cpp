#include "rumor/evaluate.hpp"

#include <algorithm>
#include <unordered_map>

#include "json.hpp"

namespace rumor {

namespace {

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

PairMetrics metrics_from_counts(std::size_t overlap, std::size_t ground_size, std::size_t predicted_size) {
  PairMetrics m;
  m.precision = predicted_size == 0 ? 0.0 : static_cast<double>(overlap) / static_cast<double>(predicted_size);
  m.recall = static_cast<double>(overlap) / static_cast<double>(ground_size);
  m.f_score = harmonic(m.precision, m.recall);
  return m;
}

struct Group {
  Label label;
  std::size_t first;
  std::vector<std::size_t> members;
};

std::vector<Group> groups_of(const Labeling& labels) {
  std::unordered_map<Label, std::size_t> slot;
  std::vector<Group> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = slot.emplace(labels[i], groups.size());
    if (inserted) groups.push_back({labels[i], i, {}});
    groups[it->second].members.push_back(i);
  }
  return groups;
}

}  // namespace

PairMetrics pair_metrics(std::span<const std::size_t> g, std::span<const std::size_t> l) {
  if (g.empty()) throw InvalidArgument("ground group must be non-empty");
  std::vector<std::size_t> gs(g.begin(), g.end());
  std::vector<std::size_t> ls(l.begin(), l.end());
  std::sort(gs.begin(), gs.end());
  std::sort(ls.begin(), ls.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  std::vector<std::size_t> common;
  std::set_intersection(gs.begin(), gs.end(), ls.begin(), ls.end(), std::back_inserter(common));
  return metrics_from_counts(common.size(), gs.size(), ls.size());
}

EvalReport evaluate(const Labeling& ground, const Labeling& predicted) {
  if (ground.size() != predicted.size()) {
    throw InvalidArgument("labelings differ in length (" + std::to_string(ground.size()) + " vs " +
                          std::to_string(predicted.size()) + ")");
  }
  if (ground.size() == 0) throw InvalidArgument("cannot evaluate an empty labeling");
  const std::size_t k = ground.size();

  std::vector<Group> truth = groups_of(ground);
  std::sort(truth.begin(), truth.end(), [](const Group& a, const Group& b) {
    return a.members.size() != b.members.size() ? a.members.size() > b.members.size() : a.first < b.first;
  });
  struct PredInfo {
    std::size_t size = 0;
    std::size_t first = 0;
  };
  std::unordered_map<Label, PredInfo> pred;
  for (std::size_t i = 0; i < k; ++i) {
    auto [it, inserted] = pred.try_emplace(predicted[i]);
    if (inserted) it->second.first = i;
    ++it->second.size;
  }

  EvalReport report;
  report.documents = k;
  double sp = 0, sr = 0, sf = 0;
  std::size_t covered = 0;
  std::unordered_map<Label, std::size_t> overlap;
  for (const Group& g : truth) {
    overlap.clear();
    for (const std::size_t i : g.members) ++overlap[predicted[i]];
    Label best = 0;
    std::size_t best_overlap = 0;
    const PredInfo* best_info = nullptr;
    for (const auto& [label, count] : overlap) {
      const PredInfo& info = pred.at(label);
      const bool better = best_info == nullptr || count > best_overlap ||
                          (count == best_overlap && (info.size < best_info->size ||
                                                     (info.size == best_info->size && info.first < best_info->first)));
      if (better) {
        best = label;
        best_overlap = count;
        best_info = &info;
      }
    }
    GroupMatch match{g.label, best, g.members.size(), best_info->size, best_overlap,
                     metrics_from_counts(best_overlap, g.members.size(), best_info->size)};
    sp += match.metrics.precision;
    sr += match.metrics.recall;
    sf += match.metrics.f_score;
    report.groups.push_back(match);
    covered += g.members.size();
    if (2 * covered >= k) break;
  }
  const auto count = static_cast<double>(report.groups.size());
  report.groups_evaluated = report.groups.size();
  report.docs_covered = covered;
  report.precision = sp / count;
  report.recall = sr / count;
  report.f_score = sf / count;
  return report;
}

bool partition_equal(const Labeling& a, const Labeling& b) {
  if (a.size() != b.size()) throw InvalidArgument("labelings differ in length");
  std::unordered_map<Label, Label> ab;
  std::unordered_map<Label, Label> ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [ia, new_a] = ab.emplace(a[i], b[i]);
    if (!new_a && ia->second != b[i]) return false;
    auto [ib, new_b] = ba.emplace(b[i], a[i]);
    if (!new_b && ib->second != a[i]) return false;
  }
  return true;
}

std::string eval_report_to_json(const EvalReport& report, int indent) {
  nlohmann::ordered_json j;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f_score"] = report.f_score;
  j["groups_evaluated"] = report.groups_evaluated;
  j["docs_covered"] = report.docs_covered;
  j["documents"] = report.documents;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& g : report.groups) {
    rows.push_back({{"ground_group", g.ground},
                    {"predicted_group", g.predicted},
                    {"ground_size", g.ground_size},
                    {"predicted_size", g.predicted_size},
                    {"overlap", g.overlap},
                    {"precision", g.metrics.precision},
                    {"recall", g.metrics.recall},
                    {"f_score", g.metrics.f_score}});
  }
  j["groups"] = rows;
  return j.dump(indent) + "\n";
}

}  // namespace rumor
