#include "rumor/report.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "rumor/distance.hpp"
#include "rumor/stats.hpp"

namespace rumor {

namespace {

std::map<Label, std::size_t> sizes_by_label(const Labeling& labels) {
  std::map<Label, std::size_t> sizes;
  for (const Label l : labels.labels) ++sizes[l];
  return sizes;
}

GroupSizeSummary summarize_sizes(std::vector<double> sizes) {
  std::sort(sizes.begin(), sizes.end());
  GroupSizeSummary s;
  s.groups = sizes.size();
  s.mean = stats::mean(sizes);
  s.std = stats::population_stddev(sizes);
  s.max = sizes.back();
  s.q3 = stats::quantile_sorted(sizes, 0.75);
  s.q2 = stats::quantile_sorted(sizes, 0.5);
  s.min = sizes.front();
  return s;
}

}  // namespace

GroupStats group_stats(const Labeling& labels, std::span<const std::size_t> size_thresholds) {
  if (labels.size() == 0) throw InvalidArgument("group statistics of an empty labeling");
  const auto by_label = sizes_by_label(labels);
  std::vector<double> all;
  std::vector<double> multi;
  GroupStats out;
  out.documents = labels.size();
  for (const auto& [label, size] : by_label) {
    all.push_back(static_cast<double>(size));
    if (size >= 2) multi.push_back(static_cast<double>(size));
    else ++out.singletons;
  }
  out.all = summarize_sizes(all);
  if (!multi.empty()) out.at_least_two = summarize_sizes(multi);
  for (const std::size_t threshold : size_thresholds) {
    const auto count = static_cast<std::size_t>(
        std::count_if(all.begin(), all.end(), [&](double s) { return s >= static_cast<double>(threshold); }));
    out.groups_at_least.emplace_back(threshold, count);
  }
  return out;
}

std::vector<ClusterSize> top_clusters(const Labeling& labels, std::size_t top, std::size_t min_size) {
  std::vector<ClusterSize> out;
  for (const auto& [label, size] : sizes_by_label(labels))
    if (size >= min_size) out.push_back({label, size});
  std::stable_sort(out.begin(), out.end(), [](const ClusterSize& a, const ClusterSize& b) { return a.size > b.size; });
  if (top != 0 && out.size() > top) out.resize(top);
  return out;
}

// --- time series ---------------------------------------------------------

TimeBin parse_time_bin(std::string_view name) {
  if (name == "day") return TimeBin::Day;
  if (name == "week") return TimeBin::Week;
  throw InvalidArgument("unknown time bin '" + std::string(name) + "' (expected day or week)");
}

std::vector<DatedCount> find_peaks(std::span<const DatedCount> bins, double quantile) {
  std::vector<double> nonzero;
  for (const auto& b : bins)
    if (b.count > 0) nonzero.push_back(static_cast<double>(b.count));
  std::vector<DatedCount> peaks;
  if (nonzero.empty()) return peaks;
  std::sort(nonzero.begin(), nonzero.end());
  const double floor = stats::quantile_sorted(nonzero, quantile);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const std::size_t c = bins[i].count;
    if (c == 0 || static_cast<double>(c) < floor) continue;
    const bool above_left = i == 0 || c > bins[i - 1].count;
    const bool above_right = i + 1 == bins.size() || c > bins[i + 1].count;
    if (above_left && above_right) peaks.push_back(bins[i]);
  }
  return peaks;
}

std::vector<ClusterSeries> timeseries(std::span<const Document> docs, const Labeling& labels,
                                      const SeriesOptions& options) {
  using std::chrono::days;
  using std::chrono::sys_days;
  if (docs.size() != labels.size()) throw InvalidArgument("labels are not aligned with documents");
  if (std::none_of(docs.begin(), docs.end(), [](const Document& d) { return d.timestamp.has_value(); })) {
    throw InvalidArgument("no document carries a timestamp");
  }
  const std::set<Label> wanted(options.clusters.begin(), options.clusters.end());
  const days step{options.bin == TimeBin::Day ? 1 : 7};

  std::map<Label, std::map<sys_days, std::size_t>> counts;
  std::map<Label, std::size_t> missing;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const Label l = labels[i];
    if (!wanted.empty() && !wanted.contains(l)) continue;
    if (!docs[i].timestamp) {
      ++missing[l];
      counts[l];
      continue;
    }
    sys_days day = local_day(docs[i].timestamp->epoch_seconds, options.utc_offset_minutes);
    if (options.bin == TimeBin::Week) day = week_start(day);
    ++counts[l][day];
  }

  std::vector<ClusterSeries> out;
  for (const auto& [label, by_day] : counts) {
    ClusterSeries s;
    s.cluster = label;
    s.untimestamped = missing.count(label) ? missing.at(label) : 0;
    if (!by_day.empty()) {
      for (sys_days d = by_day.begin()->first; d <= by_day.rbegin()->first; d += step) {
        const auto it = by_day.find(d);
        const std::size_t c = it == by_day.end() ? 0 : it->second;
        s.bins.push_back({d, c});
        s.total += c;
      }
    }
    s.peaks = find_peaks(s.bins, options.peak_quantile);
    out.push_back(std::move(s));
  }
  return out;
}

void write_timeseries_csv(std::ostream& out, std::span<const ClusterSeries> series) {
  out << "cluster_id,date,count\n";
  for (const auto& s : series)
    for (const auto& b : s.bins) out << s.cluster << ',' << format_date(b.date) << ',' << b.count << '\n';
}

// --- change logs ---------------------------------------------------------

ChangeReference parse_change_reference(std::string_view name) {
  if (name == "earliest") return ChangeReference::Earliest;
  if (name == "medoid") return ChangeReference::Medoid;
  throw InvalidArgument("unknown change-log reference '" + std::string(name) + "' (expected earliest or medoid)");
}

ChangeLog change_log(std::span<const Document> docs, std::span<const TokenSet> tokens, ChangeReference reference,
                     const TokenInterner& interner, int utc_offset_minutes) {
  if (docs.size() != tokens.size()) throw InvalidArgument("change log inputs are not aligned");
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < docs.size(); ++i)
    if (docs[i].timestamp) order.push_back(i);
  if (order.size() < 2) throw InvalidArgument("change log needs at least two timestamped documents");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return docs[a].timestamp->epoch_seconds < docs[b].timestamp->epoch_seconds;
  });

  std::size_t ref_pos = 0;  // position within `order`
  if (reference == ChangeReference::Medoid) {
    const std::size_t m = order.size();
    std::vector<double> sums(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        const double d = token_distance(tokens[order[a]], tokens[order[b]]);
        sums[a] += d;
        sums[b] += d;
      }
    }
    ref_pos = static_cast<std::size_t>(std::min_element(sums.begin(), sums.end()) - sums.begin());
  }
  const std::vector<TokenId>& ref = tokens[order[ref_pos]].tokens;

  ChangeLog log;
  log.reference_doc_id = docs[order[ref_pos]].id;
  // Signature of the previous document in time; the reference itself and
  // documents equal to it have the empty signature.
  std::pair<std::vector<TokenId>, std::vector<TokenId>> previous;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    const std::vector<TokenId>& cur = tokens[i].tokens;
    std::vector<TokenId> added, removed;
    std::set_difference(cur.begin(), cur.end(), ref.begin(), ref.end(), std::back_inserter(added));
    std::set_difference(ref.begin(), ref.end(), cur.begin(), cur.end(), std::back_inserter(removed));
    const bool repeat = previous.first == added && previous.second == removed;
    previous = {added, removed};
    if (pos == ref_pos || (added.empty() && removed.empty()) || repeat) continue;
    ChangeLogEntry e;
    e.first_seen = *docs[i].timestamp;
    e.date = format_date(local_day(e.first_seen.epoch_seconds, utc_offset_minutes));
    for (const TokenId t : added) e.added.push_back(interner.token(t));
    for (const TokenId t : removed) e.removed.push_back(interner.token(t));
    std::sort(e.added.begin(), e.added.end());
    std::sort(e.removed.begin(), e.removed.end());
    e.doc_id = docs[i].id;
    log.entries.push_back(std::move(e));
  }
  return log;
}

// --- serialization -------------------------------------------------------

namespace {

nlohmann::ordered_json summary_json(const GroupSizeSummary& s) {
  return {{"groups", s.groups}, {"mean", s.mean}, {"std", s.std}, {"max", s.max},
          {"q3", s.q3},         {"q2", s.q2},     {"min", s.min}};
}

}  // namespace

std::string group_stats_to_json(const GroupStats& stats, std::span<const ClusterSize> clusters, int indent) {
  nlohmann::ordered_json j;
  j["documents"] = stats.documents;
  j["groups"] = stats.all.groups;
  j["singletons"] = stats.singletons;
  j["all_groups"] = summary_json(stats.all);
  j["groups_with_at_least_2"] = stats.at_least_two ? summary_json(*stats.at_least_two) : nlohmann::ordered_json();
  auto thresholds = nlohmann::ordered_json::array();
  for (const auto& [t, c] : stats.groups_at_least) thresholds.push_back({{"min_size", t}, {"groups", c}});
  j["groups_at_least"] = thresholds;
  auto list = nlohmann::ordered_json::array();
  for (const auto& c : clusters) list.push_back({{"cluster_id", c.cluster}, {"size", c.size}});
  j["clusters"] = list;
  return j.dump(indent) + "\n";
}

std::string change_log_to_json(const ChangeLog& log, Label cluster, int indent) {
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : log.entries) {
    entries.push_back({{"cluster_id", cluster},
                       {"reference_doc_id", log.reference_doc_id},
                       {"date", e.date},
                       {"first_seen", format_rfc3339(e.first_seen)},
                       {"added", e.added},
                       {"removed", e.removed},
                       {"doc_id", e.doc_id}});
  }
  return entries.dump(indent) + "\n";
}

}  // namespace rumor
