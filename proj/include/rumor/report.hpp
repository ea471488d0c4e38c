#pragma once

#include <chrono>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rumor/corpus.hpp"
#include "rumor/hclust.hpp"

namespace rumor {

// --- group sizes ---------------------------------------------------------

struct GroupSizeSummary {
  std::size_t groups = 0;
  double mean = 0;
  double std = 0;  // population
  double max = 0;
  double q3 = 0;
  double q2 = 0;
  double min = 0;
};

struct GroupStats {
  std::size_t documents = 0;
  GroupSizeSummary all;
  std::optional<GroupSizeSummary> at_least_two;  // absent when every group is a singleton
  std::size_t singletons = 0;
  std::vector<std::pair<std::size_t, std::size_t>> groups_at_least;  // (threshold, count)
};

inline constexpr std::size_t kDefaultSizeThresholdValues[] = {500, 1000};
inline constexpr std::span<const std::size_t> kDefaultSizeThresholds{kDefaultSizeThresholdValues};

/// Size statistics over all groups and over groups with >= 2 members.
GroupStats group_stats(const Labeling& labels, std::span<const std::size_t> size_thresholds = kDefaultSizeThresholds);

struct ClusterSize {
  Label cluster = 0;
  std::size_t size = 0;
};

/// Clusters with size >= min_size, largest first (ties: smaller label), at
/// most `top` of them (0 = no limit).
std::vector<ClusterSize> top_clusters(const Labeling& labels, std::size_t top, std::size_t min_size);

// --- time series ---------------------------------------------------------

enum class TimeBin { Day, Week };

TimeBin parse_time_bin(std::string_view name);

struct DatedCount {
  std::chrono::sys_days date;
  std::size_t count = 0;
  friend bool operator==(const DatedCount&, const DatedCount&) = default;
};

struct ClusterSeries {
  Label cluster = 0;
  std::vector<DatedCount> bins;   // contiguous from first to last populated bin
  std::size_t total = 0;          // timestamped members (= sum of bins)
  std::size_t untimestamped = 0;  // members without a timestamp
  std::vector<DatedCount> peaks;
};

struct SeriesOptions {
  TimeBin bin = TimeBin::Day;
  int utc_offset_minutes = 8 * 60;
  std::vector<Label> clusters;  // empty = every cluster
  double peak_quantile = 0.9;
};

/// Per-cluster report counts by calendar bin at the configured offset.
/// Peaks are strict local maxima whose count is at least the peak quantile
/// of the cluster's non-empty bins. labels are aligned with docs.
std::vector<ClusterSeries> timeseries(std::span<const Document> docs, const Labeling& labels,
                                      const SeriesOptions& options = {});

/// Strict local maxima of `bins` with count >= quantile of non-zero counts.
std::vector<DatedCount> find_peaks(std::span<const DatedCount> bins, double quantile);

void write_timeseries_csv(std::ostream& out, std::span<const ClusterSeries> series);

// --- change logs ---------------------------------------------------------

enum class ChangeReference { Earliest, Medoid };

ChangeReference parse_change_reference(std::string_view name);

struct ChangeLogEntry {
  Timestamp first_seen;
  std::string date;  // local calendar date of first_seen
  std::vector<std::string> added;    // sorted
  std::vector<std::string> removed;  // sorted
  std::string doc_id;                // first document showing this delta
};

struct ChangeLog {
  std::string reference_doc_id;
  std::vector<ChangeLogEntry> entries;
};

/// Token-level deltas of a cluster's documents against a reference document.
/// Documents are visited in timestamp order (untimestamped ones ignored);
/// a signature (added, removed) is reported when it differs from the previous
/// document's. docs and tokens are aligned members of one cluster.
ChangeLog change_log(std::span<const Document> docs, std::span<const TokenSet> tokens, ChangeReference reference,
                     const TokenInterner& interner, int utc_offset_minutes = 8 * 60);

// --- serialization -------------------------------------------------------

std::string group_stats_to_json(const GroupStats& stats, std::span<const ClusterSize> clusters, int indent = 2);
std::string change_log_to_json(const ChangeLog& log, Label cluster, int indent = 2);

}  // namespace rumor
