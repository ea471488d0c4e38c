#include "rumor/labels_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <unordered_set>

#include "json.hpp"
#include "rumor/csv.hpp"

namespace rumor {

void write_labels_csv(std::ostream& out, std::span<const std::string> ids, const Labeling& labels,
                      const std::string& column) {
  if (ids.size() != labels.size()) throw InvalidArgument("label rows are not aligned with document ids");
  out << "doc_id," << column << '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) out << csv::escape(ids[i]) << ',' << labels[i] << '\n';
}

namespace {

bool parse_label(const std::string& s, Label& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

LabelTable read_labels_csv(std::istream& in) {
  const auto records = csv::read(in);
  LabelTable table;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != 2) {
      throw Error("line " + std::to_string(rec.line) + ": expected 2 fields, found " +
                  std::to_string(rec.fields.size()));
    }
    Label l = 0;
    if (!parse_label(rec.fields[1], l)) {
      if (r == 0) continue;  // header
      throw Error("line " + std::to_string(rec.line) + ": label '" + rec.fields[1] + "' is not an integer");
    }
    if (!seen.insert(rec.fields[0]).second) {
      throw Error("line " + std::to_string(rec.line) + ": duplicate document id \"" + rec.fields[0] + "\"");
    }
    table.ids.push_back(rec.fields[0]);
    table.labeling.labels.push_back(l);
  }
  return table;
}

LabelTable read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open label file " + path.string());
  return read_labels_csv(in);
}

std::string trace_to_json(const HybridTrace& trace, int indent) {
  nlohmann::ordered_json j;
  j["train_size"] = trace.train_indices.size();
  j["train_indices"] = trace.train_indices;
  j["initial_partition_sizes"] = trace.initial_partition_sizes;
  j["singleton_count_after_relabel"] = trace.singleton_count_after_relabel;
  auto assigned = nlohmann::ordered_json::array();
  for (const auto& [label, count] : trace.knn_assigned_counts) assigned.push_back({{"label", label}, {"count", count}});
  j["knn_assigned_counts"] = assigned;
  j["residual_pool_size"] = trace.residual_pool_size;
  j["residual_partition_sizes"] = trace.residual_partition_sizes;
  const auto& s = trace.seconds;
  j["phase_seconds"] = {{"split", s.split},
                        {"train_matrix", s.train_matrix},
                        {"train_cluster", s.train_cluster},
                        {"knn_fit", s.knn_fit},
                        {"knn_predict", s.knn_predict},
                        {"residual_matrix", s.residual_matrix},
                        {"residual_cluster", s.residual_cluster},
                        {"merge", s.merge},
                        {"total", s.total}};
  return j.dump(indent) + "\n";
}

}  // namespace rumor
