#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rumor/hclust.hpp"
#include "rumor/hybrid.hpp"

namespace rumor {

/// Label file contents: document ids with one label each, in file order.
struct LabelTable {
  std::vector<std::string> ids;
  Labeling labeling;
};

/// Rows doc_id,<column> with a header line.
void write_labels_csv(std::ostream& out, std::span<const std::string> ids, const Labeling& labels,
                      const std::string& column = "cluster_id");

/// Reads a two-column label CSV; a header row is recognised by a
/// non-integer second field. Throws Error on malformed rows or repeated ids.
LabelTable read_labels_csv(std::istream& in);
LabelTable read_labels_csv(const std::filesystem::path& path);

/// JSON text for a trace. Phase timings are the only run-dependent fields.
std::string trace_to_json(const HybridTrace& trace, int indent = 2);

}  // namespace rumor
