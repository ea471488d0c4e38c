#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rumor/corpus.hpp"
#include "rumor/hclust.hpp"
#include "rumor/report.hpp"

namespace rumor {

/// Parameters of a synthetic rumor corpus with known narrative labels.
struct SynthConfig {
  std::size_t n_templates = 500;
  /// Exact document count; 0 keeps the raw power-law copy counts.
  std::size_t n_docs = 10000;
  std::size_t template_min = 30;
  std::size_t template_max = 80;
  std::size_t vocab_size = 20000;
  double zipf_exponent = 1.0;
  double copies_min = 1;
  double copies_max = 2546;
  double copies_exponent = 2.0;
  double mutation_rate = 0.15;
  double merge_fraction = 0.02;
  Timestamp window_start = parse_rfc3339("2020-01-01T00:00:00+08:00");
  Timestamp window_end = parse_rfc3339("2020-07-31T23:59:59+08:00");
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthCorpus {
  std::vector<Document> documents;
  Labeling truth;  // template id; merged documents get ids past the templates
};

/// Templates are drawn from a Zipf vocabulary without replacement; each copy
/// receives round(rate * length) random edits (substitution, insertion or
/// deletion with equal probability) and a timestamp around a per-template
/// peak. A merge_fraction of documents concatenate two distinct templates.
SynthCorpus generate(const SynthConfig& config);

/// Token spelling used by the generator for vocabulary rank r.
std::string synth_token(std::size_t rank);

struct SynthDescription {
  CorpusStats corpus;  // whitespace tokens, no filtering
  GroupStats groups;   // over the truth labels
};

SynthDescription describe(const SynthCorpus& corpus);

/// A scripted rumor: a base token sequence and edits applied cumulatively at
/// fixed instants. Copies of each version are spaced `spacing_seconds` apart.
struct ScriptedEdit {
  Timestamp at;
  std::vector<std::string> remove;
  std::vector<std::string> add;
};

struct ScriptedScenario {
  std::vector<std::string> base;
  Timestamp start;
  std::vector<ScriptedEdit> edits;
  std::size_t copies_per_version = 5;
  std::int64_t spacing_seconds = 3600;
};

/// Documents for each scenario in time order; truth = scenario index.
/// Document ids are "<prefix><scenario>-<n>".
SynthCorpus generate_scripted(const std::vector<ScriptedScenario>& scenarios, const std::string& id_prefix = "s");

/// A reproducible set of scripted scenarios built from the synthetic
/// vocabulary: each has two substitutions a few days apart.
std::vector<ScriptedScenario> demo_scenarios(std::size_t count, std::uint64_t seed);

/// doc_id,template_id rows.
void write_truth_csv(std::ostream& out, const SynthCorpus& corpus);

}  // namespace rumor
