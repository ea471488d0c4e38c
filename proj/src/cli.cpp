#include "rumor/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "json.hpp"
#include "rumor/bench.hpp"
#include "rumor/corpus.hpp"
#include "rumor/evaluate.hpp"
#include "rumor/hybrid.hpp"
#include "rumor/labels_io.hpp"
#include "rumor/parallel.hpp"
#include "rumor/report.hpp"
#include "rumor/synthgen.hpp"

namespace rumor::cli {
namespace {

namespace fs = std::filesystem;

/// Invalid flag values or inconsistent inputs detected before any work.
class UsageError : public Error {
 public:
  using Error::Error;
};

// --- shared option groups --------------------------------------------------

struct PreprocessFlags {
  std::string format = "auto";
  std::string tokenizer = "whitespace";
  int ngram = 2;
  std::string lexicon;
  std::string stopwords;
  int min_tokens = 20;
  std::string charset = "keep-all";

  void add(CLI::App& app) {
    app.add_option("--format", format, "Input format: auto, jsonl or csv")
        ->check(CLI::IsMember({"auto", "jsonl", "csv"}));
    app.add_option("--tokenizer", tokenizer, "Tokenizer: whitespace, char-ngram or dict-max-match")
        ->check(CLI::IsMember({"whitespace", "char-ngram", "dict-max-match"}));
    app.add_option("--ngram", ngram, "n for the char-ngram tokenizer")->check(CLI::PositiveNumber);
    app.add_option("--lexicon", lexicon, "Lexicon file for dict-max-match (one word per line)");
    app.add_option("--stopwords", stopwords, "Stopword file (one token per line)");
    app.add_option("--min-tokens", min_tokens, "Drop documents with fewer unique tokens")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--charset", charset, "Character filter: keep-all, cjk-only or hex ranges like 4E00-9FFF,3400-4DBF");
  }

  PreprocessConfig config() const {
    PreprocessConfig cfg;
    if (charset == "keep-all") {
      cfg.charset.mode = CharsetMode::KeepAll;
    } else if (charset == "cjk-only") {
      cfg.charset.mode = CharsetMode::CjkOnly;
      cfg.charset.ranges = default_cjk_ranges();
    } else {
      cfg.charset.mode = CharsetMode::CustomRanges;
      try {
        cfg.charset.ranges = parse_code_point_ranges(charset);
      } catch (const InvalidArgument& e) {
        throw UsageError(std::string("--charset: ") + e.what());
      }
    }
    if (tokenizer == "whitespace") {
      cfg.tokenizer = TokenizerKind::Whitespace;
    } else if (tokenizer == "char-ngram") {
      cfg.tokenizer = TokenizerKind::CharNgram;
    } else {
      cfg.tokenizer = TokenizerKind::DictMaxMatch;
      if (lexicon.empty()) throw UsageError("--tokenizer dict-max-match requires --lexicon");
    }
    cfg.ngram = ngram;
    if (!lexicon.empty()) cfg.lexicon = lexicon;
    if (!stopwords.empty()) cfg.stopwords = stopwords;
    cfg.min_tokens = min_tokens;
    return cfg;
  }

  InputFormat input_format(const fs::path& path) const {
    if (format == "jsonl") return InputFormat::Jsonl;
    if (format == "csv") return InputFormat::Csv;
    return format_from_path(path);
  }
};

CLI::Validator unit_interval_open_low() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) return "value " + s + " is not a number";
        if (!(v > 0.0 && v <= 1.0)) return "value " + s + " not in (0, 1]";
        return {};
      },
      "(0,1]");
}

struct ClusterFlags {
  double train_portion = 0.4;
  double threshold = 0.6;
  std::string linkage = "complete";
  int k = 1;
  std::uint64_t seed = 0;

  void add(CLI::App& app) {
    app.add_option("--train-portion", train_portion, "Fraction of documents clustered directly")
        ->check(unit_interval_open_low());
    app.add_option("--threshold", threshold, "Distance threshold for merging")->check(unit_interval_open_low());
    app.add_option("--linkage", linkage, "Linkage: complete, average or single")
        ->check(CLI::IsMember({"complete", "average", "single"}));
    app.add_option("--k", k, "Neighbours consulted by the classifier")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Random seed");
  }

  HybridConfig config() const {
    HybridConfig cfg;
    cfg.train_portion = train_portion;
    cfg.threshold = threshold;
    cfg.k = k;
    cfg.linkage = parse_linkage(linkage);
    cfg.seed = seed;
    return cfg;
  }
};

struct SynthFlags {
  std::size_t templates = 500;
  std::size_t docs = 10000;
  std::size_t template_min = 30;
  std::size_t template_max = 80;
  std::size_t vocab = 20000;
  double zipf = 1.0;
  double copies_exponent = 2.0;
  double copies_max = 2546;
  double mutation_rate = 0.15;
  double merge_fraction = 0.02;

  void add(CLI::App& app) {
    app.add_option("--templates", templates, "Number of narrative templates");
    app.add_option("--docs", docs, "Number of documents (0 = raw power-law copy counts)");
    app.add_option("--template-min", template_min, "Minimum template length in tokens");
    app.add_option("--template-max", template_max, "Maximum template length in tokens");
    app.add_option("--vocab", vocab, "Vocabulary size");
    app.add_option("--zipf", zipf, "Zipf exponent of the vocabulary");
    app.add_option("--copies-exponent", copies_exponent, "Power-law exponent of copies per template");
    app.add_option("--copies-max", copies_max, "Upper bound of copies per template");
    app.add_option("--mutation-rate", mutation_rate, "Edited fraction of tokens per copy")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--merge-fraction", merge_fraction, "Fraction of documents merging two templates")
        ->check(CLI::Range(0.0, 1.0));
  }

  SynthConfig config(std::uint64_t seed) const {
    SynthConfig cfg;
    cfg.n_templates = templates;
    cfg.n_docs = docs;
    cfg.template_min = template_min;
    cfg.template_max = template_max;
    cfg.vocab_size = vocab;
    cfg.zipf_exponent = zipf;
    cfg.copies_exponent = copies_exponent;
    cfg.copies_max = copies_max;
    cfg.mutation_rate = mutation_rate;
    cfg.merge_fraction = merge_fraction;
    cfg.seed = seed;
    try {
      cfg.validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

// --- helpers ---------------------------------------------------------------

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  auto out = open_output(path);
  out << content;
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path p = path;
  p.replace_extension(suffix);
  return p;
}

struct LoadedCorpus {
  std::vector<Document> docs;
  std::vector<TokenSet> sets;
  TokenInterner interner;
};

void load_corpus(LoadedCorpus& c, const fs::path& input, const PreprocessFlags& pf, unsigned threads) {
  const PreprocessConfig cfg = pf.config();
  c.docs = ingest(input, pf.input_format(input));
  const Preprocessor pre(cfg);
  c.sets = preprocess_corpus(c.docs, pre, c.interner, threads);
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) throw UsageError("--sizes: '" + item + "' is not a count");
    out.push_back(v);
  }
  return out;
}

/// Inserts "--key=value" pairs from a flat config file right after the
/// subcommand name; later command-line flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a path");
      path = args[++i];
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;
  std::ifstream in(*path);
  if (!in) throw UsageError("cannot open config file " + *path);
  std::set<std::string> given;
  for (const auto& a : rest)
    if (a.starts_with("--")) given.insert(a.substr(0, a.find('=')));
  std::vector<std::string> injected;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#' || line[start] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(*path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.starts_with("--")) key.erase(0, 2);
    // A flag given on the command line replaces the file value outright, so
    // a bad value in the file cannot fail validation.
    if (given.contains("--" + key)) continue;
    injected.push_back("--" + key + "=" + value);
  }
  if (rest.empty()) return injected;
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

// --- subcommands -----------------------------------------------------------

struct Common {
  unsigned threads = 0;
};

int cmd_cluster(const std::string& input, const std::string& output, const PreprocessFlags& pf,
                const ClusterFlags& cf, bool pure, const Common& common, std::ostream& out) {
  LoadedCorpus c;
  load_corpus(c, input, pf, common.threads);
  const HybridConfig cfg = cf.config();
  Labeling labels;
  std::optional<HybridTrace> trace;
  if (c.sets.empty()) throw Error("no document has at least " + std::to_string(pf.min_tokens) + " tokens");
  if (c.sets.size() == 1) {
    labels.labels = {0};
  } else if (pure) {
    labels = pure_cluster(c.sets, cfg.threshold, cfg.linkage, common.threads);
  } else {
    HybridResult r = hybrid_cluster(c.sets, cfg, common.threads);
    labels = std::move(r.labeling);
    trace = std::move(r.trace);
  }
  std::vector<std::string> ids;
  ids.reserve(c.sets.size());
  for (const auto& s : c.sets) ids.push_back(c.docs[s.doc_index].id);
  {
    auto f = open_output(output);
    write_labels_csv(f, ids, labels);
  }
  if (trace) write_file(sibling(output, ".trace.json"), trace_to_json(*trace));
  const auto groups = group_stats(labels);
  out << "clustered " << c.sets.size() << " of " << c.docs.size() << " documents into " << groups.all.groups
      << " clusters (" << groups.singletons << " singletons)\n";
  return kExitOk;
}

int cmd_eval(const std::string& ground_path, const std::string& predicted_path, const std::string& output,
             std::ostream& out, std::ostream& err) {
  const LabelTable ground = read_labels_csv(fs::path(ground_path));
  const LabelTable predicted = read_labels_csv(fs::path(predicted_path));
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < predicted.ids.size(); ++i) pos.emplace(predicted.ids[i], i);
  std::vector<std::string> missing;
  Labeling aligned;
  for (std::size_t i = 0; i < ground.ids.size(); ++i) {
    auto it = pos.find(ground.ids[i]);
    if (it == pos.end()) {
      missing.push_back(ground.ids[i]);
    } else {
      aligned.labels.push_back(predicted.labeling[it->second]);
    }
  }
  const std::size_t extra = predicted.ids.size() - aligned.size();
  if (!missing.empty() || extra != 0) {
    std::set<std::string> ground_ids(ground.ids.begin(), ground.ids.end());
    std::vector<std::string> only_pred;
    for (const auto& id : predicted.ids)
      if (!ground_ids.contains(id)) only_pred.push_back(id);
    err << "document id sets differ: " << missing.size() << " only in " << ground_path << ", " << only_pred.size()
        << " only in " << predicted_path << "\n";
    auto show = [&](const char* what, const std::vector<std::string>& ids) {
      if (ids.empty()) return;
      err << "  " << what << ":";
      for (std::size_t i = 0; i < std::min<std::size_t>(ids.size(), 5); ++i) err << ' ' << ids[i];
      if (ids.size() > 5) err << " ...";
      err << "\n";
    };
    show("only in ground", missing);
    show("only in predicted", only_pred);
    return kExitUsage;
  }
  const std::string json = eval_report_to_json(evaluate(ground.labeling, aligned));
  if (output.empty()) {
    out << json;
  } else {
    write_file(output, json);
  }
  return kExitOk;
}

int cmd_bench(const std::string& input, bool synth, const SynthFlags& sf, const std::string& output,
              const PreprocessFlags& pf, const ClusterFlags& cf, const std::string& sizes_text,
              const std::string& models_text, int iterations, bool parallel, const Common& common,
              std::ostream& out) {
  LoadedCorpus c;
  if (synth) {
    SynthCorpus corpus = generate(sf.config(cf.seed));
    c.docs = std::move(corpus.documents);
    const Preprocessor pre(pf.config());
    c.sets = preprocess_corpus(c.docs, pre, c.interner, common.threads);
  } else {
    load_corpus(c, input, pf, common.threads);
  }
  BenchOptions opt;
  const HybridConfig base = cf.config();
  try {
    opt.models = parse_models(models_text, base);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--models: ") + e.what());
  }
  opt.sizes = sizes_text.empty() ? std::vector<std::size_t>{c.sets.size()} : parse_sizes(sizes_text);
  for (const std::size_t s : opt.sizes) {
    if (s > c.sets.size()) {
      throw UsageError("--sizes: " + std::to_string(s) + " exceeds the " + std::to_string(c.sets.size()) +
                       " usable documents");
    }
  }
  opt.iterations = iterations;
  opt.seed = cf.seed;
  opt.threshold = base.threshold;
  opt.linkage = base.linkage;
  opt.threads = common.threads;
  opt.parallel_iterations = parallel;
  const BenchReport report = run_bench(c.sets, opt);
  write_file(output, bench_report_to_json(report));
  {
    auto f = open_output(sibling(output, ".csv"));
    write_bench_csv(f, report);
  }
  for (const auto& r : report.rows) {
    out << r.model << " n=" << r.size << " runtime=" << r.runtime_s.mean << "s precision=" << r.precision.mean
        << " recall=" << r.recall.mean << " f=" << r.f_score.mean << "\n";
  }
  return kExitOk;
}

int cmd_synth(const SynthFlags& sf, std::uint64_t seed, std::size_t scripted, const std::string& output,
              std::ostream& out) {
  SynthCorpus corpus = scripted > 0 ? generate_scripted(demo_scenarios(scripted, seed)) : generate(sf.config(seed));
  {
    auto f = open_output(output);
    write_jsonl(f, corpus.documents);
  }
  {
    auto f = open_output(sibling(output, ".truth.csv"));
    write_truth_csv(f, corpus);
  }
  out << "wrote " << corpus.documents.size() << " documents to " << output << "\n";
  return kExitOk;
}

struct ReportFlags {
  std::string labels;
  std::string time_bin = "day";
  std::string utc_offset = "+08:00";
  std::size_t top = 0;
  std::size_t min_size = 1;
  std::vector<Label> clusters;
  bool change_log = false;
  std::string reference = "medoid";
};

int cmd_report(const std::string& input, const std::string& output, const PreprocessFlags& pf,
               const ReportFlags& rf, const Common& common, std::ostream& out) {
  int offset = 0;
  try {
    offset = parse_utc_offset(rf.utc_offset);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--utc-offset: ") + e.what());
  }
  if (rf.change_log && rf.clusters.empty()) throw UsageError("--change-log requires --cluster");

  LoadedCorpus c;
  load_corpus(c, input, pf, common.threads);
  const LabelTable table = read_labels_csv(fs::path(rf.labels));
  std::unordered_map<std::string, std::size_t> doc_pos;
  for (std::size_t i = 0; i < c.docs.size(); ++i) doc_pos.emplace(c.docs[i].id, i);

  // Documents present in the label file, in label-file order.
  std::vector<Document> docs;
  Labeling labels;
  std::vector<std::size_t> corpus_pos;
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    auto it = doc_pos.find(table.ids[i]);
    if (it == doc_pos.end()) throw UsageError("label file names unknown document \"" + table.ids[i] + "\"");
    docs.push_back(c.docs[it->second]);
    labels.labels.push_back(table.labeling[i]);
    corpus_pos.push_back(it->second);
  }
  if (labels.size() == 0) throw Error("label file is empty");

  const GroupStats stats = group_stats(labels);
  const auto listed = top_clusters(labels, rf.top, rf.min_size);
  write_file(output, group_stats_to_json(stats, listed));

  SeriesOptions so;
  so.bin = parse_time_bin(rf.time_bin);
  so.utc_offset_minutes = offset;
  if (!rf.clusters.empty()) {
    so.clusters = rf.clusters;
  } else {
    for (const auto& cs : listed) so.clusters.push_back(cs.cluster);
    if (so.clusters.empty()) so.clusters.push_back(std::numeric_limits<Label>::min());
  }
  const bool any_ts = std::any_of(docs.begin(), docs.end(), [](const Document& d) { return d.timestamp.has_value(); });
  if (any_ts) {
    const auto series = timeseries(docs, labels, so);
    auto f = open_output(sibling(output, ".timeseries.csv"));
    write_timeseries_csv(f, series);
  }

  if (rf.change_log) {
    std::unordered_map<std::size_t, const TokenSet*> set_of;
    for (const auto& s : c.sets) set_of.emplace(s.doc_index, &s);
    auto all = nlohmann::ordered_json::array();
    for (const Label cluster : rf.clusters) {
      std::vector<Document> members;
      std::vector<TokenSet> member_sets;
      for (std::size_t i = 0; i < docs.size(); ++i) {
        if (labels[i] != cluster) continue;
        auto it = set_of.find(corpus_pos[i]);
        if (it == set_of.end()) continue;
        members.push_back(docs[i]);
        member_sets.push_back(*it->second);
      }
      const ChangeLog log = change_log(members, member_sets, parse_change_reference(rf.reference), c.interner, offset);
      for (auto& e : nlohmann::ordered_json::parse(change_log_to_json(log, cluster))) all.push_back(e);
    }
    write_file(sibling(output, ".changelog.json"), all.dump(2) + "\n");
  }
  out << "reported " << labels.size() << " documents in " << stats.all.groups << " clusters\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Near-duplicate narrative clustering, evaluation, benchmarking and reporting"};
  app.name("rumorclust");
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--config", "Flat key=value file; command-line flags take precedence");

  Common common;
  common.threads = default_threads();
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", common.threads, "Worker threads for data-parallel sections")
        ->check(CLI::PositiveNumber);
  };

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Cluster documents into narrative groups");
  std::string cl_input, cl_output;
  bool cl_pure = false;
  PreprocessFlags cl_pf;
  ClusterFlags cl_cf;
  cluster->add_option("--input", cl_input, "Input corpus (JSONL or CSV)")->required();
  cluster->add_option("--output", cl_output, "Labels CSV (trace written next to it)")->required();
  cl_pf.add(*cluster);
  cl_cf.add(*cluster);
  cluster->add_flag("--pure", cl_pure, "Cluster the whole corpus directly instead of the hybrid path");
  add_threads(cluster);

  // eval
  auto* eval = app.add_subcommand("eval", "Score predicted labels against reference labels");
  std::string ev_ground, ev_pred, ev_output;
  eval->add_option("ground", ev_ground, "Reference labels CSV")->required();
  eval->add_option("predicted", ev_pred, "Predicted labels CSV")->required();
  eval->add_option("--output", ev_output, "Report JSON (default: stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Timed quality benchmark against full clustering");
  std::string be_input, be_output, be_sizes, be_models = "pure,hybrid:0.2,hybrid:0.4,hybrid:0.6,hybrid:0.8";
  int be_iterations = 5;
  bool be_synth = false;
  bool be_parallel = false;
  PreprocessFlags be_pf;
  ClusterFlags be_cf;
  SynthFlags be_sf;
  bench->add_option("--input", be_input, "Input corpus (JSONL or CSV)");
  bench->add_flag("--synth", be_synth, "Benchmark on a generated corpus (see synthesis flags)");
  bench->add_option("--output", be_output, "Report JSON (tidy CSV written next to it)")->required();
  bench->add_option("--sizes", be_sizes, "Comma-separated subset sizes (default: whole corpus)");
  bench->add_option("--iterations", be_iterations, "Iterations per size")->check(CLI::PositiveNumber);
  bench->add_option("--models", be_models, "Comma-separated models: pure, hybrid:<p>");
  bench->add_flag("--parallel-iterations", be_parallel, "Run iterations concurrently (timings become unreliable)");
  be_pf.add(*bench);
  be_cf.add(*bench);
  be_sf.add(*bench);
  add_threads(bench);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  std::string sy_output;
  std::uint64_t sy_seed = 0;
  std::size_t sy_scripted = 0;
  SynthFlags sy_sf;
  synth->add_option("--output", sy_output, "Corpus JSONL (truth CSV written next to it)")->required();
  synth->add_option("--seed", sy_seed, "Random seed");
  synth->add_option("--scripted", sy_scripted, "Emit this many scripted-substitution clusters instead");
  sy_sf.add(*synth);
  add_threads(synth);

  // report
  auto* report = app.add_subcommand("report", "Group statistics, time series and change logs");
  std::string re_input, re_output;
  PreprocessFlags re_pf;
  ReportFlags rf;
  report->add_option("--input", re_input, "Input corpus (JSONL or CSV)")->required();
  report->add_option("--labels", rf.labels, "Labels CSV from the cluster command")->required();
  report->add_option("--output", re_output, "Statistics JSON (time series and change log written next to it)")
      ->required();
  report->add_option("--time-bin", rf.time_bin, "Time series bin: day or week")
      ->check(CLI::IsMember({"day", "week"}));
  report->add_option("--utc-offset", rf.utc_offset, "UTC offset for calendar bins");
  report->add_option("--top", rf.top, "List at most this many clusters (0 = all)");
  report->add_option("--min-size", rf.min_size, "List only clusters with at least this many documents");
  report->add_option("--cluster", rf.clusters, "Restrict series and change logs to these clusters")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',');
  report->add_flag("--change-log", rf.change_log, "Write token change logs for --cluster");
  report->add_option("--reference", rf.reference, "Change-log reference: medoid or earliest")
      ->check(CLI::IsMember({"medoid", "earliest"}));
  re_pf.add(*report);
  add_threads(report);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::CallForHelp& e) {
      app.exit(e, out, err);
      return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
      app.exit(e, out, err);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }

    if (cluster->parsed()) return cmd_cluster(cl_input, cl_output, cl_pf, cl_cf, cl_pure, common, out);
    if (eval->parsed()) return cmd_eval(ev_ground, ev_pred, ev_output, out, err);
    if (bench->parsed()) {
      if (be_synth == !be_input.empty()) throw UsageError("bench needs exactly one of --input or --synth");
      return cmd_bench(be_input, be_synth, be_sf, be_output, be_pf, be_cf, be_sizes, be_models, be_iterations, be_parallel,
                       common, out);
    }
    if (synth->parsed()) return cmd_synth(sy_sf, sy_seed, sy_scripted, sy_output, out);
    if (report->parsed()) return cmd_report(re_input, re_output, re_pf, rf, common, out);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace rumor::cli
