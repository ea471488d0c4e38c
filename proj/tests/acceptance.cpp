// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rumor/bench.hpp"
#include "rumor/evaluate.hpp"
#include "rumor/hybrid.hpp"
#include "rumor/report.hpp"
#include "rumor/stats.hpp"
#include "rumor/synthgen.hpp"
#include "support.hpp"

using namespace rumor;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

std::vector<TokenSet> preprocess_synth(const SynthCorpus& c, TokenInterner& interner,
                                       const PreprocessConfig& cfg = PreprocessConfig{}) {
  return preprocess_corpus(c.documents, Preprocessor(cfg), interner, 1);
}

// --- 1 ---------------------------------------------------------------------

Outcome identity() {
  std::mt19937_64 rng(101);
  int ok = 0;
  for (int trial = 0; trial < 20; ++trial) {
    SynthConfig cfg;
    cfg.n_docs = 500 + static_cast<std::size_t>(rng() % 1501);
    cfg.n_templates = cfg.n_docs / 20;
    cfg.mutation_rate = 0.05 + 0.05 * static_cast<double>(trial % 6);
    cfg.seed = rng();
    TokenInterner interner;
    const auto sets = preprocess_synth(generate(cfg), interner);
    HybridConfig h;
    h.train_portion = 1.0;
    h.seed = rng();
    ok += partition_equal(hybrid_cluster(sets, h).labeling, pure_cluster(sets, 0.6, Linkage::Complete));
  }
  return {ok == 20, std::to_string(ok) + "/20 partitions equal"};
}

// --- 2 and 3 -----------------------------------------------------------------

struct ReferenceBench {
  BenchReport report;
  std::size_t n = 0;
};

const ReferenceBench& reference_bench() {
  static const ReferenceBench bench = [] {
    SynthConfig cfg;  // 500 templates, 10,000 docs, 0.15 edits, 2% merged
    cfg.seed = 2020;
    TokenInterner interner;
    const auto sets = preprocess_synth(generate(cfg), interner);
    BenchOptions opt;
    opt.sizes = {sets.size()};
    opt.models = parse_models("pure,hybrid:0.2,hybrid:0.4,hybrid:0.6,hybrid:0.8", HybridConfig{});
    opt.iterations = 5;
    opt.seed = 7;
    return ReferenceBench{run_bench(sets, opt), sets.size()};
  }();
  return bench;
}

Outcome quality() {
  const auto& b = reference_bench();
  bool pass = true;
  std::string detail = "n=" + std::to_string(b.n);
  const BenchRow* prev = nullptr;
  for (const auto& row : b.report.rows) {
    if (row.model == "pure") continue;
    detail += "; " + row.model + " P/R/F " + fmt(row.precision.mean) + "/" + fmt(row.recall.mean) + "/" +
              fmt(row.f_score.mean);
    for (const auto* m : {&row.precision, &row.recall, &row.f_score}) pass = pass && m->mean >= 0.95;
    if (prev) {
      // a drop is tolerated only while the two 95% intervals still overlap
      auto overlaps = [](const MeanWithCi& lo, const MeanWithCi& hi) {
        return hi.mean + hi.ci95.value_or(0) >= lo.mean - lo.ci95.value_or(0);
      };
      const bool monotone = overlaps(prev->precision, row.precision) && overlaps(prev->recall, row.recall) &&
                            overlaps(prev->f_score, row.f_score);
      if (!monotone) detail += " (drop beyond CI)";
      pass = pass && monotone;
    }
    prev = &row;
  }
  return {pass, detail};
}

Outcome speed() {
  const auto& b = reference_bench();
  std::map<int, double> pure, hybrid;
  for (const auto& s : b.report.samples) {
    if (s.model == "pure") pure[s.iteration] = s.runtime_s;
    if (s.model == "hybrid:0.4") hybrid[s.iteration] = s.runtime_s;
  }
  int ok = 0;
  std::string detail;
  for (const auto& [it, t] : pure) {
    const double ratio = hybrid.at(it) / t;
    ok += ratio <= 0.6;
    detail += (detail.empty() ? "ratios " : ", ") + fmt(ratio, 3);
  }
  return {ok >= 4, std::to_string(ok) + "/5 iterations within 0.6x; " + detail};
}

// --- 4 -----------------------------------------------------------------------

Outcome scaling() {
  SynthConfig cfg;
  cfg.n_templates = 1000;
  cfg.n_docs = 20000;
  cfg.seed = 4;
  TokenInterner interner;
  const auto sets = preprocess_synth(generate(cfg), interner);
  BenchOptions opt;
  opt.sizes = {2500, 5000, 10000, std::min<std::size_t>(20000, sets.size())};
  opt.models = parse_models("pure,hybrid:0.4", HybridConfig{});
  opt.iterations = 3;
  opt.seed = 11;
  const auto report = run_bench(sets, opt);

  auto slope = [&](const std::string& model) {
    std::vector<double> x, y;
    for (const std::size_t n : opt.sizes) {
      std::vector<double> t;
      for (const auto& s : report.samples)
        if (s.model == model && s.size == n) t.push_back(s.runtime_s);
      std::sort(t.begin(), t.end());
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(std::log(stats::quantile_sorted(t, 0.5)));
    }
    return stats::ols_slope(x, y);
  };
  const double pure = slope("pure"), hybrid = slope("hybrid:0.4");
  return {pure - hybrid >= 0.5,
          "slope pure " + fmt(pure, 3) + ", hybrid " + fmt(hybrid, 3) + ", gap " + fmt(pure - hybrid, 3)};
}

// --- 5 -----------------------------------------------------------------------

Outcome complete_linkage() {
  std::mt19937_64 rng(55);
  int ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 20 + static_cast<std::size_t>(rng() % 981);
    const auto docs = support::family_corpus(rng, n, 2 + rng() % 40, 0.1 + 0.3 * (trial % 5) / 4.0, 2000);
    const double lambda = 0.2 + 0.7 * static_cast<double>(trial % 10) / 9.0;
    const auto labels = pure_cluster(docs, lambda, Linkage::Complete);
    bool good = true;
    for (std::size_t i = 0; i < n && good; ++i)
      for (std::size_t j = i + 1; j < n && good; ++j)
        if (labels[i] == labels[j]) good = support::reference_distance(docs[i], docs[j]) <= lambda;
    ok += good;
  }
  return {ok == 50, std::to_string(ok) + "/50 corpora"};
}

// --- 6 -----------------------------------------------------------------------

Outcome metric() {
  std::mt19937_64 rng(66);
  std::size_t failures = 0, cases = 0;
  for (; cases < 20000; ++cases) {
    const std::size_t vocab = 4 + cases % 80;
    const auto a = support::random_set(rng, vocab, 1, 40);
    const auto b = rng() % 4 == 0 ? a : support::random_set(rng, vocab, 1, 40);
    const double d = token_distance(a, b);
    const bool good = d == token_distance(b, a) && d >= 0 && d <= 1 && ((d == 0) == (a.tokens == b.tokens)) &&
                      ((d == 1) == (support::shared_count(a, b) == 0));
    failures += !good;
  }
  std::size_t queries = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 20 + static_cast<std::size_t>(rng() % 481);
    const auto docs = support::family_corpus(rng, n, 3 + rng() % 25, 0.25, 800);
    const auto index = build_index(docs);
    for (int q = 0; q < 20; ++q, ++queries) {
      const TokenSet query = q % 2 ? docs[rng() % n] : support::random_set(rng, 800, 5, 40);
      const double r = static_cast<double>(rng() % 100) / 100.0;
      std::vector<Neighbor> expect;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = support::reference_distance(query, docs[i]);
        if (d <= r) expect.push_back({static_cast<DocIndex>(i), d});
      }
      failures += neighbors_within(index, query, r) != expect;
    }
  }
  return {failures == 0, std::to_string(cases) + " pairs, " + std::to_string(queries) + " radius queries, " +
                             std::to_string(failures) + " failures"};
}

// --- 7 -----------------------------------------------------------------------

Outcome evaluation() {
  bool pass = true;
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  // |g| = 4 with l a two-member subset
  const std::vector<std::size_t> g{0, 1, 2, 3}, l{1, 2};
  const auto m = pair_metrics(g, l);
  pass = pass && near(m.precision, 1) && near(m.recall, 0.5) && near(m.f_score, 2.0 / 3.0);
  // one ground group of ten, predicted split 5/5
  const auto split = evaluate(Labeling{std::vector<Label>(10, 0)}, Labeling{{0, 0, 0, 0, 0, 1, 1, 1, 1, 1}});
  pass = pass && split.groups_evaluated == 1 && near(split.precision, 1) && near(split.recall, 0.5) &&
         near(split.f_score, 2.0 / 3.0);
  // predicted equal to ground
  const Labeling part{{0, 0, 1, 2, 2, 2, 3}};
  const auto same = evaluate(part, part);
  pass = pass && near(same.precision, 1) && near(same.recall, 1) && near(same.f_score, 1);

  std::mt19937_64 rng(77);
  int self = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Label> labels(1 + rng() % 300);
    const Label groups = 1 + static_cast<Label>(rng() % 40);
    for (auto& x : labels) x = static_cast<Label>(rng() % static_cast<std::uint64_t>(groups));
    const auto r = evaluate(Labeling{labels}, Labeling{labels});
    self += r.precision == 1 && r.recall == 1 && r.f_score == 1;
  }
  return {pass && self == 1000, std::string("worked examples ") + (pass ? "exact" : "WRONG") + ", " +
                                    std::to_string(self) + "/1000 self-evaluations (1,1,1)"};
}

// --- 8 -----------------------------------------------------------------------

Outcome clustering_oracle() {
  std::mt19937_64 rng(88);
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 199);
    const auto full = support::random_full(rng, n);
    const double lambda = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
    bool good = true;
    for (const Linkage link : {Linkage::Complete, Linkage::Average, Linkage::Single}) {
      const auto got = agglomerate(support::condensed(full), link, lambda).labeling.labels;
      good = good && got == support::naive_agglomerate(full, link, lambda).labels;
    }
    ok += good;
  }
  // Quantized matrices force exact ties. Complete and single linkage values
  // are plain minima and maxima, so both sides see the same ties; average
  // linkage ties depend on summation order and are only reported.
  int tied_ok = 0, average_same = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 199);
    const auto full = support::random_full(rng, n, 10);
    const double lambda = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
    bool good = true;
    for (const Linkage link : {Linkage::Complete, Linkage::Single}) {
      good = good && agglomerate(support::condensed(full), link, lambda).labeling.labels ==
                         support::naive_agglomerate(full, link, lambda).labels;
    }
    tied_ok += good;
    average_same += agglomerate(support::condensed(full), Linkage::Average, lambda).labeling.labels ==
                    support::naive_agglomerate(full, Linkage::Average, lambda).labels;
  }
  return {ok == 100 && tied_ok == 25,
          std::to_string(ok) + "/100 matrices, all three linkages; tie-heavy " + std::to_string(tied_ok) +
              "/25 complete+single (average on ties, informational: " + std::to_string(average_same) + "/25)"};
}

// --- 9 -----------------------------------------------------------------------

Outcome reporting() {
  bool conserve = true;
  std::size_t clusters = 0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SynthConfig cfg;
    cfg.n_templates = 60;
    cfg.n_docs = 1500;
    cfg.seed = seed;
    auto corpus = generate(cfg);
    // some documents lose their timestamp
    for (std::size_t i = 0; i < corpus.documents.size(); i += 17) corpus.documents[i].timestamp.reset();
    TokenInterner interner;
    const auto sets = preprocess_synth(corpus, interner);
    const auto labels = hybrid_cluster(sets, HybridConfig{}).labeling;
    std::vector<Document> kept;
    for (const auto& s : sets) kept.push_back(corpus.documents[s.doc_index]);
    std::map<Label, std::size_t> timestamped, untimestamped;
    for (std::size_t i = 0; i < kept.size(); ++i) ++(kept[i].timestamp ? timestamped : untimestamped)[labels[i]];
    for (const auto bin : {TimeBin::Day, TimeBin::Week}) {
      SeriesOptions opt;
      opt.bin = bin;
      for (const auto& s : timeseries(kept, labels, opt)) {
        std::size_t sum = 0;
        for (const auto& b : s.bins) sum += b.count;
        conserve = conserve && sum == s.total && sum == timestamped[s.cluster] &&
                   s.untimestamped == untimestamped[s.cluster];
        ++clusters;
      }
    }
  }

  const auto scenarios = demo_scenarios(4, 9);
  const auto corpus = generate_scripted(scenarios);
  TokenInterner interner;
  PreprocessConfig pre;
  pre.min_tokens = 0;
  const auto sets = preprocess_synth(corpus, interner, pre);
  std::size_t exact = 0;
  for (std::size_t sc = 0; sc < scenarios.size(); ++sc) {
    std::vector<Document> docs;
    std::vector<TokenSet> tokens;
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
      if (corpus.truth[i] != static_cast<Label>(sc)) continue;
      docs.push_back(corpus.documents[i]);
      tokens.push_back(sets[i]);
    }
    const auto log = change_log(docs, tokens, ChangeReference::Earliest, interner);
    // expected entries accumulate the edits against the base version
    std::vector<std::string> added, removed;
    bool good = log.entries.size() == scenarios[sc].edits.size();
    for (std::size_t e = 0; good && e < log.entries.size(); ++e) {
      const auto& edit = scenarios[sc].edits[e];
      added.insert(added.end(), edit.add.begin(), edit.add.end());
      removed.insert(removed.end(), edit.remove.begin(), edit.remove.end());
      std::sort(added.begin(), added.end());
      std::sort(removed.begin(), removed.end());
      const auto& got = log.entries[e];
      good = got.added == added && got.removed == removed &&
             got.date == format_date(local_day(edit.at.epoch_seconds, 480)) && got.first_seen == edit.at;
    }
    exact += good;
  }
  return {conserve && exact == scenarios.size(),
          std::to_string(clusters) + " cluster series " + (conserve ? "conserved" : "NOT conserved") + ", " +
              std::to_string(exact) + "/" + std::to_string(scenarios.size()) + " scripted change logs exact"};
}

// --- 10 ----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void zero_timings(nlohmann::ordered_json& j) {
  if (j.is_object()) {
    for (auto& [key, value] : j.items()) {
      if (key == "phase_seconds" || key == "runtime_s") value = nullptr;
      else zero_timings(value);
    }
  } else if (j.is_array()) {
    for (auto& v : j) zero_timings(v);
  }
}

/// File contents with wall-clock fields blanked.
std::string masked(const fs::path& p) {
  const std::string text = slurp(p);
  if (p.extension() == ".json") {
    auto j = nlohmann::ordered_json::parse(text);
    zero_timings(j);
    return j.dump(2);
  }
  if (text.rfind("model,size,iteration,runtime_s,", 0) == 0) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
      std::vector<std::string> f;
      std::stringstream ls(line);
      for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
      if (f.size() > 3) f[3] = "-";
      for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
      out += '\n';
    }
    return out;
  }
  return text;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = masked(e.path());
  return files;
}

int shell(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

Outcome determinism() {
  const std::string cli = RUMORCLUST_PATH;
  const auto root = support::scratch_dir("acceptance-determinism");
  std::vector<std::map<std::string, std::string>> runs;
  int failures = 0;
  for (const char* threads : {"1", "8", "1"}) {
    const fs::path dir = root / ("run" + std::to_string(runs.size()));
    fs::create_directories(dir);
    const std::string d = dir.string() + "/", t = std::string(" --threads ") + threads;
    const std::vector<std::string> commands{
        cli + " synth --templates 40 --docs 2000 --seed 5 --output " + d + "corpus.jsonl",
        cli + " synth --scripted 3 --seed 5 --output " + d + "scripted.jsonl",
        cli + " cluster --input " + d + "corpus.jsonl --output " + d + "hybrid.csv --seed 3" + t,
        cli + " cluster --input " + d + "corpus.jsonl --output " + d + "pure.csv --pure" + t,
        cli + " cluster --input " + d + "scripted.jsonl --output " + d + "scripted.labels.csv" + t,
        cli + " eval " + d + "corpus.truth.csv " + d + "hybrid.csv --output " + d + "eval.json",
        cli + " bench --input " + d + "corpus.jsonl --output " + d + "bench.json --sizes 500,1000 --iterations 2" + t,
        cli + " bench --synth --templates 20 --docs 600 --output " + d + "bench_synth.json --iterations 2 "
              "--parallel-iterations" + t,
        cli + " report --input " + d + "corpus.jsonl --labels " + d + "hybrid.csv --output " + d + "report.json" + t,
        cli + " report --input " + d + "scripted.jsonl --labels " + d + "scripted.labels.csv --output " + d +
            "changes.json --cluster 0,1 --change-log" + t,
    };
    for (const auto& c : commands) failures += shell(c) != 0;
    runs.push_back(snapshot(dir));
  }
  const bool same = runs[0] == runs[1] && runs[0] == runs[2];
  return {failures == 0 && same && runs[0].size() >= 15,
          std::to_string(runs[0].size()) + " output files, " + std::to_string(failures) + " failed commands, " +
              (same ? "identical across runs and thread counts" : "outputs DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"identity property (p=1 equals pure)", identity},
      {"quality vs full clustering at 10k", quality},
      {"speed ordering p=0.4 vs pure at 10k", speed},
      {"scaling exponent gap >= 0.5", scaling},
      {"complete-linkage diameter guarantee", complete_linkage},
      {"distance metric properties", metric},
      {"matched-group evaluation oracle", evaluation},
      {"NN-chain vs naive agglomeration", clustering_oracle},
      {"reporting conservation and change logs", reporting},
      {"CLI determinism across threads", determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!wanted.empty() && !wanted.contains(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << " -- "
              << o.detail << " (" << fmt(secs, 3) << " s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
