#include "rumor/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "rumor/labels_io.hpp"
#include "rumor/random.hpp"

namespace rumor {

void SynthConfig::validate() const {
  if (n_templates == 0) throw InvalidArgument("synthetic corpus needs at least one template");
  if (template_min == 0 || template_min > template_max) throw InvalidArgument("template length range is invalid");
  if (vocab_size < template_max) {
    throw InvalidArgument("vocabulary of " + std::to_string(vocab_size) + " tokens is too small for templates of " +
                          std::to_string(template_max) + " distinct tokens");
  }
  if (!(zipf_exponent > 0)) throw InvalidArgument("zipf exponent must be positive");
  if (!(copies_min >= 1 && copies_min <= copies_max)) throw InvalidArgument("copy count range is invalid");
  if (!(copies_exponent > 0)) throw InvalidArgument("copy count exponent must be positive");
  if (!(mutation_rate >= 0 && mutation_rate <= 1)) throw InvalidArgument("mutation rate must be in [0, 1]");
  if (!(merge_fraction >= 0 && merge_fraction <= 1)) throw InvalidArgument("merge fraction must be in [0, 1]");
  if (window_end.epoch_seconds < window_start.epoch_seconds) throw InvalidArgument("timestamp window is reversed");
  if (merge_fraction > 0 && n_templates < 2) throw InvalidArgument("merged documents need at least two templates");
}

std::string synth_token(std::size_t rank) { return "w" + std::to_string(rank); }

namespace {

class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double s) : cdf_(n) {
    double acc = 0;
    for (std::size_t r = 0; r < n; ++r) {
      acc += std::pow(static_cast<double>(r + 1), -s);
      cdf_[r] = acc;
    }
    for (auto& c : cdf_) c /= acc;
  }
  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }
  double weight(std::size_t r) const { return r == 0 ? cdf_[0] : cdf_[r] - cdf_[r - 1]; }
  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

/// `length` distinct ranks, Zipf-weighted.
std::vector<std::size_t> draw_distinct(const ZipfSampler& zipf, std::size_t length, Rng& rng) {
  std::vector<std::size_t> out;
  out.reserve(length);
  if (length * 2 <= zipf.size()) {
    std::unordered_set<std::size_t> used;
    std::size_t attempts = 0;
    while (out.size() < length && attempts < 64 * length) {
      ++attempts;
      const std::size_t r = zipf.draw(rng);
      if (used.insert(r).second) out.push_back(r);
    }
    if (out.size() == length) return out;
    out.clear();
  }
  // Weighted sampling without replacement via exponential keys.
  std::vector<std::pair<double, std::size_t>> keys(zipf.size());
  for (std::size_t r = 0; r < zipf.size(); ++r) keys[r] = {-std::log(rng.uniform_open0()) / zipf.weight(r), r};
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(length), keys.end());
  for (std::size_t i = 0; i < length; ++i) out.push_back(keys[i].second);
  return out;
}

double bounded_power_law(double lo, double hi, double exponent, Rng& rng) {
  const double u = rng.uniform01();
  if (std::abs(exponent - 1.0) < 1e-12) return lo * std::pow(hi / lo, u);
  const double a = std::pow(lo, 1.0 - exponent);
  const double b = std::pow(hi, 1.0 - exponent);
  return std::pow(a + u * (b - a), 1.0 / (1.0 - exponent));
}

/// Each template gets one copy, the rest are shared in proportion to the
/// weights by largest remainder (ties: lower template index).
std::vector<std::size_t> allocate(const std::vector<double>& weights, std::size_t total) {
  const std::size_t t = weights.size();
  std::vector<std::size_t> counts(t, 1);
  if (total < t) throw InvalidArgument("fewer documents than templates");
  const std::size_t extra = total - t;
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t given = 0;
  for (std::size_t i = 0; i < t; ++i) {
    const double quota = static_cast<double>(extra) * weights[i] / sum;
    const auto whole = static_cast<std::size_t>(std::floor(quota));
    counts[i] += whole;
    given += whole;
    remainders.emplace_back(quota - static_cast<double>(whole), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; given < extra; ++i, ++given) ++counts[remainders[i % t].second];
  return counts;
}

void mutate(std::vector<std::size_t>& tokens, double rate, const ZipfSampler& zipf, Rng& rng) {
  const auto edits = static_cast<std::size_t>(std::llround(rate * static_cast<double>(tokens.size())));
  for (std::size_t e = 0; e < edits; ++e) {
    switch (rng.uniform_index(3)) {
      case 0:
        tokens[rng.uniform_index(tokens.size())] = zipf.draw(rng);
        break;
      case 1: {
        const auto pos = static_cast<std::ptrdiff_t>(rng.uniform_index(tokens.size() + 1));
        tokens.insert(tokens.begin() + pos, zipf.draw(rng));
        break;
      }
      default:
        if (tokens.size() > 1) tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(tokens.size())));
        break;
    }
  }
}

std::string join_tokens(const std::vector<std::size_t>& ranks) {
  std::string text;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (i) text.push_back(' ');
    text += synth_token(ranks[i]);
  }
  return text;
}

struct Peak {
  double center;
  double spread;
};

std::int64_t draw_time(const Peak& peak, std::int64_t lo, std::int64_t hi, Rng& rng) {
  const double t = peak.center + peak.spread * rng.normal();
  return std::clamp(static_cast<std::int64_t>(std::llround(t)), lo, hi);
}

}  // namespace

SynthCorpus generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const ZipfSampler zipf(config.vocab_size, config.zipf_exponent);
  const std::size_t T = config.n_templates;

  std::vector<std::vector<std::size_t>> templates(T);
  for (auto& t : templates) {
    const std::size_t span = config.template_max - config.template_min + 1;
    const std::size_t len = config.template_min + static_cast<std::size_t>(rng.uniform_index(span));
    t = draw_distinct(zipf, len, rng);
  }

  std::vector<double> weights(T);
  for (auto& w : weights) w = bounded_power_law(config.copies_min, config.copies_max, config.copies_exponent, rng);
  std::size_t n_merged = 0;
  std::vector<std::size_t> copies(T);
  if (config.n_docs == 0) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < T; ++i) total += copies[i] = static_cast<std::size_t>(std::floor(weights[i]));
    n_merged = static_cast<std::size_t>(std::llround(config.merge_fraction * static_cast<double>(total)));
  } else {
    n_merged = static_cast<std::size_t>(std::llround(config.merge_fraction * static_cast<double>(config.n_docs)));
    if (config.n_docs < n_merged + T) {
      throw InvalidArgument("document count is too small for " + std::to_string(T) + " templates");
    }
    copies = allocate(weights, config.n_docs - n_merged);
  }

  const std::int64_t lo = config.window_start.epoch_seconds;
  const std::int64_t hi = config.window_end.epoch_seconds;
  const double window = static_cast<double>(hi - lo);
  std::vector<Peak> peaks(T);
  for (auto& p : peaks) {
    p.center = static_cast<double>(lo) + rng.uniform01() * window;
    p.spread = window * (0.01 + 0.04 * rng.uniform01());
  }

  struct Draft {
    std::vector<std::size_t> tokens;
    Label truth;
    std::int64_t time;
  };
  std::vector<Draft> drafts;
  drafts.reserve(config.n_docs ? config.n_docs : n_merged + T);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t c = 0; c < copies[t]; ++c) {
      std::vector<std::size_t> tokens = templates[t];
      mutate(tokens, config.mutation_rate, zipf, rng);
      drafts.push_back({std::move(tokens), static_cast<Label>(t), draw_time(peaks[t], lo, hi, rng)});
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, Label> pair_label;
  for (std::size_t m = 0; m < n_merged; ++m) {
    const std::size_t a = static_cast<std::size_t>(rng.uniform_index(T));
    std::size_t b = static_cast<std::size_t>(rng.uniform_index(T - 1));
    if (b >= a) ++b;
    auto [it, inserted] = pair_label.emplace(std::make_pair(a, b), static_cast<Label>(T + pair_label.size()));
    std::vector<std::size_t> tokens = templates[a];
    tokens.insert(tokens.end(), templates[b].begin(), templates[b].end());
    mutate(tokens, config.mutation_rate, zipf, rng);
    const Peak& later = peaks[a].center >= peaks[b].center ? peaks[a] : peaks[b];
    drafts.push_back({std::move(tokens), it->second, draw_time(later, lo, hi, rng)});
  }

  rng.shuffle(drafts);
  SynthCorpus out;
  out.documents.reserve(drafts.size());
  out.truth.labels.reserve(drafts.size());
  const int width = drafts.size() < 1000000 ? 6 : 9;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    char id[24];
    std::snprintf(id, sizeof id, "d%0*zu", width, i);
    out.documents.push_back(
        {id, join_tokens(drafts[i].tokens), Timestamp{drafts[i].time, config.window_start.offset_minutes}});
    out.truth.labels.push_back(drafts[i].truth);
  }
  return out;
}

SynthDescription describe(const SynthCorpus& corpus) {
  PreprocessConfig cfg;
  cfg.min_tokens = 0;
  const Preprocessor pre(cfg);
  TokenInterner interner;
  std::vector<TokenSet> sets;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    if (auto ts = pre(corpus.documents[i], static_cast<DocIndex>(i), interner); ts && !ts->empty()) {
      sets.push_back(std::move(*ts));
    }
  }
  SynthDescription d;
  if (!sets.empty()) d.corpus = corpus_stats(corpus.documents, sets);
  if (corpus.truth.size() > 0) d.groups = group_stats(corpus.truth);
  return d;
}

SynthCorpus generate_scripted(const std::vector<ScriptedScenario>& scenarios, const std::string& id_prefix) {
  SynthCorpus out;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const auto& sc = scenarios[s];
    std::vector<std::string> version = sc.base;
    std::size_t serial = 0;
    auto emit = [&](std::int64_t start) {
      for (std::size_t c = 0; c < sc.copies_per_version; ++c) {
        std::string text;
        for (std::size_t i = 0; i < version.size(); ++i) {
          if (i) text.push_back(' ');
          text += version[i];
        }
        const Timestamp ts{start + static_cast<std::int64_t>(c) * sc.spacing_seconds, sc.start.offset_minutes};
        out.documents.push_back({id_prefix + std::to_string(s) + "-" + std::to_string(serial++), text, ts});
        out.truth.labels.push_back(static_cast<Label>(s));
      }
    };
    emit(sc.start.epoch_seconds);
    for (const auto& edit : sc.edits) {
      for (const auto& r : edit.remove) std::erase(version, r);
      version.insert(version.end(), edit.add.begin(), edit.add.end());
      emit(edit.at.epoch_seconds);
    }
  }
  return out;
}

std::vector<ScriptedScenario> demo_scenarios(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  const ZipfSampler zipf(20000, 1.0);
  const Timestamp origin = parse_rfc3339("2020-02-01T09:00:00+08:00");
  constexpr std::int64_t kDay = 86400;
  std::vector<ScriptedScenario> out;
  std::unordered_set<std::size_t> used;
  auto fresh = [&] {
    for (;;) {
      const std::size_t r = 20000 + static_cast<std::size_t>(rng.uniform_index(1000000));
      if (used.insert(r).second) return synth_token(r);
    }
  };
  for (std::size_t i = 0; i < count; ++i) {
    ScriptedScenario sc;
    for (const std::size_t r : draw_distinct(zipf, 30, rng)) sc.base.push_back(synth_token(r));
    sc.start = Timestamp{origin.epoch_seconds + static_cast<std::int64_t>(i) * 3 * kDay, origin.offset_minutes};
    const std::string first = sc.base[static_cast<std::size_t>(rng.uniform_index(sc.base.size()))];
    std::string second = first;
    while (second == first) second = sc.base[static_cast<std::size_t>(rng.uniform_index(sc.base.size()))];
    sc.edits.push_back({Timestamp{sc.start.epoch_seconds + 4 * kDay, origin.offset_minutes}, {first}, {fresh()}});
    sc.edits.push_back({Timestamp{sc.start.epoch_seconds + 9 * kDay, origin.offset_minutes}, {second}, {fresh()}});
    out.push_back(std::move(sc));
  }
  return out;
}

void write_truth_csv(std::ostream& out, const SynthCorpus& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) ids.push_back(d.id);
  write_labels_csv(out, ids, corpus.truth, "template_id");
}

}  // namespace rumor
