#include "rumor/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "rumor/evaluate.hpp"
#include "rumor/format.hpp"
#include "rumor/parallel.hpp"
#include "rumor/random.hpp"
#include "rumor/stats.hpp"

namespace rumor {

ModelSpec pure_model() { return ModelSpec{"pure", true, {}}; }

ModelSpec hybrid_model(const HybridConfig& config) {
  config.validate();
  return ModelSpec{"hybrid:" + format_double(config.train_portion), false, config};
}

std::vector<ModelSpec> parse_models(std::string_view text, const HybridConfig& base) {
  std::vector<ModelSpec> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    if (item == "pure") {
      out.push_back(pure_model());
    } else if (item.starts_with("hybrid:")) {
      const std::string_view p_text = item.substr(7);
      double p = 0;
      auto [ptr, ec] = std::from_chars(p_text.data(), p_text.data() + p_text.size(), p);
      if (ec != std::errc{} || ptr != p_text.data() + p_text.size()) {
        throw InvalidArgument("malformed train portion in model '" + std::string(item) + "'");
      }
      HybridConfig cfg = base;
      cfg.train_portion = p;
      out.push_back(hybrid_model(cfg));
    } else {
      throw InvalidArgument("unknown model '" + std::string(item) + "' (expected pure or hybrid:<p>)");
    }
  }
  if (out.empty()) throw InvalidArgument("no models given");
  return out;
}

std::vector<std::size_t> bench_subset(std::size_t corpus_size, std::size_t size, std::uint64_t seed, int iteration) {
  if (size > corpus_size) {
    throw InvalidArgument("benchmark size " + std::to_string(size) + " exceeds the corpus size " +
                          std::to_string(corpus_size));
  }
  std::vector<std::size_t> perm(corpus_size);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(derive_seed(seed, size, static_cast<std::uint64_t>(iteration)));
  for (std::size_t i = 0; i < size; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(corpus_size - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(size);
  std::sort(perm.begin(), perm.end());
  return perm;
}

namespace {

using Clock = std::chrono::steady_clock;

MeanWithCi aggregate(const std::vector<double>& xs) {
  return MeanWithCi{stats::mean(xs), stats::ci95_half_width(xs)};
}

std::vector<BenchSample> run_iteration(std::span<const TokenSet> corpus, const BenchOptions& options, std::size_t size,
                                       int iteration, unsigned threads) {
  const auto subset_idx = bench_subset(corpus.size(), size, options.seed, iteration);
  std::vector<TokenSet> subset;
  subset.reserve(size);
  for (const std::size_t i : subset_idx) subset.push_back(corpus[i]);

  auto t = Clock::now();
  const Labeling reference = pure_cluster(subset, options.threshold, options.linkage, threads);
  const double reference_seconds = std::chrono::duration<double>(Clock::now() - t).count();

  std::vector<BenchSample> out;
  for (const auto& model : options.models) {
    BenchSample s{model.name, size, iteration, 0, 1, 1, 1};
    if (model.pure) {
      s.runtime_s = reference_seconds;
    } else {
      HybridConfig cfg = model.config;
      cfg.seed = derive_seed(cfg.seed, size, static_cast<std::uint64_t>(iteration));
      t = Clock::now();
      const HybridResult result = hybrid_cluster(subset, cfg, threads);
      s.runtime_s = std::chrono::duration<double>(Clock::now() - t).count();
      const EvalReport eval = evaluate(reference, result.labeling);
      s.precision = eval.precision;
      s.recall = eval.recall;
      s.f_score = eval.f_score;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

BenchReport run_bench(std::span<const TokenSet> corpus, const BenchOptions& options) {
  if (options.iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (options.models.empty()) throw InvalidArgument("no models to benchmark");
  if (options.sizes.empty()) throw InvalidArgument("no benchmark sizes");
  for (const std::size_t size : options.sizes) {
    if (size > corpus.size()) {
      throw InvalidArgument("benchmark size " + std::to_string(size) + " exceeds the corpus size " +
                            std::to_string(corpus.size()));
    }
    if (size < 2) throw InvalidArgument("benchmark sizes must be >= 2");
  }

  BenchReport report;
  report.iterations = options.iterations;
  for (const std::size_t size : options.sizes) {
    std::vector<std::vector<BenchSample>> per_iter(static_cast<std::size_t>(options.iterations));
    if (options.parallel_iterations) {
      parallel_for(per_iter.size(), options.threads, [&](std::size_t it) {
        per_iter[it] = run_iteration(corpus, options, size, static_cast<int>(it), 1);
      });
    } else {
      for (std::size_t it = 0; it < per_iter.size(); ++it) {
        per_iter[it] = run_iteration(corpus, options, size, static_cast<int>(it), options.threads);
      }
    }
    for (std::size_t m = 0; m < options.models.size(); ++m) {
      std::vector<double> rt, p, r, f;
      for (const auto& samples : per_iter) {
        rt.push_back(samples[m].runtime_s);
        p.push_back(samples[m].precision);
        r.push_back(samples[m].recall);
        f.push_back(samples[m].f_score);
      }
      report.rows.push_back(
          {options.models[m].name, size, options.iterations, aggregate(rt), aggregate(p), aggregate(r), aggregate(f)});
    }
    for (auto& samples : per_iter)
      for (auto& s : samples) report.samples.push_back(std::move(s));
  }
  return report;
}

namespace {

nlohmann::ordered_json to_json(const MeanWithCi& m) {
  nlohmann::ordered_json j;
  j["mean"] = m.mean;
  if (m.ci95) j["ci95_half_width"] = *m.ci95;
  return j;
}

}  // namespace

std::string bench_report_to_json(const BenchReport& report, int indent) {
  nlohmann::ordered_json j;
  j["iterations"] = report.iterations;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"model", r.model},
                    {"size", r.size},
                    {"iterations", r.iterations},
                    {"runtime_s", to_json(r.runtime_s)},
                    {"precision", to_json(r.precision)},
                    {"recall", to_json(r.recall)},
                    {"f_score", to_json(r.f_score)}});
  }
  j["rows"] = rows;
  return j.dump(indent) + "\n";
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "model,size,iteration,runtime_s,precision,recall,f_score\n";
  for (const auto& s : report.samples) {
    out << s.model << ',' << s.size << ',' << s.iteration << ',' << format_double(s.runtime_s) << ','
        << format_double(s.precision) << ',' << format_double(s.recall) << ',' << format_double(s.f_score) << '\n';
  }
}

}  // namespace rumor
