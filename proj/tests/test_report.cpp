#include <algorithm>
#include <memory>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rumor/report.hpp"
#include "rumor/synthgen.hpp"
#include "support.hpp"

using namespace rumor;
using std::chrono::sys_days;
using namespace std::chrono_literals;

namespace {

Document at(const std::string& id, const std::string& when) { return Document{id, "x", parse_rfc3339(when)}; }

struct Cluster {
  std::vector<Document> docs;
  std::vector<TokenSet> tokens;
  TokenInterner interner;
};

std::unique_ptr<Cluster> cluster_of(const std::vector<std::pair<std::string, std::string>>& texts_and_times) {
  auto owned = std::make_unique<Cluster>();
  Cluster& c = *owned;
  PreprocessConfig cfg;
  cfg.min_tokens = 0;
  const Preprocessor pre(cfg);
  for (const auto& [text, when] : texts_and_times) {
    c.docs.push_back(Document{"m" + std::to_string(c.docs.size()), text, parse_rfc3339(when)});
    c.tokens.push_back(*pre(c.docs.back(), static_cast<DocIndex>(c.tokens.size()), c.interner));
  }
  return owned;
}

}  // namespace

TEST_CASE("group statistics examples") {
  const auto s = group_stats(Labeling{{0, 1, 1, 2, 2, 2}});
  CHECK(s.documents == 6);
  CHECK(s.all.groups == 3);
  CHECK(s.all.mean == 2);
  CHECK(s.all.max == 3);
  CHECK(s.all.min == 1);
  CHECK(s.all.q2 == 2);
  CHECK(s.all.q3 == 2.5);  // numpy.quantile([1,2,3], .75)
  CHECK(s.singletons == 1);
  REQUIRE(s.at_least_two.has_value());
  CHECK(s.at_least_two->groups == 2);
  CHECK(s.at_least_two->mean == 2.5);

  const auto t = group_stats(Labeling{{5, 9, 9, 7}});  // sizes {1, 2, 1}
  CHECK(t.all.mean == doctest::Approx(4.0 / 3.0));
  CHECK(t.all.q2 == 1);
  CHECK(t.all.max == 2);
  CHECK(t.all.std == doctest::Approx(0.4714045207910317).epsilon(1e-14));  // numpy.std([1,2,1])

  CHECK(group_stats(Labeling{{3, 3, 3}}).all.std == 0);
  const auto singles = group_stats(Labeling{{0, 1, 2}});
  CHECK_FALSE(singles.at_least_two.has_value());
  CHECK(singles.singletons == 3);
  CHECK_THROWS_AS(group_stats(Labeling{}), InvalidArgument);
}

TEST_CASE("size thresholds count large groups") {
  std::vector<Label> labels(1200, 0);
  labels.insert(labels.end(), 600, 1);
  labels.insert(labels.end(), 10, 2);
  const auto s = group_stats(Labeling{labels});
  REQUIRE(s.groups_at_least.size() == 2);
  CHECK(s.groups_at_least[0] == std::pair<std::size_t, std::size_t>{500, 2});
  CHECK(s.groups_at_least[1] == std::pair<std::size_t, std::size_t>{1000, 1});
}

TEST_CASE("group statistics ignore label values") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Label> a(200);
    for (auto& l : a) l = static_cast<Label>(rng() % 30);
    std::vector<Label> perm(30);
    std::iota(perm.begin(), perm.end(), 100);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Label> b;
    for (const Label l : a) b.push_back(perm[static_cast<std::size_t>(l)]);
    const auto x = group_stats(Labeling{a}), y = group_stats(Labeling{b});
    CHECK(x.all.mean == y.all.mean);
    CHECK(x.all.std == y.all.std);
    CHECK(x.all.q3 == y.all.q3);
    CHECK(x.singletons == y.singletons);
  }
}

TEST_CASE("top clusters") {
  const Labeling l{{4, 4, 2, 2, 7, 7, 7, 1}};
  const auto top = top_clusters(l, 2, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].cluster == 7);
  CHECK(top[0].size == 3);
  CHECK(top[1].cluster == 2);  // ties go to the smaller label
  CHECK(top_clusters(l, 0, 1).size() == 4);
  CHECK(top_clusters(l, 0, 3).size() == 1);
}

TEST_CASE("reports on one local day fall in one bin") {
  const std::vector<Document> docs{at("a", "2020-03-02T01:00:00+08:00"), at("b", "2020-03-02T12:00:00+08:00"),
                                   at("c", "2020-03-01T17:30:00Z")};  // 01:30 on the 2nd at +08:00
  const auto s = timeseries(docs, Labeling{{0, 0, 0}});
  REQUIRE(s.size() == 1);
  REQUIRE(s[0].bins.size() == 1);
  CHECK(s[0].bins[0].count == 3);
  CHECK(format_date(s[0].bins[0].date) == "2020-03-02");
  SeriesOptions utc;
  utc.utc_offset_minutes = 0;
  CHECK(timeseries(docs, Labeling{{0, 0, 0}}, utc)[0].bins.size() == 2);
}

TEST_CASE("time series conserve documents and fill gaps") {
  std::vector<Document> docs{at("a", "2020-03-02T10:00:00+08:00"), at("b", "2020-03-05T10:00:00+08:00"),
                             at("c", "2020-03-05T11:00:00+08:00"), Document{"d", "x", std::nullopt},
                             at("e", "2020-03-03T10:00:00+08:00")};
  const Labeling labels{{0, 0, 0, 0, 1}};
  const auto s = timeseries(docs, labels);
  REQUIRE(s.size() == 2);
  CHECK(s[0].bins.size() == 4);
  CHECK(s[0].bins[1].count == 0);
  CHECK(s[0].total == 3);
  CHECK(s[0].untimestamped == 1);
  CHECK(s[0].total + s[0].untimestamped + s[1].total == docs.size());
  SeriesOptions only;
  only.clusters = {1};
  CHECK(timeseries(docs, labels, only).size() == 1);
  std::ostringstream out;
  write_timeseries_csv(out, s);
  CHECK(out.str().rfind("cluster_id,date,count\n0,2020-03-02,1\n0,2020-03-03,0\n", 0) == 0);
  CHECK_THROWS_AS(timeseries(std::vector<Document>{Document{"z", "x", std::nullopt}}, Labeling{{0}}),
                  InvalidArgument);
}

TEST_CASE("week bins start on monday") {
  const std::vector<Document> docs{at("a", "2020-03-04T10:00:00+08:00"), at("b", "2020-03-08T23:00:00+08:00"),
                                   at("c", "2020-03-09T00:30:00+08:00")};
  SeriesOptions week;
  week.bin = TimeBin::Week;
  const auto s = timeseries(docs, Labeling{{0, 0, 0}}, week);
  REQUIRE(s[0].bins.size() == 2);
  CHECK(format_date(s[0].bins[0].date) == "2020-03-02");
  CHECK(s[0].bins[0].count == 2);
  CHECK(s[0].bins[1].count == 1);
  CHECK_THROWS_AS(parse_time_bin("month"), InvalidArgument);
}

TEST_CASE("peaks are strict local maxima above the quantile") {
  const sys_days d0{std::chrono::year{2020} / 3 / 1};
  std::vector<DatedCount> bins;
  for (const std::size_t c : {1, 5, 2, 2, 9, 3, 3, 0, 4}) bins.push_back({d0 + std::chrono::days{bins.size()}, c});
  // nonzero counts {1,5,2,2,9,3,3,4}: 0.5 quantile is 3
  const auto p = find_peaks(bins, 0.5);
  REQUIRE(p.size() == 3);
  CHECK(p[0].count == 5);
  CHECK(p[1].count == 9);
  CHECK(p[2].count == 4);
  CHECK(find_peaks(bins, 0.9).size() == 1);
  std::vector<DatedCount> flat{{d0, 2}, {d0 + std::chrono::days{1}, 2}};
  CHECK(find_peaks(flat, 0.0).empty());
}

TEST_CASE("synthetic template peaks are found near the busiest day") {
  SynthConfig cfg;
  cfg.n_templates = 2;
  cfg.n_docs = 400;
  cfg.merge_fraction = 0;
  cfg.seed = 9;
  const auto c = generate(cfg);
  for (const auto& s : timeseries(c.documents, c.truth)) {
    REQUIRE_FALSE(s.peaks.empty());
    const auto busiest = std::max_element(s.bins.begin(), s.bins.end(),
                                          [](const DatedCount& a, const DatedCount& b) { return a.count < b.count; });
    CHECK(std::any_of(s.peaks.begin(), s.peaks.end(), [&](const DatedCount& p) { return p.count == busiest->count; }));
  }
}

TEST_CASE("change log of identical documents is empty") {
  auto c = cluster_of({{"a b c", "2020-03-01T10:00:00+08:00"}, {"a b c", "2020-03-02T10:00:00+08:00"}});
  for (const auto ref : {ChangeReference::Earliest, ChangeReference::Medoid})
    CHECK(change_log(c->docs, c->tokens, ref, c->interner).entries.empty());
}

TEST_CASE("one substitution gives one entry") {
  auto c = cluster_of({{"a b c", "2020-03-01T10:00:00+08:00"}, {"a b d", "2020-03-02T10:00:00+08:00"}});
  const auto log = change_log(c->docs, c->tokens, ChangeReference::Earliest, c->interner);
  CHECK(log.reference_doc_id == "m0");
  REQUIRE(log.entries.size() == 1);
  CHECK(log.entries[0].added == std::vector<std::string>{"d"});
  CHECK(log.entries[0].removed == std::vector<std::string>{"c"});
  CHECK(log.entries[0].date == "2020-03-02");
  CHECK(log.entries[0].doc_id == "m1");
  const auto json = nlohmann::json::parse(change_log_to_json(log, 3));
  REQUIRE(json.size() == 1);
  CHECK(json[0]["cluster_id"] == 3);
  CHECK(json[0]["reference_doc_id"] == "m0");
  CHECK(json[0]["added"][0] == "d");
}

TEST_CASE("consecutive repeats are suppressed but returns are reported") {
  auto c = cluster_of({{"a b c", "2020-03-01T10:00:00+08:00"},
                       {"a b d", "2020-03-02T10:00:00+08:00"},
                       {"a b d", "2020-03-03T10:00:00+08:00"},
                       {"a b c", "2020-03-04T10:00:00+08:00"},
                       {"a b d", "2020-03-05T10:00:00+08:00"}});
  const auto log = change_log(c->docs, c->tokens, ChangeReference::Earliest, c->interner);
  REQUIRE(log.entries.size() == 2);
  CHECK(log.entries[0].doc_id == "m1");
  CHECK(log.entries[1].doc_id == "m4");
}

TEST_CASE("scripted scenario change log") {
  const auto scenarios = demo_scenarios(1, 4);
  const auto corpus = generate_scripted(scenarios);
  PreprocessConfig cfg;
  cfg.min_tokens = 0;
  TokenInterner interner;
  const auto sets = preprocess_corpus(corpus.documents, Preprocessor(cfg), interner, 1);
  const auto log = change_log(corpus.documents, sets, ChangeReference::Earliest, interner);
  const auto& e = scenarios[0].edits;
  REQUIRE(log.entries.size() == 2);
  CHECK(log.entries[0].first_seen == e[0].at);
  CHECK(log.entries[0].added == e[0].add);
  CHECK(log.entries[0].removed == e[0].remove);
  CHECK(log.entries[1].first_seen == e[1].at);
  std::vector<std::string> added{e[0].add[0], e[1].add[0]}, removed{e[0].remove[0], e[1].remove[0]};
  std::sort(added.begin(), added.end());
  std::sort(removed.begin(), removed.end());
  CHECK(log.entries[1].added == added);
  CHECK(log.entries[1].removed == removed);
}

TEST_CASE("change log needs two timestamped documents") {
  auto c = cluster_of({{"a b c", "2020-03-01T10:00:00+08:00"}});
  CHECK_THROWS_AS(change_log(c->docs, c->tokens, ChangeReference::Earliest, c->interner), InvalidArgument);
  CHECK_THROWS_AS(parse_change_reference("latest"), InvalidArgument);
}

TEST_CASE("group stats json") {
  const Labeling l{{0, 0, 1}};
  const auto json = nlohmann::json::parse(group_stats_to_json(group_stats(l), top_clusters(l, 0, 1)));
  CHECK(json["documents"] == 3);
  CHECK(json["singletons"] == 1);
  CHECK(json["clusters"][0]["cluster_id"] == 0);
  CHECK(json["clusters"][0]["size"] == 2);
}
