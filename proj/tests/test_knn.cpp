#include "doctest.h"
#include "rumor/knn.hpp"
#include "support.hpp"

using namespace rumor;
using support::token_set;

TEST_CASE("fit validates its inputs") {
  CHECK_NOTHROW(fit({token_set({1, 2})}, Labeling{{0}}, 1));
  CHECK_THROWS_AS(fit({token_set({1, 2})}, Labeling{{0}}, 0), InvalidArgument);
  CHECK_THROWS_AS(fit({token_set({1, 2})}, Labeling{{0}}, 2), InvalidArgument);
  CHECK_THROWS_AS(fit({}, Labeling{}, 1), InvalidArgument);
  CHECK_THROWS_AS(fit({token_set({1}), token_set({2})}, Labeling{{0}}, 1), InvalidArgument);
}

TEST_CASE("predict examples") {
  const auto model = fit({token_set({1, 2, 3}), token_set({4, 5, 6}), token_set({7, 8})}, Labeling{{5, -1, 9}}, 1);
  CHECK(model.predict(token_set({4, 5, 6})) == -1);
  CHECK(model.predict(token_set({7, 8})) == 9);
  CHECK(model.predict(token_set({1, 2, 3, 99})) == 5);
  // All distances 1: the first training document wins.
  CHECK(model.predict(token_set({100, 101})) == 5);
  CHECK_THROWS_AS(model.predict(TokenSet{}), InvalidArgument);
}

TEST_CASE("training documents predict their own label") {
  std::mt19937_64 rng(1);
  const auto docs = support::family_corpus(rng, 100, 8, 0.2);
  const auto labels = agglomerate(distance_matrix(docs), Linkage::Complete, 0.6).labeling;
  const auto model = fit(docs, labels, 1);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    // the first of several identical documents is the nearest
    const auto nn = model.nearest(docs[i]);
    REQUIRE(nn.size() == 1);
    CHECK(nn[0].distance == 0.0);
    CHECK(docs[nn[0].doc].tokens == docs[i].tokens);
    CHECK(model.predict(docs[i]) == labels[nn[0].doc]);
  }
}

TEST_CASE("nearest equals an exhaustive scan") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 12; ++trial) {
    auto train = support::family_corpus(rng, 300, 10 + trial * 4, 0.1 + 0.05 * trial, 800);
    // a few very frequent tokens make pruning hard
    for (std::size_t i = 0; i < train.size(); i += 2) {
      train[i].tokens.insert(train[i].tokens.begin(), 0);
      train[i] = make_token_set(train[i].doc_index, train[i].tokens);
    }
    Labeling labels;
    for (std::size_t i = 0; i < train.size(); ++i) labels.labels.push_back(static_cast<Label>(i % 17) - 1);
    const int k = 1 + trial % 5;
    const auto model = fit(train, labels, k);
    KnnScratch scratch;
    for (int q = 0; q < 100; ++q) {
      TokenSet query;
      if (q % 4 == 0) {
        query = support::random_set(rng, 800, 3, 50);
      } else {
        query = train[rng() % train.size()];
        if (q % 4 == 2 && query.size() > 3) query.tokens.pop_back();
        if (q % 4 == 3) query = make_token_set(0, {query.tokens[0], 5000, 5001});
      }
      const auto want = support::exhaustive_knn(train, query, static_cast<std::size_t>(k));
      const auto got = model.nearest(query, scratch);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        REQUIRE(got[i].doc == want[i].second);
        REQUIRE(got[i].distance == want[i].first);
      }
    }
  }
}

TEST_CASE("majority vote with nearest-first tie break") {
  // Query {1..10}; distances 0.1, 0.2, 0.3 to the three training docs.
  const std::vector<TokenSet> train{token_set({1, 2, 3, 4, 5, 6, 7, 8, 9}), token_set({1, 2, 3, 4, 5, 6, 7, 8}),
                                    token_set({1, 2, 3, 4, 5, 6, 7})};
  const auto q = token_set({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(fit(train, Labeling{{4, 8, 8}}, 3).predict(q) == 8);
  CHECK(fit(train, Labeling{{4, 8, 8}}, 2).predict(q) == 4);
  CHECK(fit(train, Labeling{{4, 8, 6}}, 3).predict(q) == 4);
}

TEST_CASE("batch prediction is independent of the thread count") {
  std::mt19937_64 rng(6);
  const auto docs = support::family_corpus(rng, 600, 30, 0.25);
  const std::vector<TokenSet> train(docs.begin(), docs.begin() + 200);
  const std::vector<TokenSet> queries(docs.begin() + 200, docs.end());
  Labeling labels;
  for (std::size_t i = 0; i < train.size(); ++i) labels.labels.push_back(static_cast<Label>(i % 9));
  const auto model = fit(train, labels, 3);
  const auto one = model.predict_batch(queries, 1);
  CHECK(one == model.predict_batch(queries, 4));
  for (std::size_t i = 0; i < queries.size(); i += 37) CHECK(one[i] == model.predict(queries[i]));
}
