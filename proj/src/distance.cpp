#include "rumor/distance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>

#include "rumor/parallel.hpp"

namespace rumor {

std::size_t intersection_size(std::span<const TokenId> a, std::span<const TokenId> b) {
  std::size_t shared = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
  }
  return shared;
}

double token_distance(const TokenSet& a, const TokenSet& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("token distance of an empty token set");
  return overlap_distance(intersection_size(a.tokens, b.tokens), a.size(), b.size());
}

// --- condensed matrix ----------------------------------------------------

CondensedDistanceMatrix::CondensedDistanceMatrix(std::size_t n, double fill)
    : n_(n), values_(n < 2 ? 0 : n * (n - 1) / 2, fill) {}

CondensedDistanceMatrix::CondensedDistanceMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  const std::size_t expected = n < 2 ? 0 : n * (n - 1) / 2;
  if (values_.size() != expected) {
    throw InvalidArgument("condensed matrix of " + std::to_string(n) + " items needs " + std::to_string(expected) +
                          " values, got " + std::to_string(values_.size()));
  }
}

namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64_le(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw Error("truncated distance matrix dump");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return v;
}

}  // namespace

void CondensedDistanceMatrix::write_binary(std::ostream& out) const {
  out.write("CDM1", 4);
  put_u64_le(out, n_);
  for (const double v : values_) put_u64_le(out, std::bit_cast<std::uint64_t>(v));
}

CondensedDistanceMatrix CondensedDistanceMatrix::read_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "CDM1", 4) != 0) throw Error("not a CDM1 distance matrix dump");
  const std::uint64_t n = get_u64_le(in);
  std::vector<double> values(n < 2 ? 0 : n * (n - 1) / 2);
  for (auto& v : values) {
    v = std::bit_cast<double>(get_u64_le(in));
    if (!(v >= 0.0 && v <= 1.0)) throw Error("distance matrix dump holds a value outside [0, 1]");
  }
  return CondensedDistanceMatrix(n, std::move(values));
}

// --- matrix construction -------------------------------------------------
//
// Shared-token counts come from two sources: very frequent tokens are packed
// into per-document bitsets and counted with popcount, the rest are counted by
// walking postings lists. Both give exact counts; the split only changes cost.

namespace {

constexpr std::size_t kMaxBitsetWords = 16;

struct Layout {
  std::size_t words = 0;
  std::vector<std::uint64_t> bits;                  // n * words
  std::vector<std::vector<TokenId>> rare_tokens;    // per doc
  std::vector<std::vector<DocIndex>> rare_postings; // by token id
};

Layout plan_layout(std::span<const TokenSet> docs) {
  const std::size_t n = docs.size();
  TokenId bound = 0;
  for (const auto& d : docs) {
    if (d.empty()) throw InvalidArgument("distance matrix over an empty token set");
    bound = std::max<TokenId>(bound, d.tokens.back() + 1);
  }
  std::vector<std::uint32_t> df(bound, 0);
  for (const auto& d : docs)
    for (const TokenId t : d.tokens) ++df[t];

  // A token earns a bitset slot once its postings walk would cost more than
  // its share of a bitset word: df^2 / 2 > n^2 / (2 * 64).
  std::vector<TokenId> frequent;
  for (TokenId t = 0; t < bound; ++t)
    if (std::uint64_t{df[t]} * 8 > n) frequent.push_back(t);
  std::sort(frequent.begin(), frequent.end(), [&](TokenId a, TokenId b) {
    return df[a] != df[b] ? df[a] > df[b] : a < b;
  });
  if (frequent.size() > kMaxBitsetWords * 64) frequent.resize(kMaxBitsetWords * 64);

  Layout out;
  out.words = (frequent.size() + 63) / 64;
  std::vector<std::int32_t> slot(bound, -1);
  for (std::size_t s = 0; s < frequent.size(); ++s) slot[frequent[s]] = static_cast<std::int32_t>(s);

  out.bits.assign(n * out.words, 0);
  out.rare_tokens.resize(n);
  out.rare_postings.resize(bound);
  for (std::size_t i = 0; i < n; ++i) {
    for (const TokenId t : docs[i].tokens) {
      if (const auto s = slot[t]; s >= 0) {
        out.bits[i * out.words + static_cast<std::size_t>(s) / 64] |= std::uint64_t{1} << (s % 64);
      } else {
        out.rare_tokens[i].push_back(t);
        out.rare_postings[t].push_back(static_cast<DocIndex>(i));
      }
    }
  }
  return out;
}

}  // namespace

CondensedDistanceMatrix distance_matrix(std::span<const TokenSet> docs, unsigned threads) {
  const std::size_t n = docs.size();
  if (n < 2) throw InvalidArgument("distance matrix needs at least two documents");
  const Layout layout = plan_layout(docs);
  const std::size_t words = layout.words;
  CondensedDistanceMatrix m(n);
  std::span<double> values = m.values();

  parallel_for_with_state(
      n - 1, threads, [n] { return std::vector<std::uint32_t>(n, 0); },
      [&](std::vector<std::uint32_t>& shared, std::size_t i) {
        for (const TokenId t : layout.rare_tokens[i]) {
          const auto& post = layout.rare_postings[t];
          for (auto it = std::upper_bound(post.begin(), post.end(), static_cast<DocIndex>(i)); it != post.end(); ++it) {
            ++shared[*it];
          }
        }
        const std::uint64_t* bi = layout.bits.data() + i * words;
        const std::size_t size_i = docs[i].size();
        double* row = values.data() + CondensedDistanceMatrix::offset(n, i, i + 1);
        for (std::size_t j = i + 1; j < n; ++j) {
          std::size_t common = shared[j];
          shared[j] = 0;
          const std::uint64_t* bj = layout.bits.data() + j * words;
          for (std::size_t w = 0; w < words; ++w) common += static_cast<std::size_t>(std::popcount(bi[w] & bj[w]));
          row[j - i - 1] = overlap_distance(common, size_i, docs[j].size());
        }
      },
      8);
  return m;
}

// --- inverted index ------------------------------------------------------

InvertedIndex::InvertedIndex(std::span<const TokenSet> docs) {
  TokenId bound = 0;
  for (const auto& d : docs)
    if (!d.empty()) bound = std::max<TokenId>(bound, d.tokens.back() + 1);
  postings_.resize(bound);
  doc_sizes_.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    doc_sizes_.push_back(static_cast<std::uint32_t>(docs[i].size()));
    for (const TokenId t : docs[i].tokens) postings_[t].push_back(static_cast<DocIndex>(i));
  }
}

InvertedIndex build_index(std::span<const TokenSet> docs) { return InvertedIndex(docs); }

std::vector<Neighbor> neighbors_within(const InvertedIndex& index, const TokenSet& query, double radius) {
  if (!(radius >= 0.0 && radius < 1.0)) throw InvalidArgument("neighbor radius must be in [0, 1)");
  if (query.empty()) throw InvalidArgument("neighbor query with an empty token set");
  const std::size_t q = query.size();

  std::vector<std::uint32_t> shared(index.doc_count(), 0);
  std::vector<DocIndex> touched;
  for (const TokenId t : query.tokens) {
    for (const DocIndex d : index.postings(t)) {
      if (shared[d]++ == 0) touched.push_back(d);
    }
  }
  std::sort(touched.begin(), touched.end());

  // A match needs shared >= (1 - radius) * max(|q|, |d|); the bound is
  // loosened slightly and every survivor is confirmed with the exact formula.
  const double keep = 1.0 - radius;
  std::vector<Neighbor> out;
  for (const DocIndex d : touched) {
    const std::size_t size_d = index.doc_size(d);
    const double needed = keep * static_cast<double>(std::max(q, size_d)) - 1e-9;
    if (static_cast<double>(shared[d]) < needed) continue;
    const double dist = overlap_distance(shared[d], q, size_d);
    if (dist <= radius) out.push_back({d, dist});
  }
  return out;
}

}  // namespace rumor
