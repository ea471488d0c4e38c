#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rumor/common.hpp"
#include "rumor/timestamp.hpp"

namespace rumor {

/// One reported message. `text` is kept byte-exact for reporting.
struct Document {
  std::string id;
  std::string text;
  std::optional<Timestamp> timestamp;
};

/// Sorted, deduplicated token ids of one document.
struct TokenSet {
  DocIndex doc_index = 0;
  std::vector<TokenId> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

/// Builds a TokenSet from arbitrary ids (sorts and deduplicates).
TokenSet make_token_set(DocIndex doc_index, std::vector<TokenId> tokens);

/// Corpus-wide token -> id table. Insertions are serialized; lookups may run
/// concurrently with each other.
class TokenInterner {
 public:
  TokenId intern(std::string_view token);
  std::optional<TokenId> find(std::string_view token) const;
  std::string token(TokenId id) const;
  std::size_t size() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> ids_;
  std::vector<std::string> tokens_;
};

// --- configuration -------------------------------------------------------

struct CodePointRange {
  char32_t first = 0;
  char32_t last = 0;  // inclusive
  bool contains(char32_t cp) const { return cp >= first && cp <= last; }
};

/// CJK Unified Ideographs and Extension A.
std::vector<CodePointRange> default_cjk_ranges();

/// Parses "4E00-9FFF,3400-4DBF" (hex, inclusive).
std::vector<CodePointRange> parse_code_point_ranges(std::string_view text);

enum class CharsetMode { KeepAll, CjkOnly, CustomRanges };

struct CharsetFilter {
  CharsetMode mode = CharsetMode::KeepAll;
  std::vector<CodePointRange> ranges;  // used by CjkOnly (defaults filled in) and CustomRanges

  /// Characters counted as "letters in the filter class" by corpus_stats.
  /// KeepAll uses the default CJK ranges.
  bool in_class(char32_t cp) const;
  bool keeps(char32_t cp) const { return mode == CharsetMode::KeepAll || in_class(cp); }
};

enum class TokenizerKind { Whitespace, CharNgram, DictMaxMatch };

struct PreprocessConfig {
  CharsetFilter charset;
  TokenizerKind tokenizer = TokenizerKind::Whitespace;
  int ngram = 2;                                   // for CharNgram, >= 1
  std::optional<std::filesystem::path> lexicon;    // required for DictMaxMatch
  std::optional<std::filesystem::path> stopwords;  // one token per line
  int min_tokens = 20;
};

// --- tokenizers ----------------------------------------------------------

/// Splits one run of kept, non-space characters into tokens.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual void tokenize(std::u32string_view segment, std::vector<std::string>& out) const = 0;
};

class WhitespaceTokenizer final : public Tokenizer {
 public:
  void tokenize(std::u32string_view segment, std::vector<std::string>& out) const override;
};

/// Overlapping character n-grams; a segment shorter than n is one token.
class CharNgramTokenizer final : public Tokenizer {
 public:
  explicit CharNgramTokenizer(int n);
  void tokenize(std::u32string_view segment, std::vector<std::string>& out) const override;

 private:
  std::size_t n_;
};

/// Greedy longest match against a lexicon; unmatched characters become
/// single-character tokens.
class MaxMatchTokenizer final : public Tokenizer {
 public:
  explicit MaxMatchTokenizer(const std::vector<std::string>& lexicon);
  void tokenize(std::u32string_view segment, std::vector<std::string>& out) const override;

 private:
  std::unordered_set<std::u32string> words_;
  std::size_t max_len_ = 0;
};

std::vector<std::string> read_word_list(const std::filesystem::path& path);

// --- preprocessing -------------------------------------------------------

/// Preprocessing pipeline with its lexicon and stopwords loaded once.
class Preprocessor {
 public:
  explicit Preprocessor(PreprocessConfig config);

  const PreprocessConfig& config() const { return config_; }

  /// Charset filter, tokenization and stopword removal, before dedup.
  std::vector<std::string> tokens(std::string_view text) const;

  /// Full pipeline; absent when fewer than min_tokens unique tokens remain.
  std::optional<TokenSet> operator()(const Document& doc, DocIndex doc_index, TokenInterner& interner) const;

 private:
  PreprocessConfig config_;
  std::unique_ptr<Tokenizer> tokenizer_;
  std::unordered_set<std::string> stopwords_;
};

std::optional<TokenSet> preprocess(const Document& doc, const PreprocessConfig& config, TokenInterner& interner,
                                   DocIndex doc_index = 0);

/// Preprocesses every document. Tokenization runs on `threads` workers;
/// interning happens afterwards in document order, so token ids do not depend
/// on the thread count. Returns only retained documents, in corpus order.
std::vector<TokenSet> preprocess_corpus(std::span<const Document> docs, const Preprocessor& pre,
                                        TokenInterner& interner, unsigned threads = 1);

// --- ingestion -----------------------------------------------------------

enum class InputFormat { Jsonl, Csv };

/// jsonl for ".jsonl"/".json", csv for ".csv"; otherwise jsonl.
InputFormat format_from_path(const std::filesystem::path& path);

std::vector<Document> ingest(const std::filesystem::path& path, InputFormat format);
std::vector<Document> ingest_stream(std::istream& in, InputFormat format);

void write_jsonl(std::ostream& out, std::span<const Document> docs);

// --- statistics ----------------------------------------------------------

struct Summary {
  double min = 0;
  double median = 0;
  double max = 0;
};

struct CorpusStats {
  std::size_t documents = 0;
  Summary all_chars;
  Summary class_chars;  // characters in the charset filter class
  Summary digits;
  Summary ascii_alpha;
  Summary other;
  Summary tokens;
};

/// Statistics over the retained documents (those referenced by `tokensets`).
CorpusStats corpus_stats(std::span<const Document> docs, std::span<const TokenSet> tokensets,
                         const CharsetFilter& charset = {});

}  // namespace rumor
