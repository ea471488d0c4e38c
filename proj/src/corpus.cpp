#include "rumor/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <mutex>
#include "json.hpp"
#include <sstream>

#include "rumor/csv.hpp"
#include "rumor/parallel.hpp"
#include "rumor/stats.hpp"
#include "rumor/unicode.hpp"

namespace rumor {

TokenSet make_token_set(DocIndex doc_index, std::vector<TokenId> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return TokenSet{doc_index, std::move(tokens)};
}

// --- interner ------------------------------------------------------------

TokenId TokenInterner::intern(std::string_view token) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  }
  std::unique_lock lock(mutex_);
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(std::string(token), id);
  return id;
}

std::optional<TokenId> TokenInterner::find(std::string_view token) const {
  std::shared_lock lock(mutex_);
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::string TokenInterner::token(TokenId id) const {
  std::shared_lock lock(mutex_);
  if (id >= tokens_.size()) throw InvalidArgument("unknown token id " + std::to_string(id));
  return tokens_[id];
}

std::size_t TokenInterner::size() const {
  std::shared_lock lock(mutex_);
  return tokens_.size();
}

// --- charset -------------------------------------------------------------

std::vector<CodePointRange> default_cjk_ranges() { return {{0x4E00, 0x9FFF}, {0x3400, 0x4DBF}}; }

std::vector<CodePointRange> parse_code_point_ranges(std::string_view text) {
  std::vector<CodePointRange> out;
  auto parse_hex = [&](std::string_view s) {
    std::uint32_t v = 0;
    if (s.starts_with("U+") || s.starts_with("u+")) s.remove_prefix(2);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v > 0x10FFFF) {
      throw InvalidArgument("malformed code point '" + std::string(s) + "' in range list");
    }
    return static_cast<char32_t>(v);
  };
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto dash = item.find('-');
    CodePointRange r;
    if (dash == std::string_view::npos) {
      r.first = r.last = parse_hex(item);
    } else {
      r.first = parse_hex(item.substr(0, dash));
      r.last = parse_hex(item.substr(dash + 1));
    }
    if (r.first > r.last) throw InvalidArgument("empty code point range '" + std::string(item) + "'");
    out.push_back(r);
  }
  if (out.empty()) throw InvalidArgument("empty code point range list");
  return out;
}

bool CharsetFilter::in_class(char32_t cp) const {
  if (mode == CharsetMode::CustomRanges || (mode == CharsetMode::CjkOnly && !ranges.empty())) {
    return std::any_of(ranges.begin(), ranges.end(), [cp](const CodePointRange& r) { return r.contains(cp); });
  }
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF);
}

// --- tokenizers ----------------------------------------------------------

void WhitespaceTokenizer::tokenize(std::u32string_view segment, std::vector<std::string>& out) const {
  out.push_back(unicode::encode_utf8(segment));
}

CharNgramTokenizer::CharNgramTokenizer(int n) : n_(static_cast<std::size_t>(n)) {
  if (n < 1) throw InvalidArgument("char n-gram size must be >= 1");
}

void CharNgramTokenizer::tokenize(std::u32string_view segment, std::vector<std::string>& out) const {
  if (segment.size() <= n_) {
    out.push_back(unicode::encode_utf8(segment));
    return;
  }
  for (std::size_t i = 0; i + n_ <= segment.size(); ++i) out.push_back(unicode::encode_utf8(segment.substr(i, n_)));
}

MaxMatchTokenizer::MaxMatchTokenizer(const std::vector<std::string>& lexicon) {
  for (const auto& w : lexicon) {
    auto u = unicode::decode_utf8(w);
    if (u.empty()) continue;
    max_len_ = std::max(max_len_, u.size());
    words_.insert(std::move(u));
  }
}

void MaxMatchTokenizer::tokenize(std::u32string_view segment, std::vector<std::string>& out) const {
  std::size_t i = 0;
  while (i < segment.size()) {
    std::size_t len = std::min(max_len_, segment.size() - i);
    for (; len > 1; --len) {
      if (words_.contains(std::u32string(segment.substr(i, len)))) break;
    }
    if (len == 0) len = 1;
    out.push_back(unicode::encode_utf8(segment.substr(i, len)));
    i += len;
  }
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open word list " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (words.empty() && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty()) words.push_back(line);
  }
  return words;
}

// --- preprocessing -------------------------------------------------------

Preprocessor::Preprocessor(PreprocessConfig config) : config_(std::move(config)) {
  if (config_.min_tokens < 0) throw InvalidArgument("min_tokens must be >= 0");
  if (config_.charset.mode == CharsetMode::CjkOnly && config_.charset.ranges.empty()) {
    config_.charset.ranges = default_cjk_ranges();
  }
  if (config_.charset.mode == CharsetMode::CustomRanges && config_.charset.ranges.empty()) {
    throw InvalidArgument("custom charset filter needs at least one range");
  }
  switch (config_.tokenizer) {
    case TokenizerKind::Whitespace:
      tokenizer_ = std::make_unique<WhitespaceTokenizer>();
      break;
    case TokenizerKind::CharNgram:
      tokenizer_ = std::make_unique<CharNgramTokenizer>(config_.ngram);
      break;
    case TokenizerKind::DictMaxMatch:
      if (!config_.lexicon) throw InvalidArgument("dict-max-match tokenizer needs a lexicon");
      tokenizer_ = std::make_unique<MaxMatchTokenizer>(read_word_list(*config_.lexicon));
      break;
  }
  if (config_.stopwords) {
    for (auto& w : read_word_list(*config_.stopwords)) stopwords_.insert(std::move(w));
  }
}

std::vector<std::string> Preprocessor::tokens(std::string_view text) const {
  const std::u32string cps = unicode::decode_utf8(text);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && (unicode::is_space(cps[i]) || !config_.charset.keeps(cps[i]))) ++i;
    const std::size_t start = i;
    while (i < cps.size() && !unicode::is_space(cps[i]) && config_.charset.keeps(cps[i])) ++i;
    if (i > start) tokenizer_->tokenize(std::u32string_view(cps).substr(start, i - start), out);
  }
  if (!stopwords_.empty()) {
    std::erase_if(out, [this](const std::string& t) { return stopwords_.contains(t); });
  }
  return out;
}

namespace {

std::optional<TokenSet> finish(std::vector<std::string>& raw, DocIndex doc_index, TokenInterner& interner,
                               int min_tokens) {
  std::vector<TokenId> ids;
  ids.reserve(raw.size());
  for (const auto& t : raw) ids.push_back(interner.intern(t));
  TokenSet ts = make_token_set(doc_index, std::move(ids));
  if (ts.size() < static_cast<std::size_t>(min_tokens)) return std::nullopt;
  return ts;
}

}  // namespace

std::optional<TokenSet> Preprocessor::operator()(const Document& doc, DocIndex doc_index,
                                                 TokenInterner& interner) const {
  auto raw = tokens(doc.text);
  return finish(raw, doc_index, interner, config_.min_tokens);
}

std::optional<TokenSet> preprocess(const Document& doc, const PreprocessConfig& config, TokenInterner& interner,
                                   DocIndex doc_index) {
  return Preprocessor(config)(doc, doc_index, interner);
}

std::vector<TokenSet> preprocess_corpus(std::span<const Document> docs, const Preprocessor& pre,
                                        TokenInterner& interner, unsigned threads) {
  std::vector<std::vector<std::string>> raw(docs.size());
  parallel_for(docs.size(), threads, [&](std::size_t i) { raw[i] = pre.tokens(docs[i].text); }, 64);
  std::vector<TokenSet> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (auto ts = finish(raw[i], static_cast<DocIndex>(i), interner, pre.config().min_tokens)) {
      out.push_back(std::move(*ts));
    }
  }
  return out;
}

// --- ingestion -----------------------------------------------------------

InputFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv" || ext == ".CSV") return InputFormat::Csv;
  return InputFormat::Jsonl;
}

namespace {

void check_id(const std::string& id, std::size_t line,
              std::unordered_map<std::string, std::size_t>& seen) {
  if (id.empty()) throw Error("line " + std::to_string(line) + ": document id must be non-empty");
  auto [it, inserted] = seen.emplace(id, line);
  if (!inserted) {
    throw Error("duplicate document id \"" + id + "\" on lines " + std::to_string(it->second) + " and " +
                std::to_string(line));
  }
}

std::vector<Document> ingest_jsonl(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!rec.is_object()) throw Error(where + "record is not a JSON object");
    if (!rec.contains("id") || !rec["id"].is_string()) throw Error(where + "missing string field \"id\"");
    if (!rec.contains("text") || !rec["text"].is_string()) throw Error(where + "missing string field \"text\"");
    Document doc;
    doc.id = rec["id"].get<std::string>();
    doc.text = rec["text"].get<std::string>();
    if (auto it = rec.find("timestamp"); it != rec.end() && !it->is_null()) {
      if (!it->is_string()) throw Error(where + "field \"timestamp\" must be a string");
      try {
        doc.timestamp = parse_rfc3339(it->get<std::string>());
      } catch (const InvalidArgument& e) {
        throw Error(where + e.what());
      }
    }
    check_id(doc.id, line_no, seen);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> ingest_csv(std::istream& in) {
  const auto records = csv::read(in);
  std::vector<Document> docs;
  if (records.empty()) return docs;
  const auto& header = records.front().fields;
  const bool with_ts = header.size() == 3;
  if (!(header.size() == 2 || header.size() == 3) || header[0] != "id" || header[1] != "text" ||
      (with_ts && header[2] != "timestamp")) {
    throw Error("line 1: CSV header must be id,text[,timestamp]");
  }
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "line " + std::to_string(rec.line) + ": ";
    if (rec.fields.size() != header.size()) {
      throw Error(where + "expected " + std::to_string(header.size()) + " fields, found " +
                  std::to_string(rec.fields.size()));
    }
    Document doc{rec.fields[0], rec.fields[1], std::nullopt};
    if (with_ts && !rec.fields[2].empty()) {
      try {
        doc.timestamp = parse_rfc3339(rec.fields[2]);
      } catch (const InvalidArgument& e) {
        throw Error(where + e.what());
      }
    }
    check_id(doc.id, rec.line, seen);
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace

std::vector<Document> ingest_stream(std::istream& in, InputFormat format) {
  return format == InputFormat::Jsonl ? ingest_jsonl(in) : ingest_csv(in);
}

std::vector<Document> ingest(const std::filesystem::path& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input " + path.string());
  return ingest_stream(in, format);
}

void write_jsonl(std::ostream& out, std::span<const Document> docs) {
  for (const auto& d : docs) {
    nlohmann::ordered_json rec;
    rec["id"] = d.id;
    rec["text"] = d.text;
    if (d.timestamp) rec["timestamp"] = format_rfc3339(*d.timestamp);
    out << rec.dump() << '\n';
  }
}

// --- statistics ----------------------------------------------------------

namespace {

Summary summarize(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  return Summary{xs.front(), stats::quantile_sorted(xs, 0.5), xs.back()};
}

}  // namespace

CorpusStats corpus_stats(std::span<const Document> docs, std::span<const TokenSet> tokensets,
                         const CharsetFilter& charset) {
  if (tokensets.empty()) throw InvalidArgument("corpus statistics of an empty corpus");
  std::vector<double> all, cls, dig, alpha, other, toks;
  for (const auto& ts : tokensets) {
    if (ts.doc_index >= docs.size()) throw InvalidArgument("token set refers to a missing document");
    const auto cps = unicode::decode_utf8(docs[ts.doc_index].text);
    std::size_t n_cls = 0, n_dig = 0, n_alpha = 0, n_other = 0;
    for (const char32_t cp : cps) {
      if (charset.in_class(cp)) {
        ++n_cls;
      } else if (cp >= '0' && cp <= '9') {
        ++n_dig;
      } else if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) {
        ++n_alpha;
      } else {
        ++n_other;
      }
    }
    all.push_back(static_cast<double>(cps.size()));
    cls.push_back(static_cast<double>(n_cls));
    dig.push_back(static_cast<double>(n_dig));
    alpha.push_back(static_cast<double>(n_alpha));
    other.push_back(static_cast<double>(n_other));
    toks.push_back(static_cast<double>(ts.size()));
  }
  CorpusStats s;
  s.documents = tokensets.size();
  s.all_chars = summarize(std::move(all));
  s.class_chars = summarize(std::move(cls));
  s.digits = summarize(std::move(dig));
  s.ascii_alpha = summarize(std::move(alpha));
  s.other = summarize(std::move(other));
  s.tokens = summarize(std::move(toks));
  return s;
}

}  // namespace rumor
