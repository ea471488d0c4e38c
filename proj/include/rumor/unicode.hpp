#pragma once

#include <string>
#include <string_view>

namespace rumor::unicode {

inline constexpr char32_t kReplacement = 0xFFFD;

/// Decodes UTF-8; malformed sequences become U+FFFD.
std::u32string decode_utf8(std::string_view text);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view text);

/// ASCII whitespace, NBSP, U+3000 and the other Unicode space separators.
bool is_space(char32_t cp);

}  // namespace rumor::unicode
