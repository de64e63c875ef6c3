#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace parapipe::utf8 {

// Strict validation: rejects overlong forms, surrogates and code points above U+10FFFF.
bool valid(std::string_view s);

// Decodes the code point starting at `pos` and advances `pos` past it.
// Input must be valid UTF-8.
char32_t next(std::string_view s, std::size_t& pos);

void append(std::string& out, char32_t cp);

std::size_t length(std::string_view s);

bool is_space(char32_t cp);
bool is_upper(char32_t cp);
char32_t to_lower(char32_t cp);

std::string lower(std::string_view s);

std::string_view trim(std::string_view s);

// Maximal runs of non-whitespace code points.
std::vector<std::string_view> split_whitespace(std::string_view s);

// Lowercases and collapses every whitespace run into one ASCII space.
std::string normalize_for_key(std::string_view s);

}  // namespace parapipe::utf8
