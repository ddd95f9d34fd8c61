#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// UTF-8 and character-class helpers backed by ICU.
namespace bicorpus::unicode {

inline constexpr char32_t kReplacement = 0xFFFD;

struct DecodeResult {
  std::u32string text;
  std::size_t repairs = 0;  // invalid sequences replaced with U+FFFD
};

DecodeResult decode_utf8(std::string_view bytes);

// Lenient decode; invalid sequences become U+FFFD.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t c);

// Replaces invalid sequences with U+FFFD; returns the number of repairs.
std::size_t repair_utf8(std::string& text);

std::string nfc(std::string_view utf8);

std::size_t codepoint_count(std::string_view utf8);

bool is_whitespace(char32_t c);
// Cc/Cf characters other than the whitespace controls.
bool is_control(char32_t c);
bool is_punctuation(char32_t c);
bool is_cjk(char32_t c);
bool is_letter(char32_t c);
bool is_upper(char32_t c);
bool is_digit(char32_t c);

char32_t to_lower(char32_t c);
std::string fold_case(std::string_view utf8);

}  // namespace bicorpus::unicode
