#include "ctrlsimp/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace ctrlsimp {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_non_ascii(char c) { return static_cast<unsigned char>(c) >= 0x80; }

bool is_word_char(char c) { return is_ascii_alpha(c) || is_digit(c) || c == '_' || is_non_ascii(c); }

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

constexpr std::array<std::string_view, 16> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc", "e.g", "i.e", "inc", "ltd", "gen", "gov"};

bool is_abbreviation(std::string_view word) {
  const std::string lowered = to_lower(word);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lowered) != kAbbreviations.end();
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

Sentence::Sentence(std::string raw) : raw_(std::move(raw)), tokens_(tokenize(raw_)) {
  joined_ = join_tokens(tokens_);
  char_count_ = utf8_length(joined_);
}

Sentence Sentence::from_tokens(TokenList tokens) {
  Sentence s;
  s.joined_ = join_tokens(tokens);
  s.raw_ = s.joined_;
  s.tokens_ = std::move(tokens);
  s.char_count_ = utf8_length(s.joined_);
  return s;
}

TokenList tokenize(std::string_view text) {
  TokenList out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_word_char(c)) {
      ++i;
      while (i < n) {
        const char cur = text[i];
        if (is_word_char(cur)) {
          ++i;
          continue;
        }
        const bool has_next = i + 1 < n;
        const char prev = text[i - 1];
        if ((cur == '-' || cur == '\'') && has_next && is_word_char(text[i + 1])) {
          ++i;
          continue;
        }
        if ((cur == '.' || cur == ',') && is_digit(prev) && has_next && is_digit(text[i + 1])) {
          ++i;
          continue;
        }
        break;
      }
    } else {
      while (i < n && text[i] == c) ++i;
    }
    out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

std::string join_tokens(const TokenList& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::size_t utf8_length(std::string_view text) {
  // Count bytes that are not continuation bytes (10xxxxxx).
  return static_cast<std::size_t>(std::count_if(text.begin(), text.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

std::u32string utf8_decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = b0;
    if (b0 >= 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else if (b0 >= 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if (b0 >= 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    }
    ++i;
    for (int k = 0; k < extra && i < text.size(); ++k, ++i) {
      const auto b = static_cast<unsigned char>(text[i]);
      if ((b & 0xC0) != 0x80) break;  // invalid sequence: keep what we have
      cp = (cp << 6) | (b & 0x3F);
    }
    out.push_back(cp);
  }
  return out;
}

std::size_t count_chars(const Sentence& sentence) { return sentence.char_count(); }

bool has_letter(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) { return is_ascii_alpha(c) || is_non_ascii(c); });
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

int count_syllables(std::string_view word) {
  if (!has_letter(word)) return 0;
  std::string letters;
  for (char c : word) {
    if (is_ascii_alpha(c)) letters.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  int groups = 0;
  bool in_group = false;
  for (char c : letters) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  const std::size_t n = letters.size();
  if (n >= 2 && letters[n - 1] == 'e' && !is_vowel(letters[n - 2])) {
    const bool consonant_le = letters[n - 2] == 'l' && n >= 3 && !is_vowel(letters[n - 3]);
    if (!consonant_le) --groups;
  }
  return std::max(groups, 1);
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  const std::size_t n = text.size();
  std::size_t seg_start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    const std::size_t term_start = i;
    while (i < n && is_terminator(text[i])) ++i;
    while (i < n && is_closer(text[i])) ++i;
    if (i < n && !is_space(text[i])) continue;

    // Word immediately before the terminator run, e.g. "Mr" in "Mr." or "Mr .".
    std::size_t w_end = term_start;
    while (w_end > seg_start && is_space(text[w_end - 1])) --w_end;
    std::size_t w_begin = w_end;
    while (w_begin > seg_start && !is_space(text[w_begin - 1])) --w_begin;
    const bool single_period = i - term_start == 1 && text[term_start] == '.';
    if (single_period && w_end > w_begin && is_abbreviation(text.substr(w_begin, w_end - w_begin))) continue;

    const auto seg = trim(text.substr(seg_start, i - seg_start));
    if (!seg.empty()) out.emplace_back(seg);
    seg_start = i;
  }
  const auto tail = trim(text.substr(seg_start));
  if (!tail.empty()) out.emplace_back(tail);
  return out;
}

}  // namespace ctrlsimp
