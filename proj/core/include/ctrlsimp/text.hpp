#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ctrlsimp {

using TokenList = std::vector<std::string>;

/// A sentence as raw text plus its token sequence.
///
/// All attribute computations (character counts, n-grams, Levenshtein) work on
/// the space-joined token form returned by joined(), never on raw().
class Sentence {
 public:
  Sentence() = default;
  explicit Sentence(std::string raw);

  static Sentence from_tokens(TokenList tokens);

  const std::string& raw() const noexcept { return raw_; }
  const TokenList& tokens() const noexcept { return tokens_; }
  const std::string& joined() const noexcept { return joined_; }

  /// Code points of joined(), separator spaces included.
  std::size_t char_count() const noexcept { return char_count_; }
  bool empty() const noexcept { return tokens_.empty(); }

 private:
  std::string raw_;
  TokenList tokens_;
  std::string joined_;
  std::size_t char_count_ = 0;
};

/// Splits punctuation from words and collapses whitespace.
///
/// Word tokens are maximal runs of letters, digits, underscores and non-ASCII
/// code points. Inside a word, '-' and '\'' are kept when flanked by word
/// characters, and '.' or ',' are kept between digits ("3.76", "1,000"). Every
/// other character starts a punctuation token; a run of the same punctuation
/// character ("...", "--") stays one token.
TokenList tokenize(std::string_view text);

std::string join_tokens(const TokenList& tokens);

/// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view text);
std::u32string utf8_decode(std::string_view text);

std::size_t count_chars(const Sentence& sentence);

/// Vowel-group syllable estimate. 0 for tokens without letters.
int count_syllables(std::string_view word);

/// True when the token contains at least one letter (ASCII or non-ASCII).
bool has_letter(std::string_view token);

std::string to_lower(std::string_view text);

/// Splits at runs of '.', '!' or '?' (plus trailing closing quotes/brackets)
/// that are followed by whitespace or end of text. Common abbreviations such
/// as "Mr." or "e.g." do not end a sentence. Segments are trimmed and never
/// empty.
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace ctrlsimp
