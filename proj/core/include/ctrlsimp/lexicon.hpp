#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctrlsimp/text.hpp"

namespace ctrlsimp {

/// Word -> frequency rank (1 = most frequent). Immutable after loading.
///
/// Keys are stored lowercased, so lookup is case-insensitive. Ranks are
/// contiguous 1..vocab_size; a duplicated word keeps its first rank.
class FrequencyTable {
 public:
  FrequencyTable() = default;

  /// Builds a table from words in rank order. Duplicates are dropped.
  static FrequencyTable from_ranked_words(std::span<const std::string> words);

  std::optional<std::size_t> rank_of(std::string_view word) const;
  std::size_t vocab_size() const noexcept { return words_.size(); }

  /// Word at a given rank (1-based).
  const std::string& word_at(std::size_t rank) const { return words_.at(rank - 1); }

 private:
  std::unordered_map<std::string, std::size_t> rank_of_;
  std::vector<std::string> words_;
};

/// Reads either a one-word-per-line list (rank = entry order) or
/// `word<TAB>count` lines (rank = descending count, ties by line order).
/// The first non-blank line fixes which format is expected; LF and CRLF are
/// both accepted. Throws ParseError with the offending line number.
FrequencyTable load_frequency_list(std::istream& in);
FrequencyTable load_frequency_file(const std::string& path);

/// ln(rank) of the lowercased word; unknown words map to ln(vocab_size + 1).
/// Throws ResourceError on an empty table.
double log_rank(std::string_view word, const FrequencyTable& table);

/// Q3 by linear interpolation at position 0.75 * (n - 1) of the sorted values.
double third_quartile(std::span<const double> values);

/// Sentence-level WordRank: Q3 of log-ranks over tokens containing a letter.
/// Returns nullopt when the sentence has no such token.
std::optional<double> sentence_word_rank(const Sentence& sentence, const FrequencyTable& table);

}  // namespace ctrlsimp
