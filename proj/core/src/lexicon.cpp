#include "ctrlsimp/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "ctrlsimp/error.hpp"

namespace ctrlsimp {

namespace {

enum class ListFormat { kUnknown, kWordOnly, kCounted };

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

std::optional<unsigned long long> parse_count(std::string_view s) {
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  unsigned long long value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

FrequencyTable FrequencyTable::from_ranked_words(std::span<const std::string> words) {
  FrequencyTable table;
  for (const auto& w : words) {
    std::string key = to_lower(w);
    if (key.empty() || table.rank_of_.contains(key)) continue;
    table.words_.push_back(key);
    table.rank_of_.emplace(std::move(key), table.words_.size());
  }
  return table;
}

std::optional<std::size_t> FrequencyTable::rank_of(std::string_view word) const {
  const auto it = rank_of_.find(to_lower(word));
  if (it == rank_of_.end()) return std::nullopt;
  return it->second;
}

FrequencyTable load_frequency_list(std::istream& in) {
  struct Entry {
    std::string word;
    unsigned long long count;
  };
  std::vector<Entry> entries;
  ListFormat format = ListFormat::kUnknown;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) continue;
    const auto tab = line.find('\t');
    const ListFormat this_format = tab == std::string::npos ? ListFormat::kWordOnly : ListFormat::kCounted;
    if (format == ListFormat::kUnknown) format = this_format;
    if (this_format == ListFormat::kCounted) {
      const auto count = parse_count(std::string_view(line).substr(tab + 1));
      if (!count) throw ParseError("frequency list: non-numeric count field", line_no);
      if (format != ListFormat::kCounted) throw ParseError("frequency list: tab in word-only list", line_no);
      entries.push_back({line.substr(0, tab), *count});
    } else {
      if (format != ListFormat::kWordOnly) throw ParseError("frequency list: missing count field", line_no);
      entries.push_back({line, 0});
    }
  }
  if (format == ListFormat::kCounted) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.count > b.count; });
  }
  std::vector<std::string> words;
  words.reserve(entries.size());
  for (auto& e : entries) words.push_back(std::move(e.word));
  return FrequencyTable::from_ranked_words(words);
}

FrequencyTable load_frequency_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open frequency list: " + path);
  return load_frequency_list(in);
}

double log_rank(std::string_view word, const FrequencyTable& table) {
  if (table.vocab_size() == 0) throw ResourceError("frequency table is empty");
  const auto rank = table.rank_of(word).value_or(table.vocab_size() + 1);
  return std::log(static_cast<double>(rank));
}

double third_quartile(std::span<const double> values) {
  if (values.empty()) throw DomainError("third_quartile of an empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = 0.75 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::optional<double> sentence_word_rank(const Sentence& sentence, const FrequencyTable& table) {
  std::vector<double> logs;
  for (const auto& tok : sentence.tokens()) {
    if (has_letter(tok)) logs.push_back(log_rank(tok, table));
  }
  if (logs.empty()) return std::nullopt;
  return third_quartile(logs);
}

}  // namespace ctrlsimp
