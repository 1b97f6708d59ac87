#include "ctrlsimp/control.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "ctrlsimp/error.hpp"

namespace ctrlsimp {

namespace {

constexpr std::array<std::string_view, 4> kNames = {"NbChars", "LevSim", "WordRank", "DepTreeDepth"};

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

std::string_view attribute_name(ControlAttribute attr) { return kNames[static_cast<std::size_t>(attr)]; }

std::optional<ControlAttribute> attribute_from_name(std::string_view name) {
  for (auto attr : kAllAttributes) {
    if (attribute_name(attr) == name) return attr;
  }
  return std::nullopt;
}

std::vector<ControlAttribute> parse_attribute_list(std::string_view list) {
  std::vector<ControlAttribute> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    auto item = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!item.empty() && is_ws(item.front())) item.remove_prefix(1);
    while (!item.empty() && is_ws(item.back())) item.remove_suffix(1);
    if (!item.empty()) {
      const auto attr = attribute_from_name(item);
      if (!attr) throw ConfigError("unknown control attribute '" + std::string(item) + "'");
      if (std::find(out.begin(), out.end(), *attr) == out.end()) out.push_back(*attr);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Bucket Bucket::from_step(int step) {
  if (step < kMinStep || step > kMaxStep) throw DomainError("bucket step out of range: " + std::to_string(step));
  return Bucket(step);
}

std::string Bucket::str() const {
  const int hundredths = step_ * 5;
  const int whole = hundredths / 100;
  const int frac = hundredths % 100;
  std::string out = std::to_string(whole) + ".";
  if (frac % 10 == 0) {
    out += std::to_string(frac / 10);
  } else {
    if (frac < 10) out += '0';
    out += std::to_string(frac);
  }
  return out;
}

Bucket bucketize(double ratio) {
  if (std::isnan(ratio) || ratio < 0.0) throw DomainError("ratio must be non-negative");
  if (ratio >= 2.0) return Bucket::from_step(Bucket::kMaxStep);
  const int step = static_cast<int>(std::floor(ratio / Bucket::kWidth + 0.5 + 1e-9));
  return Bucket::from_step(std::clamp(step, Bucket::kMinStep, Bucket::kMaxStep));
}

std::vector<Bucket> all_buckets() {
  std::vector<Bucket> out;
  for (int s = Bucket::kMinStep; s <= Bucket::kMaxStep; ++s) out.push_back(Bucket::from_step(s));
  return out;
}

std::string format_token(const ControlValue& value) {
  return "<" + std::string(attribute_name(value.attribute)) + "_" + value.bucket.str() + ">";
}

bool looks_like_control_token(std::string_view text) {
  return text.size() > 2 && text.front() == '<' && text.back() == '>';
}

ControlValue parse_token(std::string_view text) {
  if (!looks_like_control_token(text)) throw ParseError("not a control token: '" + std::string(text) + "'");
  const auto inner = text.substr(1, text.size() - 2);
  const auto underscore = inner.rfind('_');
  if (underscore == std::string_view::npos) throw ParseError("control token lacks '_': '" + std::string(text) + "'");
  const auto attr = attribute_from_name(inner.substr(0, underscore));
  if (!attr) throw ParseError("unknown control attribute in '" + std::string(text) + "'");
  const auto number = inner.substr(underscore + 1);
  const bool well_formed = !number.empty() && std::all_of(number.begin(), number.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == '.';
  }) && std::count(number.begin(), number.end(), '.') <= 1 && number != ".";
  double ratio = 0.0;
  if (well_formed) {
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), ratio);
    if (ec != std::errc{} || ptr != number.data() + number.size()) ratio = -1.0;
  }
  if (!well_formed || ratio < 0.0) throw ParseError("bad ratio in control token '" + std::string(text) + "'");
  return {*attr, bucketize(ratio)};
}

std::optional<Bucket> ControlSpec::get(ControlAttribute attr) const {
  const auto it = targets_.find(attr);
  if (it == targets_.end()) return std::nullopt;
  return it->second;
}

std::string ControlSpec::prefix() const {
  std::string out;
  for (const auto& [attr, bucket] : targets_) {
    if (!out.empty()) out.push_back(' ');
    out += format_token({attr, bucket});
  }
  return out;
}

std::string ControlSpec::label() const {
  std::string out;
  for (const auto& [attr, bucket] : targets_) {
    if (!out.empty()) out.push_back(';');
    out += std::string(attribute_name(attr)) + "=" + bucket.str();
  }
  return out;
}

PrefixedText split_control_prefix(std::string_view line) {
  PrefixedText result;
  std::size_t pos = 0;
  while (true) {
    while (pos < line.size() && is_ws(line[pos])) ++pos;
    std::size_t end = pos;
    while (end < line.size() && !is_ws(line[end])) ++end;
    const auto word = line.substr(pos, end - pos);
    if (!looks_like_control_token(word)) break;
    const auto value = parse_token(word);
    if (result.spec.get(value.attribute)) {
      throw ParseError("repeated control attribute in '" + std::string(word) + "'");
    }
    result.spec.set(value.attribute, value.bucket);
    pos = end;
  }
  result.body = std::string(line.substr(pos));
  return result;
}

double nbchars_ratio(const Sentence& source, const Sentence& target) {
  if (source.char_count() == 0) throw DomainError("NbChars ratio of an empty source");
  return static_cast<double>(target.char_count()) / static_cast<double>(source.char_count());
}

std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b, std::size_t substitution_cost) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : substitution_cost);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  return levenshtein_distance(utf8_decode(a), utf8_decode(b));
}

double levsim(std::string_view a, std::string_view b) {
  const auto ua = utf8_decode(a);
  const auto ub = utf8_decode(b);
  const std::size_t total = ua.size() + ub.size();
  if (total == 0) throw DomainError("LevSim of two empty strings");
  const auto d = levenshtein_distance(ua, ub, 2);
  return 1.0 - static_cast<double>(d) / static_cast<double>(total);
}

double levsim_ratio(const Sentence& source, const Sentence& target) { return levsim(source.joined(), target.joined()); }

double wordrank_ratio(const Sentence& source, const Sentence& target, const FrequencyTable& table) {
  if (table.vocab_size() == 0) throw ResourceError("WordRank needs a non-empty frequency table");
  const auto src = sentence_word_rank(source, table);
  const auto tgt = sentence_word_rank(target, table);
  if (!src || !tgt) throw DomainError("WordRank needs at least one word token on both sides");
  if (*src == 0.0) throw DegenerateSourceError("source WordRank is 0 (all words have rank 1)");
  return *tgt / *src;
}

double deptreedepth_ratio(const DepTree& source, std::span<const DepTree> targets) {
  if (targets.empty()) throw DomainError("DepTreeDepth ratio needs at least one target tree");
  int target_depth = 0;
  for (const auto& t : targets) target_depth = std::max(target_depth, tree_depth(t));
  return static_cast<double>(target_depth) / static_cast<double>(tree_depth(source));
}

std::string_view depth_source_name(DepthSource source) {
  return source == DepthSource::kConllu ? "conllu" : "heuristic";
}

double heuristic_depth_ratio(const Sentence& source, std::string_view target_text) {
  int target_depth = 1;
  for (const auto& seg : split_sentences(target_text)) {
    target_depth = std::max(target_depth, estimate_depth_heuristic(Sentence(seg)));
  }
  return static_cast<double>(target_depth) / static_cast<double>(estimate_depth_heuristic(source));
}

double attribute_ratio(ControlAttribute attr, const Sentence& source, const Sentence& target,
                       const PairResources& resources) {
  switch (attr) {
    case ControlAttribute::kNbChars:
      return nbchars_ratio(source, target);
    case ControlAttribute::kLevSim:
      return levsim_ratio(source, target);
    case ControlAttribute::kWordRank:
      if (!resources.table) throw ConfigError("WordRank requires a frequency table");
      return wordrank_ratio(source, target, *resources.table);
    case ControlAttribute::kDepTreeDepth:
      if (resources.source_tree && !resources.target_trees.empty()) {
        return deptreedepth_ratio(*resources.source_tree, resources.target_trees);
      }
      if (resources.allow_heuristic_depth) return heuristic_depth_ratio(source, target.joined());
      throw ConfigError("DepTreeDepth requires CoNLL-U trees for source and target");
  }
  throw ConfigError("unknown attribute");
}

std::string annotate_pair(const Sentence& source, const Sentence& target, std::span<const ControlAttribute> attrs,
                          const PairResources& resources) {
  ControlSpec spec;
  for (auto attr : attrs) spec.set(attr, bucketize(attribute_ratio(attr, source, target, resources)));
  const std::string prefix = spec.prefix();
  if (prefix.empty()) return source.joined();
  return prefix + " " + source.joined();
}

}  // namespace ctrlsimp
