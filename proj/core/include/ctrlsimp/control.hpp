#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctrlsimp/lexicon.hpp"
#include "ctrlsimp/syntax.hpp"
#include "ctrlsimp/text.hpp"

namespace ctrlsimp {

/// The four controllable attributes, in canonical token order.
enum class ControlAttribute { kNbChars = 0, kLevSim = 1, kWordRank = 2, kDepTreeDepth = 3 };

inline constexpr std::array<ControlAttribute, 4> kAllAttributes = {
    ControlAttribute::kNbChars, ControlAttribute::kLevSim, ControlAttribute::kWordRank,
    ControlAttribute::kDepTreeDepth};

std::string_view attribute_name(ControlAttribute attr);
/// Exact, case-sensitive match on NbChars, LevSim, WordRank, DepTreeDepth.
std::optional<ControlAttribute> attribute_from_name(std::string_view name);
/// Parses a comma-separated attribute list ("NbChars,LevSim"). Throws ConfigError.
std::vector<ControlAttribute> parse_attribute_list(std::string_view list);

/// A discretized ratio: a multiple of 0.05 in [0.05, 2.00], stored as the
/// integer step count 1..40 so equality and ordering are exact.
class Bucket {
 public:
  static constexpr int kMinStep = 1;
  static constexpr int kMaxStep = 40;
  static constexpr double kWidth = 0.05;

  /// Throws DomainError when step is outside 1..40.
  static Bucket from_step(int step);
  static Bucket one() { return Bucket(20); }

  int step() const noexcept { return step_; }
  double value() const noexcept { return step_ * kWidth; }

  /// Shortest decimal rendering: "0.3", "0.95", "1.0", "2.0".
  std::string str() const;

  auto operator<=>(const Bucket&) const = default;

 private:
  explicit Bucket(int step) : step_(step) {}
  int step_;
};

/// Nearest multiple of 0.05 (ties round up, 1e-9 slack), clamped to
/// [0.05, 2.00]. Throws DomainError for negative or NaN ratios.
Bucket bucketize(double ratio);

/// All 40 buckets in increasing order.
std::vector<Bucket> all_buckets();

struct ControlValue {
  ControlAttribute attribute;
  Bucket bucket;

  friend bool operator==(const ControlValue&, const ControlValue&) = default;
};

/// "<Name_R>"
std::string format_token(const ControlValue& value);
/// Inverse of format_token; the decimal is re-bucketized. Throws ParseError.
ControlValue parse_token(std::string_view text);
bool looks_like_control_token(std::string_view text);

/// A conditioning request: at most one bucket per attribute, iterated in
/// canonical order.
class ControlSpec {
 public:
  ControlSpec() = default;

  void set(ControlAttribute attr, Bucket bucket) { targets_.insert_or_assign(attr, bucket); }
  std::optional<Bucket> get(ControlAttribute attr) const;
  bool empty() const noexcept { return targets_.empty(); }
  std::size_t size() const noexcept { return targets_.size(); }
  const std::map<ControlAttribute, Bucket>& targets() const noexcept { return targets_; }

  /// Space-separated tokens in canonical order; empty for an empty spec.
  std::string prefix() const;
  /// "NbChars=0.95;LevSim=0.75" (used in tables and manifests).
  std::string label() const;

  /// Lexicographic on (attribute, bucket) pairs in canonical order.
  friend auto operator<=>(const ControlSpec& a, const ControlSpec& b) { return a.targets_ <=> b.targets_; }
  friend bool operator==(const ControlSpec&, const ControlSpec&) = default;

 private:
  std::map<ControlAttribute, Bucket> targets_;
};

/// Result of stripping leading control tokens from a prepended source line.
struct PrefixedText {
  ControlSpec spec;
  std::string body;
};

/// Consumes leading whitespace-separated tokens of the form "<...>". A token
/// that looks like a control token but does not parse throws ParseError; a
/// repeated attribute also throws.
PrefixedText split_control_prefix(std::string_view line);

// Attribute ratios.

double nbchars_ratio(const Sentence& source, const Sentence& target);

/// Unit-cost edit distance over code points. With substitution_cost 2 it is
/// the insertion/deletion distance |a| + |b| - 2 * LCS.
std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b, std::size_t substitution_cost = 1);
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// Character-level similarity of the joined token strings:
///   1 - d2(s, t) / (|s| + |t|), d2 = Levenshtein with substitution cost 2.
/// In [0, 1], symmetric. Throws DomainError when both are empty.
double levsim_ratio(const Sentence& source, const Sentence& target);
double levsim(std::string_view a, std::string_view b);

/// Q3 log-rank of target over that of source. Throws DomainError if either side
/// has no word token, DegenerateSourceError if the source WordRank is 0.
double wordrank_ratio(const Sentence& source, const Sentence& target, const FrequencyTable& table);

/// Depth of the target (max over its trees) over depth of the source.
double deptreedepth_ratio(const DepTree& source, std::span<const DepTree> targets);

/// How DepTreeDepth was obtained, recorded in reports.
enum class DepthSource { kConllu, kHeuristic };
std::string_view depth_source_name(DepthSource source);

/// Heuristic-depth ratio; the target text is split into sentences and the
/// deepest one is used.
double heuristic_depth_ratio(const Sentence& source, std::string_view target_text);

/// Resources needed to compute ratios for a pair.
struct PairResources {
  const FrequencyTable* table = nullptr;
  const DepTree* source_tree = nullptr;
  std::span<const DepTree> target_trees;
  /// Fall back to the heuristic estimator when trees are absent.
  bool allow_heuristic_depth = false;
};

double attribute_ratio(ControlAttribute attr, const Sentence& source, const Sentence& target,
                       const PairResources& resources);

/// Canonical-order control tokens for attrs, computed from (source, target),
/// followed by the space-joined source tokens. Throws ConfigError when a
/// requested attribute lacks its resource.
std::string annotate_pair(const Sentence& source, const Sentence& target, std::span<const ControlAttribute> attrs,
                          const PairResources& resources);

}  // namespace ctrlsimp
