#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctrlsimp/lexicon.hpp"
#include "ctrlsimp/system.hpp"

namespace ctrlsimp {

struct OracleConfig {
  std::shared_ptr<const FrequencyTable> table;
  /// Lowercased word -> simpler replacement (may be several words).
  std::unordered_map<std::string, std::string> substitutions;
  double tolerance = 0.05;
  std::uint64_t random_seed = 0;
};

/// Reads `word<TAB>replacement` lines. Throws ParseError on a line without a tab.
std::unordered_map<std::string, std::string> load_substitution_map(std::istream& in);
std::unordered_map<std::string, std::string> load_substitution_file(const std::string& path);

/// Deterministic rule-based simplifier that honours leading control tokens.
///
/// Constraints are applied in the order DepTreeDepth (clause splitting),
/// NbChars (token deletion), WordRank (lexical substitution), LevSim (surface
/// edits), after which NbChars is checked again. Buckets >= 1.0 and absent
/// attributes impose nothing, so an all-1.0 prefix copies the tokenized input.
///
/// NbChars deletion keeps the subsequence of words (a comma stays with the
/// word before it, a parenthetical goes as a whole) whose length is nearest
/// the requested ratio without falling below ratio - tolerance. Buckets are
/// walked from 0.95 down to the requested one and the output never grows, so a
/// lower NbChars bucket never produces a longer output for the same sentence.
///
/// Outputs are synthetic: they satisfy ratios, not fluency.
class OracleSimplifier {
 public:
  /// Throws ConfigError when the tolerance is not positive.
  explicit OracleSimplifier(OracleConfig config);

  /// Throws ParseError on a malformed control prefix or an empty body.
  std::string simplify(std::string_view prepended_source) const;

  const OracleConfig& config() const noexcept { return config_; }

 private:
  struct State;

  void split_clauses(State& state, double target) const;
  void compress(State& state, int target_step) const;
  void compress_to(State& state, double target) const;
  void simplify_lexically(State& state, double target) const;
  void paraphrase(State& state, double target) const;

  /// Simpler replacement for a word, or empty when none exists.
  std::string replacement_for(std::string_view word) const;

  OracleConfig config_;
  /// Character length -> most frequent alphabetic table word of that length.
  std::map<std::size_t, std::string> best_by_length_;
};

std::string oracle_simplify(std::string_view prepended_source, const OracleConfig& config);

class OracleSystem final : public SimplificationSystem {
 public:
  explicit OracleSystem(OracleConfig config) : oracle_(std::move(config)) {}

  std::vector<std::string> run(std::span<const std::string> prepended) const override;
  std::string name() const override { return "builtin:oracle"; }

 private:
  OracleSimplifier oracle_;
};

}  // namespace ctrlsimp
