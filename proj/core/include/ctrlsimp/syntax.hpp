#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ctrlsimp/text.hpp"

namespace ctrlsimp {

/// One sentence's dependency structure.
///
/// heads[i] is the 0-based index of token i's head, or kRoot. A DepTree is
/// only constructible through make(), which enforces a single root, in-range
/// heads and acyclicity.
class DepTree {
 public:
  static constexpr int kRoot = -1;

  /// Throws ParseError describing the violated invariant.
  static DepTree make(TokenList tokens, std::vector<int> heads);

  const TokenList& tokens() const noexcept { return tokens_; }
  const std::vector<int>& heads() const noexcept { return heads_; }
  std::size_t size() const noexcept { return heads_.size(); }

  friend bool operator==(const DepTree&, const DepTree&) = default;

 private:
  DepTree(TokenList tokens, std::vector<int> heads) : tokens_(std::move(tokens)), heads_(std::move(heads)) {}

  TokenList tokens_;
  std::vector<int> heads_;
};

/// Incremental CoNLL-U reader: yields one tree per sentence block, so large
/// sidecar files can be streamed alongside their corpus.
class ConlluReader {
 public:
  explicit ConlluReader(std::istream& in) : in_(in) {}

  /// Next tree, or nullopt at end of input. Errors name the sentence index
  /// (1-based) and the line number.
  std::optional<DepTree> next();

  std::size_t sentences_read() const noexcept { return sentence_index_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
  std::size_t sentence_index_ = 0;
};

std::vector<DepTree> parse_conllu(std::istream& in);
std::vector<DepTree> load_conllu_file(const std::string& path);

/// Minimal CoNLL-U: ID, FORM and HEAD filled, other columns "_".
void write_conllu(std::ostream& out, const std::vector<DepTree>& trees);

/// Longest head chain; a root-attached node has depth 1.
int tree_depth(const DepTree& tree);

/// Subordinating conjunctions and relative pronouns ("because", "which", ...).
bool is_clause_cue(std::string_view token);

/// Depth estimate from surface cues when no parse is available:
///   1 + floor(log2(tokens)) + subordinators/relative pronouns + "(" + commas / 2.
/// Deterministic and non-decreasing in token count for fixed cue counts.
int estimate_depth_heuristic(const Sentence& sentence);

}  // namespace ctrlsimp
