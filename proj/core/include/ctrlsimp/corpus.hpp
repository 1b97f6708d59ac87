#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctrlsimp/metrics.hpp"
#include "ctrlsimp/syntax.hpp"
#include "ctrlsimp/text.hpp"

namespace ctrlsimp {

/// Line-aligned parallel data. Optional parts are empty vectors.
struct ParallelCorpus {
  std::vector<Sentence> sources;
  std::vector<Sentence> targets;
  std::vector<ReferenceSet> references;
  std::vector<DepTree> source_trees;
  std::vector<DepTree> target_trees;

  std::size_t size() const noexcept { return sources.size(); }
  bool has_targets() const noexcept { return !targets.empty(); }
  bool has_references() const noexcept { return !references.empty(); }
  bool has_trees() const noexcept { return !source_trees.empty() && !target_trees.empty(); }

  /// Throws InputError if any present part is not aligned with sources.
  void validate() const;
};

/// Reads UTF-8 lines, dropping a trailing '\r'. Throws InputError if the file
/// cannot be opened.
std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::string& path, std::span<const std::string> lines);

std::vector<Sentence> to_sentences(std::span<const std::string> lines);

/// Transposes N aligned reference files (ref.0 ... ref.N-1) into one
/// reference set per line.
std::vector<ReferenceSet> load_references(std::span<const std::string> paths);

struct CorpusPaths {
  std::string source;
  std::optional<std::string> target;
  std::vector<std::string> references;
  std::optional<std::string> source_conllu;
  std::optional<std::string> target_conllu;
};

ParallelCorpus load_corpus(const CorpusPaths& paths);

}  // namespace ctrlsimp
