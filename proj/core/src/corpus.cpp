#include "ctrlsimp/corpus.hpp"

#include <fstream>

#include "ctrlsimp/error.hpp"

namespace ctrlsimp {

namespace {

void check_aligned(std::size_t expected, std::size_t actual, const char* what) {
  if (actual != expected) {
    throw InputError(std::string(what) + " has " + std::to_string(actual) + " lines, expected " +
                     std::to_string(expected));
  }
}

}  // namespace

void ParallelCorpus::validate() const {
  if (!targets.empty()) check_aligned(sources.size(), targets.size(), "targets");
  if (!references.empty()) check_aligned(sources.size(), references.size(), "references");
  if (!source_trees.empty()) check_aligned(sources.size(), source_trees.size(), "source CoNLL-U");
  if (!target_trees.empty()) check_aligned(sources.size(), target_trees.size(), "target CoNLL-U");
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

void write_lines(const std::string& path, std::span<const std::string> lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  for (const auto& l : lines) out << l << '\n';
}

std::vector<Sentence> to_sentences(std::span<const std::string> lines) {
  std::vector<Sentence> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.emplace_back(l);
  return out;
}

std::vector<ReferenceSet> load_references(std::span<const std::string> paths) {
  std::vector<ReferenceSet> refs;
  for (std::size_t f = 0; f < paths.size(); ++f) {
    const auto lines = read_lines(paths[f]);
    if (f == 0) {
      refs.resize(lines.size());
    } else {
      check_aligned(refs.size(), lines.size(), ("reference file " + paths[f]).c_str());
    }
    for (std::size_t i = 0; i < lines.size(); ++i) refs[i].emplace_back(lines[i]);
  }
  return refs;
}

ParallelCorpus load_corpus(const CorpusPaths& paths) {
  ParallelCorpus corpus;
  corpus.sources = to_sentences(read_lines(paths.source));
  if (paths.target) corpus.targets = to_sentences(read_lines(*paths.target));
  if (!paths.references.empty()) corpus.references = load_references(paths.references);
  if (paths.source_conllu) corpus.source_trees = load_conllu_file(*paths.source_conllu);
  if (paths.target_conllu) corpus.target_trees = load_conllu_file(*paths.target_conllu);
  corpus.validate();
  return corpus;
}

}  // namespace ctrlsimp
