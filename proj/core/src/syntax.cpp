#include "ctrlsimp/syntax.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ctrlsimp/error.hpp"

namespace ctrlsimp {

namespace {

constexpr std::array<std::string_view, 20> kClauseCues = {
    "that",  "which", "who",     "whom",   "whose",  "because", "although", "though", "when",   "while",
    "where", "if",    "unless",  "since",  "whereas", "after",  "before",   "until",  "whether", "once"};

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return cols;
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

DepTree DepTree::make(TokenList tokens, std::vector<int> heads) {
  if (heads.empty()) throw ParseError("dependency tree has no tokens");
  if (heads.size() != tokens.size()) throw ParseError("dependency tree: heads and tokens differ in length");
  const int n = static_cast<int>(heads.size());
  int roots = 0;
  for (int h : heads) {
    if (h == kRoot) {
      ++roots;
    } else if (h < 0 || h >= n) {
      throw ParseError("dependency tree: head index out of range");
    }
  }
  if (roots != 1) {
    throw ParseError(roots == 0 ? "dependency tree has no root" : "dependency tree has multiple roots");
  }
  // 0 = unvisited, 1 = on current path, 2 = known to reach root.
  std::vector<char> state(heads.size(), 0);
  for (int start = 0; start < n; ++start) {
    std::vector<int> path;
    int cur = start;
    while (cur != kRoot && state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = heads[cur];
    }
    if (cur != kRoot && state[cur] == 1) throw ParseError("dependency tree contains a cycle");
    for (int v : path) state[v] = 2;
  }
  return DepTree(std::move(tokens), std::move(heads));
}

std::optional<DepTree> ConlluReader::next() {
  TokenList tokens;
  std::vector<int> heads;
  std::size_t first_line = 0;
  std::string line;
  bool in_block = false;

  auto fail = [&](const std::string& what, std::size_t line_no) -> ParseError {
    return ParseError("CoNLL-U sentence " + std::to_string(sentence_index_ + 1) + ": " + what, line_no);
  };

  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in_block) break;
      continue;
    }
    if (line.front() == '#') continue;
    if (!in_block) first_line = line_no_;
    in_block = true;

    const auto cols = split_tabs(line);
    if (cols.size() != 10) throw fail("expected 10 tab-separated columns", line_no_);
    const std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) continue;
    const auto id_value = parse_int(id);
    if (!id_value || *id_value != static_cast<int>(tokens.size()) + 1) {
      throw fail("token IDs must run 1..n", line_no_);
    }
    const auto head = parse_int(cols[6]);
    if (!head || *head < 0) throw fail("non-numeric HEAD '" + std::string(cols[6]) + "'", line_no_);
    tokens.emplace_back(cols[1]);
    heads.push_back(*head - 1);  // 0 (root) becomes kRoot
  }
  if (!in_block) return std::nullopt;
  if (tokens.empty()) throw fail("block has no word lines", first_line);
  try {
    auto tree = DepTree::make(std::move(tokens), std::move(heads));
    ++sentence_index_;
    return tree;
  } catch (const ParseError& e) {
    throw fail(e.what(), first_line);
  }
}

std::vector<DepTree> parse_conllu(std::istream& in) {
  ConlluReader reader(in);
  std::vector<DepTree> trees;
  while (auto tree = reader.next()) trees.push_back(std::move(*tree));
  return trees;
}

std::vector<DepTree> load_conllu_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open CoNLL-U file: " + path);
  return parse_conllu(in);
}

void write_conllu(std::ostream& out, const std::vector<DepTree>& trees) {
  for (const auto& tree : trees) {
    for (std::size_t i = 0; i < tree.size(); ++i) {
      out << (i + 1) << '\t' << tree.tokens()[i] << "\t_\t_\t_\t_\t" << (tree.heads()[i] + 1)
          << "\t_\t_\t_\n";
    }
    out << '\n';
  }
}

int tree_depth(const DepTree& tree) {
  const auto& heads = tree.heads();
  std::vector<int> depth(heads.size(), 0);
  int best = 0;
  for (std::size_t start = 0; start < heads.size(); ++start) {
    std::vector<int> path;
    int cur = static_cast<int>(start);
    while (cur != DepTree::kRoot && depth[cur] == 0) {
      path.push_back(cur);
      cur = heads[cur];
    }
    int d = cur == DepTree::kRoot ? 0 : depth[cur];
    for (auto it = path.rbegin(); it != path.rend(); ++it) depth[*it] = ++d;
    best = std::max(best, depth[start]);
  }
  return best;
}

bool is_clause_cue(std::string_view token) {
  const std::string lowered = to_lower(token);
  return std::find(kClauseCues.begin(), kClauseCues.end(), lowered) != kClauseCues.end();
}

int estimate_depth_heuristic(const Sentence& sentence) {
  const auto& tokens = sentence.tokens();
  if (tokens.empty()) return 1;
  const int length_term = std::bit_width(tokens.size()) - 1;  // floor(log2 n)
  int cues = 0;
  int commas = 0;
  for (const auto& tok : tokens) {
    if (tok == ",") {
      ++commas;
    } else if (tok == "(") {
      ++cues;
    } else if (is_clause_cue(tok)) {
      ++cues;
    }
  }
  return 1 + length_term + cues + commas / 2;
}

}  // namespace ctrlsimp
