#include "ctrlsimp/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>

#include "ctrlsimp/control.hpp"
#include "ctrlsimp/error.hpp"
#include "ctrlsimp/syntax.hpp"

namespace ctrlsimp {

namespace {

constexpr std::array<std::string_view, 5> kCoordinators = {"and", "but", "or", "so", "yet"};
constexpr std::array<std::string_view, 6> kFillers = {"also", "really", "then", "indeed", "quite", "just"};
constexpr double kEps = 1e-9;

bool is_terminator_token(std::string_view t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c == '.' || c == '!' || c == '?'; });
}

bool is_coordinator(std::string_view t) {
  const auto lowered = to_lower(t);
  return std::find(kCoordinators.begin(), kCoordinators.end(), lowered) != kCoordinators.end();
}

void capitalize(std::string& t) {
  if (!t.empty() && t.front() >= 'a' && t.front() <= 'z') t.front() = static_cast<char>(t.front() - 'a' + 'A');
}

bool starts_upper(std::string_view t) { return !t.empty() && t.front() >= 'A' && t.front() <= 'Z'; }

std::size_t char_count(const TokenList& tokens) { return utf8_length(join_tokens(tokens)); }

std::size_t word_count(const TokenList& tokens) {
  return static_cast<std::size_t>(std::count_if(tokens.begin(), tokens.end(), [](const auto& t) { return has_letter(t); }));
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Drops punctuation left dangling by deletions: leading terminators or
/// commas, a terminator right after another, and ", ." sequences.
void cleanup(TokenList& tokens) {
  TokenList out;
  out.reserve(tokens.size());
  for (auto& t : tokens) {
    const bool term = is_terminator_token(t);
    if (term || t == ",") {
      if (out.empty() || is_terminator_token(out.back())) continue;
      if (term && out.back() == ",") out.pop_back();
    }
    out.push_back(std::move(t));
  }
  while (!out.empty() && out.back() == ",") out.pop_back();
  tokens = std::move(out);
}

/// Keeps deleting single non-terminator tokens while that moves the character
/// count closer to goal without dropping below lo.
void refine_toward(TokenList& tokens, double goal, double lo) {
  for (;;) {
    double gap = std::abs(static_cast<double>(char_count(tokens)) - goal);
    std::optional<TokenList> best;
    for (std::size_t i = tokens.size(); i-- > 0;) {
      if (is_terminator_token(tokens[i])) continue;
      TokenList trial = tokens;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      cleanup(trial);
      if (word_count(trial) == 0) continue;
      const double c = static_cast<double>(char_count(trial));
      if (c < lo) continue;
      if (std::abs(c - goal) < gap - kEps) {
        gap = std::abs(c - goal);
        best = std::move(trial);
      }
    }
    if (!best) return;
    tokens = std::move(*best);
  }
}

/// Deletion-unit view of a token list: a parenthetical group is one unit, a
/// comma travels with the word before it, and terminators are always kept.
struct Unit {
  std::size_t begin, end;
  std::size_t weight;  // characters including one separator per token
  bool has_word;
  bool fixed;
  bool parenthetical;
};

std::vector<Unit> units_of(const TokenList& tokens) {
  std::vector<Unit> units;
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t j = i + 1;
    bool paren = false;
    if (tokens[i] == "(") {
      const auto close = std::find(tokens.begin() + static_cast<std::ptrdiff_t>(i), tokens.end(), ")");
      if (close != tokens.end()) {
        j = static_cast<std::size_t>(close - tokens.begin()) + 1;
        paren = true;
      }
    } else if (!is_terminator_token(tokens[i])) {
      while (j < tokens.size() && tokens[j] == ",") ++j;
    }
    Unit u{i, j, 0, false, is_terminator_token(tokens[i]), paren};
    for (std::size_t k = i; k < j; ++k) {
      u.weight += utf8_length(tokens[k]) + 1;
      u.has_word = u.has_word || has_letter(tokens[k]);
    }
    units.push_back(u);
    i = j;
  }
  return units;
}

/// Subsequence of whole units whose joined length is nearest to goal while
/// staying >= lo and keeping a word; ties go to the shorter length. Among
/// subsets of equal length, earlier units are kept and parentheticals dropped.
/// Returns nullopt when no subset qualifies.
std::optional<TokenList> select_length(const TokenList& tokens, double goal, double lo) {
  const auto units = units_of(tokens);
  const std::size_t n = units.size();
  std::size_t total = 0;
  for (const auto& u : units) total += u.weight;
  constexpr std::uint8_t kNoWord = 1, kWord = 2;
  std::vector<std::vector<std::uint8_t>> reach(n + 1, std::vector<std::uint8_t>(total + 1, 0));
  reach[n][0] = kNoWord;
  for (std::size_t i = n; i-- > 0;) {
    const Unit& u = units[i];
    for (std::size_t l = 0; l <= total; ++l) {
      std::uint8_t bits = u.fixed ? 0 : reach[i + 1][l];
      if (l >= u.weight && reach[i + 1][l - u.weight]) {
        bits |= u.has_word ? kWord : reach[i + 1][l - u.weight];
      }
      reach[i][l] = bits;
    }
  }

  std::optional<std::size_t> best;
  double best_gap = 0.0;
  for (std::size_t l = 1; l <= total; ++l) {
    if (!(reach[0][l] & kWord)) continue;
    const double c = static_cast<double>(l - 1);
    if (c < lo) continue;
    const double gap = std::abs(c - goal);
    if (!best || gap < best_gap - kEps) {
      best = l;
      best_gap = gap;
    }
  }
  if (!best) return std::nullopt;

  TokenList out;
  std::size_t l = *best;
  bool need_word = true;
  auto feasible = [&](std::size_t i, std::size_t len, bool need) {
    const auto bits = reach[i][len];
    return need ? (bits & kWord) != 0 : bits != 0;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Unit& u = units[i];
    const bool can_keep = l >= u.weight && feasible(i + 1, l - u.weight, need_word && !u.has_word);
    const bool can_drop = !u.fixed && feasible(i + 1, l, need_word);
    const bool keep = can_keep && (!can_drop || !u.parenthetical);
    if (keep) {
      out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(u.begin),
                 tokens.begin() + static_cast<std::ptrdiff_t>(u.end));
      l -= u.weight;
      need_word = need_word && !u.has_word;
    }
  }
  cleanup(out);
  return out;
}

/// [begin, end) token ranges of sentences; end includes the terminator.
std::vector<std::pair<std::size_t, std::size_t>> segments_of(const TokenList& tokens) {
  std::vector<std::pair<std::size_t, std::size_t>> segs;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_terminator_token(tokens[i])) {
      segs.emplace_back(begin, i + 1);
      begin = i + 1;
    }
  }
  if (begin < tokens.size()) segs.emplace_back(begin, tokens.size());
  return segs;
}

int segment_depth(const TokenList& tokens, std::pair<std::size_t, std::size_t> seg) {
  TokenList sub(tokens.begin() + static_cast<std::ptrdiff_t>(seg.first),
                tokens.begin() + static_cast<std::ptrdiff_t>(seg.second));
  return estimate_depth_heuristic(Sentence::from_tokens(std::move(sub)));
}

}  // namespace

struct OracleSimplifier::State {
  Sentence source;
  TokenList tokens;
  std::vector<bool> locked;  // parallel to tokens; already substituted
  std::mt19937_64 rng;

  void replace(std::size_t i, const TokenList& with) {
    tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i));
    locked.erase(locked.begin() + static_cast<std::ptrdiff_t>(i));
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(i), with.begin(), with.end());
    locked.insert(locked.begin() + static_cast<std::ptrdiff_t>(i), with.size(), true);
  }
  void insert(std::size_t i, std::string token) {
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(i), std::move(token));
    locked.insert(locked.begin() + static_cast<std::ptrdiff_t>(i), true);
  }
  void reset_locks() { locked.assign(tokens.size(), false); }
};

std::unordered_map<std::string, std::string> load_substitution_map(std::istream& in) {
  std::unordered_map<std::string, std::string> map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError("substitution map: expected word<TAB>replacement", line_no);
    }
    map.emplace(to_lower(line.substr(0, tab)), line.substr(tab + 1));
  }
  return map;
}

std::unordered_map<std::string, std::string> load_substitution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open substitution map: " + path);
  return load_substitution_map(in);
}

OracleSimplifier::OracleSimplifier(OracleConfig config) : config_(std::move(config)) {
  if (!(config_.tolerance > 0.0)) throw ConfigError("oracle tolerance must be positive");
  if (!config_.table) throw ConfigError("oracle needs a frequency table");
  for (std::size_t rank = config_.table->vocab_size(); rank >= 1; --rank) {
    const auto& w = config_.table->word_at(rank);
    if (std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
      best_by_length_[w.size()] = w;  // lower ranks overwrite higher ones
    }
  }
}

std::string OracleSimplifier::replacement_for(std::string_view word) const {
  const std::string lowered = to_lower(word);
  if (const auto it = config_.substitutions.find(lowered); it != config_.substitutions.end()) {
    return it->second == lowered ? std::string{} : it->second;
  }
  if (!has_letter(word)) return {};
  const auto it = best_by_length_.find(utf8_length(lowered));
  if (it == best_by_length_.end() || it->second == lowered) return {};
  const auto& table = *config_.table;
  const std::size_t rank = table.rank_of(lowered).value_or(table.vocab_size() + 1);
  if (*table.rank_of(it->second) >= rank) return {};
  return it->second;
}

void OracleSimplifier::split_clauses(State& st, double target) const {
  const std::size_t max_iter = st.tokens.size();
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    if (heuristic_depth_ratio(st.source, join_tokens(st.tokens)) <= target + config_.tolerance + kEps) return;

    const auto segs = segments_of(st.tokens);
    std::size_t deepest = 0;
    int best_depth = -1;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const int d = segment_depth(st.tokens, segs[s]);
      if (d > best_depth) {
        best_depth = d;
        deepest = s;
      }
    }
    const auto [b, e] = segs[deepest];
    const std::size_t body_end = is_terminator_token(st.tokens[e - 1]) ? e - 1 : e;
    const double mid = 0.5 * static_cast<double>(b + body_end);

    std::optional<std::size_t> cut;
    for (std::size_t i = b + 1; i + 1 < body_end; ++i) {
      const auto& t = st.tokens[i];
      const bool boundary = t == "," || (is_clause_cue(t) && st.tokens[i - 1] != ",");
      if (!boundary) continue;
      TokenList left(st.tokens.begin() + static_cast<std::ptrdiff_t>(b), st.tokens.begin() + static_cast<std::ptrdiff_t>(i));
      TokenList right(st.tokens.begin() + static_cast<std::ptrdiff_t>(i + 1),
                      st.tokens.begin() + static_cast<std::ptrdiff_t>(body_end));
      if (word_count(left) == 0 || word_count(right) == 0) continue;
      if (!cut || std::abs(static_cast<double>(i) - mid) < std::abs(static_cast<double>(*cut) - mid)) cut = i;
    }
    if (!cut) return;

    const std::size_t i = *cut;
    if (st.tokens[i] == ",") {
      st.tokens[i] = ".";
      if (i + 2 < body_end && is_coordinator(st.tokens[i + 1])) {
        st.tokens.erase(st.tokens.begin() + static_cast<std::ptrdiff_t>(i + 1));
      }
      capitalize(st.tokens[i + 1]);
    } else {
      st.tokens.insert(st.tokens.begin() + static_cast<std::ptrdiff_t>(i), ".");
      capitalize(st.tokens[i + 1]);
    }
  }
}

void OracleSimplifier::compress(State& st, int target_step) const {
  const TokenList original = st.tokens;
  const double src = static_cast<double>(st.source.char_count());
  for (int step = Bucket::one().step() - 1; step >= target_step; --step) {
    const double target = Bucket::from_step(step).value();
    const auto picked = select_length(original, target * src, (target - config_.tolerance) * src - kEps);
    if (picked && char_count(*picked) <= char_count(st.tokens)) st.tokens = *picked;
  }
  compress_to(st, Bucket::from_step(target_step).value());
}

void OracleSimplifier::compress_to(State& st, double target) const {
  const double src = static_cast<double>(st.source.char_count());
  const double hi = (target + config_.tolerance) * src + kEps;
  const double lo = (target - config_.tolerance) * src - kEps;
  const double goal = target * src;

  while (static_cast<double>(char_count(st.tokens)) > hi) {
    // Candidate deletions in priority order: parenthetical groups, then single
    // tokens from the end of the text backwards.
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (std::size_t i = 0; i < st.tokens.size(); ++i) {
      if (st.tokens[i] != "(") continue;
      for (std::size_t j = i + 1; j < st.tokens.size(); ++j) {
        if (st.tokens[j] == ")") {
          spans.emplace_back(i, j + 1);
          break;
        }
      }
    }
    for (std::size_t i = st.tokens.size(); i-- > 0;) {
      if (!is_terminator_token(st.tokens[i])) spans.emplace_back(i, i + 1);
    }

    std::optional<TokenList> in_window;
    double in_window_gap = 0.0;
    std::optional<TokenList> first_fit;
    for (const auto& [b, e] : spans) {
      TokenList trial;
      trial.reserve(st.tokens.size());
      trial.insert(trial.end(), st.tokens.begin(), st.tokens.begin() + static_cast<std::ptrdiff_t>(b));
      trial.insert(trial.end(), st.tokens.begin() + static_cast<std::ptrdiff_t>(e), st.tokens.end());
      cleanup(trial);
      if (word_count(trial) == 0) continue;
      const double c = static_cast<double>(char_count(trial));
      if (c < lo) continue;
      if (c <= hi) {
        const double gap = std::abs(c - goal);
        if (!in_window || gap < in_window_gap - kEps) {
          in_window = std::move(trial);
          in_window_gap = gap;
        }
      } else if (!first_fit) {
        first_fit = std::move(trial);
      }
    }
    if (in_window) {
      st.tokens = std::move(*in_window);
      refine_toward(st.tokens, goal, lo);
      break;
    }
    if (!first_fit) break;
    st.tokens = std::move(*first_fit);
  }
  st.reset_locks();
}

void OracleSimplifier::simplify_lexically(State& st, double target) const {
  const auto& table = *config_.table;
  const auto src_rank = sentence_word_rank(st.source, table);
  if (!src_rank || *src_rank <= 0.0) return;

  auto ratio = [&] {
    const auto r = sentence_word_rank(Sentence::from_tokens(st.tokens), table);
    return r ? *r / *src_rank : 0.0;
  };
  auto rank_of = [&](const std::string& w) { return table.rank_of(w).value_or(table.vocab_size() + 1); };

  while (ratio() > target + config_.tolerance + kEps) {
    // Rarest unlocked word; equal ranks are ordered by a seeded hash.
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < st.tokens.size(); ++i) {
      if (st.locked[i] || !has_letter(st.tokens[i])) continue;
      if (!pick) {
        pick = i;
        continue;
      }
      const auto ri = rank_of(st.tokens[i]);
      const auto rp = rank_of(st.tokens[*pick]);
      const auto ki = splitmix64(config_.random_seed ^ fnv1a(to_lower(st.tokens[i])));
      const auto kp = splitmix64(config_.random_seed ^ fnv1a(to_lower(st.tokens[*pick])));
      if (ri > rp || (ri == rp && ki < kp)) pick = i;
    }
    if (!pick) return;
    const std::size_t i = *pick;
    auto repl = tokenize(replacement_for(st.tokens[i]));
    if (repl.empty()) {
      st.locked[i] = true;
      continue;
    }
    if (starts_upper(st.tokens[i])) capitalize(repl.front());
    st.replace(i, repl);
  }
}

void OracleSimplifier::paraphrase(State& st, double target) const {
  const std::string& src = st.source.joined();
  auto similarity = [&] { return levsim(src, join_tokens(st.tokens)); };
  const double limit = target + config_.tolerance + kEps;
  if (similarity() <= limit) return;

  // Move the trailing comma-delimited clause of the first sentence to its front.
  {
    const auto segs = segments_of(st.tokens);
    const auto [b, e] = segs.front();
    const std::size_t body_end = is_terminator_token(st.tokens[e - 1]) ? e - 1 : e;
    std::optional<std::size_t> comma;
    for (std::size_t i = b + 1; i + 2 < body_end; ++i) {
      if (st.tokens[i] == ",") comma = i;
    }
    if (comma) {
      TokenList moved(st.tokens.begin() + static_cast<std::ptrdiff_t>(*comma + 1),
                      st.tokens.begin() + static_cast<std::ptrdiff_t>(body_end));
      TokenList head(st.tokens.begin() + static_cast<std::ptrdiff_t>(b),
                     st.tokens.begin() + static_cast<std::ptrdiff_t>(*comma));
      if (!head.empty() && !moved.empty() && starts_upper(head.front()) && has_letter(head.front())) {
        head.front().front() = static_cast<char>(head.front().front() - 'A' + 'a');
      }
      capitalize(moved.front());
      TokenList rebuilt(st.tokens.begin(), st.tokens.begin() + static_cast<std::ptrdiff_t>(b));
      rebuilt.insert(rebuilt.end(), moved.begin(), moved.end());
      rebuilt.push_back(",");
      rebuilt.insert(rebuilt.end(), head.begin(), head.end());
      rebuilt.insert(rebuilt.end(), st.tokens.begin() + static_cast<std::ptrdiff_t>(body_end), st.tokens.end());
      st.tokens = std::move(rebuilt);
      st.reset_locks();
    }
  }

  const std::size_t budget = 3 * st.tokens.size() + 3;
  bool prefer_substitution = true;
  for (std::size_t edit = 0; edit < budget && similarity() > limit; ++edit) {
    bool done = false;
    if (prefer_substitution) {
      for (std::size_t i = 0; i < st.tokens.size() && !done; ++i) {
        if (st.locked[i] || !has_letter(st.tokens[i])) continue;
        st.locked[i] = true;
        auto repl = tokenize(replacement_for(st.tokens[i]));
        if (repl.empty()) continue;
        if (starts_upper(st.tokens[i])) capitalize(repl.front());
        st.replace(i, repl);
        done = true;
      }
    }
    if (!done) {
      // Filler insertion at a seeded word boundary (never before position 1).
      const std::size_t slots = st.tokens.size() > 1 ? st.tokens.size() - 1 : 1;
      const std::size_t pos = 1 + static_cast<std::size_t>(st.rng() % slots);
      st.insert(pos, std::string(kFillers[st.rng() % kFillers.size()]));
    }
    prefer_substitution = !prefer_substitution;
  }
}

std::string OracleSimplifier::simplify(std::string_view prepended_source) const {
  const auto prefixed = split_control_prefix(prepended_source);
  auto tokens = tokenize(prefixed.body);
  if (tokens.empty()) throw ParseError("oracle input has no text after its control tokens");

  State st{Sentence::from_tokens(tokens), tokens, std::vector<bool>(tokens.size(), false),
           std::mt19937_64(config_.random_seed ^ fnv1a(join_tokens(tokens)))};

  const auto below_one = [&](ControlAttribute attr) -> std::optional<Bucket> {
    const auto b = prefixed.spec.get(attr);
    if (b && *b < Bucket::one()) return b;
    return std::nullopt;
  };

  if (const auto b = below_one(ControlAttribute::kDepTreeDepth)) {
    split_clauses(st, b->value());
    st.reset_locks();
  }
  if (const auto b = below_one(ControlAttribute::kNbChars)) compress(st, b->step());
  if (const auto b = below_one(ControlAttribute::kWordRank)) simplify_lexically(st, b->value());
  if (const auto b = below_one(ControlAttribute::kLevSim)) paraphrase(st, b->value());
  if (const auto b = below_one(ControlAttribute::kNbChars)) compress_to(st, b->value());

  return join_tokens(st.tokens);
}

std::string oracle_simplify(std::string_view prepended_source, const OracleConfig& config) {
  return OracleSimplifier(config).simplify(prepended_source);
}

std::vector<std::string> OracleSystem::run(std::span<const std::string> prepended) const {
  std::vector<std::string> out;
  out.reserve(prepended.size());
  for (const auto& line : prepended) out.push_back(oracle_.simplify(line));
  return out;
}

}  // namespace ctrlsimp
