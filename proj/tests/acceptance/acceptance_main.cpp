// Acceptance checks: one PASS/FAIL/SKIP line per criterion. Exit status is
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctrlsimp/ctrlsimp.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace ctrlsimp;
using ctrlsimp::testing::quote;
using ctrlsimp::testing::run_command;
using ctrlsimp::testing::ScratchDir;
using ctrlsimp::testing::Tokens;

namespace {

const std::string kCli = CTRLSIMP_CLI_PATH;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  bool failed() const { return failed_; }
  Outcome outcome(const std::string& summary) const {
    if (!failed_) return {Status::kPass, summary};
    std::string d;
    for (const auto& f : failures_) d += (d.empty() ? "" : "; ") + f;
    return {Status::kFail, d};
  }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
};

std::string fmt(double v, int prec = 6) { return format_number(v, prec); }

const Sentence kSource("He settled in London, devoting himself chiefly to practical teaching.");
const Sentence kTarget("He teaches in London.");

Outcome london_pair_nbchars() {
  Check c;
  const std::size_t a = count_chars(kSource);
  const std::size_t b = count_chars(kTarget);
  const Bucket bucket = bucketize(nbchars_ratio(kSource, kTarget));
  const std::string token = format_token({ControlAttribute::kNbChars, bucket});
  c.expect(a == 71, "source chars " + std::to_string(a));
  c.expect(b == 22, "target chars " + std::to_string(b));
  c.expect(bucket.step() == 6, "bucket " + bucket.str());
  c.expect(token == "<NbChars_0.3>", "token " + token);
  return c.outcome("chars 71/22, token " + token);
}

Outcome levsim_fixture() {
  Check c;
  const double v = levsim_ratio(kSource, kTarget);
  c.expect(v >= 0.35 && v <= 0.39, "levsim " + fmt(v));
  return c.outcome("levsim " + fmt(v) + " (bucket " + bucketize(v).str() + ")");
}

Outcome bucketing_suite() {
  Check c;
  std::mt19937 rng(20241015);
  std::vector<double> xs;
  for (int i = 0; i < 10000; ++i) xs.push_back(5.0 * (static_cast<double>(rng()) / 4294967296.0));
  std::set<int> image;
  for (double x : xs) {
    const Bucket b = bucketize(x);
    image.insert(b.step());
    c.expect(bucketize(b.value()) == b, "idempotence at " + fmt(x));
    c.expect(b.value() <= 2.0 + 1e-12, "cap at " + fmt(x));
    if (x >= 2.0) c.expect(b.step() == Bucket::kMaxStep, "cap value at " + fmt(x));
  }
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    c.expect(bucketize(xs[i - 1]) <= bucketize(xs[i]), "monotonicity at " + fmt(xs[i]));
  }
  c.expect(image.size() == 40, "image size " + std::to_string(image.size()));
  return c.outcome(std::to_string(image.size()) + " distinct buckets over 10000 ratios");
}

struct Triple {
  Tokens src, pred;
  std::vector<Tokens> refs;
};

Triple random_triple(std::mt19937& rng) {
  Triple t;
  t.src = ctrlsimp::testing::random_tokens(rng, 1, 6, 4);
  t.pred = ctrlsimp::testing::random_tokens(rng, 0, 6, 4);
  for (int k = ctrlsimp::testing::uniform(rng, 1, 4); k > 0; --k) {
    t.refs.push_back(ctrlsimp::testing::random_tokens(rng, 0, 6, 4));
  }
  return t;
}

double impl_sari(const Tokens& src, const Tokens& pred, const std::vector<Tokens>& refs, ZeroDivision zd) {
  std::vector<Sentence> rs;
  for (const auto& r : refs) rs.push_back(Sentence::from_tokens(r));
  return sari_sentence(Sentence::from_tokens(src), Sentence::from_tokens(pred), rs, {zd}).score;
}

Outcome sari_oracle_equivalence() {
  Check c;
  std::mt19937 rng(4);
  double worst = 0.0;
  const int n = 1500;
  for (int i = 0; i < n; ++i) {
    const Triple t = random_triple(rng);
    for (bool perfect : {true, false}) {
      const double got = impl_sari(t.src, t.pred, t.refs, perfect ? ZeroDivision::kPerfect : ZeroDivision::kZero);
      const double want = ctrlsimp::testing::brute_force_sari(t.src, t.pred, t.refs, perfect);
      worst = std::max(worst, std::abs(got - want));
      c.expect(std::abs(got - want) <= 1e-9, "triple " + std::to_string(i) + " diff " + fmt(got - want, 12));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", worst);
  return c.outcome(std::to_string(n) + " triples x 2 conventions, max |diff| " + buf);
}

Outcome sari_properties() {
  Check c;
  std::mt19937 rng(5);
  for (int i = 0; i < 500; ++i) {
    Triple t = random_triple(rng);
    for (auto zd : {ZeroDivision::kPerfect, ZeroDivision::kZero}) {
      const double base = impl_sari(t.src, t.pred, t.refs, zd);
      c.expect(base >= 0.0 && base <= 100.0, "range " + fmt(base));
      auto perm = t.refs;
      std::reverse(perm.begin(), perm.end());
      std::rotate(perm.begin(), perm.begin() + static_cast<long>(perm.size() / 2), perm.end());
      c.expect(std::abs(impl_sari(t.src, t.pred, perm, zd) - base) <= 1e-9, "permutation at " + std::to_string(i));
      auto dup = t.refs;
      dup.insert(dup.end(), t.refs.begin(), t.refs.end());
      c.expect(std::abs(impl_sari(t.src, t.pred, dup, zd) - base) <= 1e-9, "duplication at " + std::to_string(i));
    }
    if (!t.refs[0].empty()) {
      const double same = impl_sari(t.src, t.refs[0], {t.refs[0]}, ZeroDivision::kPerfect);
      c.expect(std::abs(same - 100.0) <= 1e-9, "pred==ref gives " + fmt(same));
    }
  }
  return c.outcome("500 triples: range, permutation, duplication, pred==ref");
}

Outcome fkgl_fixtures() {
  Check c;
  const std::vector<std::string> a = {"The cat sat on the mat ."};
  const std::vector<std::string> b = {"A b . C d ."};
  const auto ra = fkgl(a);
  const auto rb = fkgl(b);
  const double fa = ra.fkgl;
  const double fb = rb.fkgl;
  c.expect(ra.nb_sentences == 1 && ra.nb_words == 6 && ra.nb_syllables == 6, "first fixture counts");
  c.expect(rb.nb_sentences == 2 && rb.nb_words == 4 && rb.nb_syllables == 4, "second fixture counts");
  c.expect(std::abs(fa - (0.39 * 6 + 11.8 * 1 - 15.59)) <= 1e-9 && std::abs(fa + 1.45) <= 1e-9,
           "first fixture " + fmt(fa, 12));
  // 0.39 * 2 + 11.8 * 1 - 15.59 evaluates to -3.01.
  c.expect(std::abs(fb - (0.39 * 2 + 11.8 * 1 - 15.59)) <= 1e-9 && std::abs(fb + 3.01) <= 1e-9,
           "second fixture " + fmt(fb, 12));
  std::vector<std::string> corpus = {"The cat sat on the mat .", "Simplification helps readers . It works ."};
  const double once = fkgl(corpus).fkgl;
  corpus.insert(corpus.end(), corpus.begin(), corpus.end());
  c.expect(std::abs(fkgl(corpus).fkgl - once) <= 1e-9, "duplication");
  return c.outcome("fkgl " + fmt(fa, 2) + " and " + fmt(fb, 2));
}

Outcome levenshtein_suite() {
  Check c;
  std::vector<std::string> all = {""};
  for (std::size_t len = 1, start = 0; len <= 6; ++len) {
    const std::size_t end = all.size();
    for (std::size_t i = start; i < end; ++i) {
      for (char ch : {'a', 'b', 'c'}) all.push_back(all[i] + ch);
    }
    start = end;
  }
  std::size_t pairs = 0;
  for (const auto& a : all) {
    for (const auto& b : all) {
      ++pairs;
      const auto got = levenshtein_distance(a, b);
      if (got != ctrlsimp::testing::recursive_levenshtein(a, b)) c.expect(false, "'" + a + "' vs '" + b + "'");
    }
  }
  std::mt19937 rng(7);
  auto word = [&] {
    std::string s;
    for (int k = ctrlsimp::testing::uniform(rng, 0, 8); k > 0; --k) {
      s.push_back(static_cast<char>('a' + ctrlsimp::testing::uniform(rng, 0, 2)));
    }
    return s;
  };
  for (int i = 0; i < 1000; ++i) {
    const std::string x = word(), y = word(), z = word();
    c.expect(levenshtein_distance(x, z) <= levenshtein_distance(x, y) + levenshtein_distance(y, z),
             "triangle " + x + "," + y + "," + z);
  }
  return c.outcome(std::to_string(pairs) + " exhaustive pairs, 1000 triangle triples");
}

int cli(const std::string& args, const std::string& stdout_path = "/dev/null") {
  return run_command(quote(kCli) + " " + args + " > " + quote(stdout_path) + " 2>/dev/null");
}

/// summary.csv rows -> (series, attribute) -> median
std::map<std::pair<std::string, std::string>, double> read_summary(const std::string& path) {
  std::map<std::pair<std::string, std::string>, double> out;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() == 6) out[{f[0], f[1]}] = std::stod(f[5]);
  }
  return out;
}

Outcome end_to_end_pipeline() {
  Check c;
  ScratchDir dir;
  const auto corpus = ctrlsimp::testing::synthetic_corpus(100, 2024);
  ctrlsimp::testing::write_file(dir.file("src.txt"), corpus);
  ctrlsimp::testing::write_file(dir.file("freq.txt"), ctrlsimp::testing::synthetic_frequency_list());
  const std::string oracle_cmd = quote(kCli) + " oracle --freq " + quote(dir.file("freq.txt"));
  std::string detail;

  // prepend -> oracle -> stats, one bucket at a time.
  for (const char* r : {"0.25", "0.5", "0.75", "1.0"}) {
    const std::string pre = dir.file(std::string("pre_") + r + ".txt");
    const std::string pred = dir.file(std::string("pred_") + r + ".txt");
    c.expect(cli("prepend --source " + quote(dir.file("src.txt")) + " --set NbChars=" + r + " --out " + quote(pre)) == 0,
             std::string("prepend ") + r);
    c.expect(run_command(oracle_cmd + " < " + quote(pre) + " > " + quote(pred)) == 0, std::string("oracle ") + r);
    std::vector<double> ratios;
    const auto preds = read_lines(pred);
    c.expect(preds.size() == corpus.size(), "line count");
    for (std::size_t i = 0; i < std::min(preds.size(), corpus.size()); ++i) {
      ratios.push_back(nbchars_ratio(Sentence(corpus[i]), Sentence(preds[i])));
    }
    const double med = median_of(ratios);
    c.expect(std::abs(med - std::stod(r)) <= 0.05 + 1e-9, std::string("piped median at ") + r + " = " + fmt(med, 4));
  }

  // analyze drives the same oracle as an external command.
  const std::string out = dir.path() / "analysis";
  c.expect(cli("analyze --system " + quote(oracle_cmd) + " --source " + quote(dir.file("src.txt")) +
               " --attr NbChars --buckets 0.25,0.5,0.75,1.0 --out " + quote(out)) == 0,
           "analyze oracle");
  const auto summary = read_summary(out + "/summary.csv");
  for (const char* r : {"0.25", "0.5", "0.75", "1.0"}) {
    const auto it = summary.find({r, "NbChars"});
    const bool found = it != summary.end();
    c.expect(found, std::string("missing series ") + r);
    if (!found) continue;
    c.expect(std::abs(it->second - std::stod(r)) <= 0.05 + 1e-9,
             std::string("analyze median at ") + r + " = " + fmt(it->second, 4));
    detail += std::string(detail.empty() ? "" : ", ") + r + "->" + fmt(it->second, 3);
  }

  const std::string id_out = dir.path() / "identity";
  c.expect(cli("analyze --system builtin:identity --source " + quote(dir.file("src.txt")) +
               " --attr NbChars --buckets 0.25,0.5,0.75,1.0 --out " + quote(id_out)) == 0,
           "analyze identity");
  const auto id_summary = read_summary(id_out + "/summary.csv");
  std::ifstream hist(id_out + "/histograms.csv");
  std::string line;
  std::getline(hist, line);
  std::size_t nb_rows = 0;
  while (std::getline(hist, line)) {
    if (line.find(",NbChars,") != std::string::npos) ++nb_rows;
  }
  c.expect(nb_rows == 4, "identity NbChars histogram rows " + std::to_string(nb_rows));
  for (const char* r : {"0.25", "0.5", "0.75", "1.0"}) {
    const auto it = id_summary.find({r, "NbChars"});
    c.expect(it != id_summary.end() && it->second == 1.0, std::string("identity median at ") + r);
  }
  return c.outcome("medians " + detail + "; identity at 1.0");
}

std::string read_best_spec(const std::string& dir) {
  std::ifstream in(dir + "/best.txt");
  std::string line;
  std::getline(in, line);
  return line.rfind("spec=", 0) == 0 ? line.substr(5) : line;
}

Outcome grid_search_planted() {
  Check c;
  ScratchDir dir;
  const auto corpus = ctrlsimp::testing::synthetic_corpus(40, 77);
  const auto freq = ctrlsimp::testing::synthetic_frequency_list();
  ctrlsimp::testing::write_file(dir.file("valid.txt"), corpus);
  ctrlsimp::testing::write_file(dir.file("freq.txt"), freq);

  OracleConfig config;
  config.table = std::make_shared<const FrequencyTable>(FrequencyTable::from_ranked_words(freq));
  const OracleSystem oracle(config);
  ControlSpec planted;
  planted.set(ControlAttribute::kNbChars, bucketize(0.75));
  planted.set(ControlAttribute::kWordRank, bucketize(0.75));
  const auto refs = oracle.run(apply_fixed_ratios(corpus, planted));
  ctrlsimp::testing::write_file(dir.file("ref.0"), refs);

  const std::string common = "search --system builtin:oracle --freq " + quote(dir.file("freq.txt")) +
                             " --valid-source " + quote(dir.file("valid.txt")) + " --refs " + quote(dir.file("ref.0"));
  const std::vector<std::string> grids = {"NbChars=0.5,0.75;WordRank=0.75,1.0", "WordRank=1.0,0.75;NbChars=0.75,0.5"};
  std::vector<std::string> winners;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    const std::string out = dir.path() / ("search" + std::to_string(i));
    c.expect(cli(common + " --grid " + quote(grids[i]) + " --out " + quote(out)) == 0, "search " + grids[i]);
    winners.push_back(read_best_spec(out));
    c.expect(winners.back() == planted.label(), "grid " + grids[i] + " picked " + winners.back());
  }
  c.expect(ctrlsimp::testing::read_file(dir.path() / "search0/grid.csv") ==
               ctrlsimp::testing::read_file(dir.path() / "search1/grid.csv"),
           "grid tables differ across orderings");

  // Independent exhaustive loop over the same grid.
  double best = -1.0;
  std::string best_label;
  const auto sources = to_sentences(corpus);
  std::vector<ReferenceSet> ref_sets;
  for (const auto& r : refs) ref_sets.push_back({Sentence(r)});
  for (double nb : {0.5, 0.75}) {
    for (double wr : {0.75, 1.0}) {
      ControlSpec spec;
      spec.set(ControlAttribute::kNbChars, bucketize(nb));
      spec.set(ControlAttribute::kWordRank, bucketize(wr));
      const auto preds = to_sentences(oracle.run(apply_fixed_ratios(corpus, spec)));
      const double s = sari(sources, preds, ref_sets).sari;
      if (s > best) {
        best = s;
        best_label = spec.label();
      }
    }
  }
  c.expect(best_label == planted.label(), "exhaustive loop picked " + best_label);
  return c.outcome("picked " + (winners.empty() ? std::string("?") : winners[0]) + " under both grid orders");
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

Outcome data_dependent() {
  const std::string root = env_or_empty("CTRLSIMP_TURKCORPUS_DIR");
  if (root.empty() || !fs::exists(root)) return {Status::kSkip, "set CTRLSIMP_TURKCORPUS_DIR to run"};
  Check c;
  auto refs_for = [&](const std::string& split) {
    std::vector<std::string> paths;
    for (int i = 0; i < 8; ++i) paths.push_back(root + "/" + split + ".8turkers.tok.turk." + std::to_string(i));
    return paths;
  };
  const auto test_src = to_sentences(read_lines(root + "/test.8turkers.tok.norm"));
  const auto test_refs = load_references(refs_for("test"));
  const double b = bleu(test_src, test_refs).bleu;
  c.expect(std::abs(b - 99.37) <= 0.5, "copy BLEU " + fmt(b, 2));

  std::vector<double> ratios;
  for (const std::string split : {"tune", "test"}) {
    const auto src = to_sentences(read_lines(root + "/" + split + ".8turkers.tok.norm"));
    const auto refs = load_references(refs_for(split));
    for (std::size_t i = 0; i < src.size(); ++i) {
      for (const auto& r : refs[i]) ratios.push_back(nbchars_ratio(src[i], r));
    }
  }
  double mean = 0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  c.expect(std::abs(mean - 0.93) <= 0.01, "reference compression mean " + fmt(mean, 3));
  return c.outcome("copy BLEU " + fmt(b, 2) + ", compression mean " + fmt(mean, 3));
}

Outcome conllu_suite() {
  Check c;
  auto row = [](int id, int head) {
    return std::to_string(id) + "\tw\t_\t_\t_\t_\t" + std::to_string(head) + "\t_\t_\t_\n";
  };
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_conllu(in);
  };
  const auto path = parse(row(1, 0) + row(2, 1) + row(3, 2) + row(4, 3) + "\n");
  const auto star = parse(row(1, 0) + row(2, 1) + row(3, 1) + row(4, 1) + "\n");
  c.expect(tree_depth(path.at(0)) == 4, "path depth");
  c.expect(tree_depth(star.at(0)) == 2, "star depth");
  auto rejects = [&](const std::string& text) {
    try {
      parse(text);
    } catch (const ParseError&) {
      return true;
    }
    return false;
  };
  c.expect(rejects(row(1, 2) + row(2, 1) + "\n"), "cycle accepted");
  c.expect(rejects(row(1, 0) + row(2, 3) + row(3, 2) + "\n"), "detached cycle accepted");
  c.expect(rejects(row(1, 0) + row(2, 0) + "\n"), "multi-root accepted");

  const auto first = parse(ctrlsimp::testing::hand_built_conllu());
  c.expect(first.size() == 50, "sentences " + std::to_string(first.size()));
  std::ostringstream out;
  write_conllu(out, first);
  const auto second = parse(out.str());
  std::ostringstream again;
  write_conllu(again, second);
  c.expect(first == second, "trees differ after round trip");
  c.expect(out.str() == again.str(), "serialization not a fixed point");
  return c.outcome("path 4, star 2, cycle and multi-root rejected, 50-sentence fixed point");
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "london-pair-nbchars", 0.001, london_pair_nbchars},
      {2, "london-pair-levsim", 0.001, levsim_fixture},
      {3, "bucketing", 1.0, bucketing_suite},
      {4, "sari-oracle-equivalence", 30.0, sari_oracle_equivalence},
      {5, "sari-properties", 10.0, sari_properties},
      {6, "fkgl-fixtures", 1.0, fkgl_fixtures},
      {7, "levenshtein", 30.0, levenshtein_suite},
      {8, "end-to-end-oracle-pipeline", 60.0, end_to_end_pipeline},
      {9, "grid-search-planted-spec", 60.0, grid_search_planted},
      {10, "turkcorpus-data", 60.0, data_dependent},
      {11, "conllu", 1.0, conllu_suite},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.status == Status::kPass && secs > cr.budget_seconds) {
      o = {Status::kFail, o.detail + "; took " + fmt(secs, 4) + "s, budget " + fmt(cr.budget_seconds, 3) + "s"};
    }
    const char* label = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    if (o.status == Status::kFail) ++failures;
    std::printf("%s criterion %d %s (%.4fs): %s\n", label, cr.id, cr.name, secs, o.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
