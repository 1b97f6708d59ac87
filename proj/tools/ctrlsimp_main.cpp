// ctrlsimp: command-line front end for control-token annotation, ratio
// prepending, evaluation, ratio search and attribute analysis.
//
// Exit status: 0 success, 1 input/format error, 2 configuration error,
// 3 external-system failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctrlsimp/ctrlsimp.hpp"

namespace fs = std::filesystem;
using namespace ctrlsimp;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSystem = 3;

struct OracleFlags {
  std::string freq;
  std::string subs;
  double tolerance = 0.05;
  std::uint64_t seed = 0;
};

void add_oracle_flags(CLI::App* sub, OracleFlags& flags, bool freq_required) {
  auto* freq = sub->add_option("--freq", flags.freq, "Frequency list (word or word<TAB>count per line)");
  if (freq_required) freq->required();
  sub->add_option("--subs", flags.subs, "Substitution map (word<TAB>replacement per line)");
  sub->add_option("--tolerance", flags.tolerance, "Ratio tolerance of the oracle")->capture_default_str();
  sub->add_option("--seed", flags.seed, "Seed for tie-breaking among equal-cost edits")->capture_default_str();
}

OracleConfig make_oracle_config(const OracleFlags& flags) {
  if (flags.freq.empty()) throw ConfigError("the oracle needs --freq");
  OracleConfig config;
  config.table = std::make_shared<const FrequencyTable>(load_frequency_file(flags.freq));
  if (!flags.subs.empty()) config.substitutions = load_substitution_file(flags.subs);
  config.tolerance = flags.tolerance;
  config.random_seed = flags.seed;
  return config;
}

std::unique_ptr<SimplificationSystem> make_system(const std::string& spec, const OracleFlags& oracle) {
  if (spec == "builtin:identity") return std::make_unique<IdentitySystem>();
  if (spec == "builtin:oracle") return std::make_unique<OracleSystem>(make_oracle_config(oracle));
  if (spec.rfind("builtin:", 0) == 0) throw ConfigError("unknown builtin system '" + spec + "'");
  return std::make_unique<CommandSystem>(spec);
}

ControlSpec parse_set_flags(const std::vector<std::string>& items) {
  ControlSpec spec;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects Attr=R, got '" + item + "'");
    const auto attr = attribute_from_name(item.substr(0, eq));
    if (!attr) throw ConfigError("unknown control attribute '" + item.substr(0, eq) + "'");
    const auto buckets = parse_bucket_list(item.substr(eq + 1));
    if (buckets.size() != 1) throw ConfigError("--set expects a single ratio: '" + item + "'");
    if (spec.get(*attr)) throw ConfigError("attribute set twice: " + item.substr(0, eq));
    spec.set(*attr, buckets.front());
  }
  return spec;
}

/// Manifest from the subcommand's resolved options.
RunManifest make_manifest(const CLI::App* sub, const std::vector<std::string>& inputs) {
  RunManifest m;
  m.command = sub->get_name();
  m.tool_version = kVersion;
  for (const auto* opt : sub->get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--version" || name.empty()) continue;
    if (opt->count() > 0) {
      m.flags[name] = opt->results();
    } else if (!opt->get_default_str().empty()) {
      m.flags[name] = {opt->get_default_str()};
    }
  }
  for (const auto& path : inputs) {
    if (!path.empty()) m.input_digests[path] = sha256_file(path);
  }
  return m;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

// --- annotate ----------------------------------------------------------------

struct AnnotateArgs {
  std::string source, target, attrs, freq, conllu_src, conllu_tgt, out;
  bool depth_heuristic = false;
};

int run_annotate(const CLI::App* sub, const AnnotateArgs& a) {
  const auto attrs = parse_attribute_list(a.attrs);
  const bool have_trees = !a.conllu_src.empty() && !a.conllu_tgt.empty();
  if (a.conllu_src.empty() != a.conllu_tgt.empty()) {
    throw ConfigError("--conllu-src and --conllu-tgt must be given together");
  }
  const DepthSource depth = check_annotation_resources(attrs, !a.freq.empty(), have_trees, a.depth_heuristic);

  std::optional<FrequencyTable> table;
  if (!a.freq.empty()) table = load_frequency_file(a.freq);

  auto src_in = open_in(a.source);
  auto tgt_in = open_in(a.target);
  std::optional<std::ifstream> src_tree_in, tgt_tree_in;
  std::optional<ConlluReader> src_trees, tgt_trees;
  if (have_trees) {
    src_tree_in.emplace(open_in(a.conllu_src));
    tgt_tree_in.emplace(open_in(a.conllu_tgt));
    src_trees.emplace(*src_tree_in);
    tgt_trees.emplace(*tgt_tree_in);
  }
  auto out = open_out(a.out);

  std::size_t line_no = 0, warnings = 0;
  std::string src_line, tgt_line;
  while (true) {
    const bool has_src = next_line(src_in, src_line);
    const bool has_tgt = next_line(tgt_in, tgt_line);
    if (!has_src && !has_tgt) break;
    ++line_no;
    if (has_src != has_tgt) {
      throw InputError("line " + std::to_string(line_no) + ": " + (has_src ? "target" : "source") +
                       " file ended early");
    }
    PairResources res;
    res.table = table ? &*table : nullptr;
    res.allow_heuristic_depth = a.depth_heuristic;
    std::optional<DepTree> src_tree, tgt_tree;
    if (have_trees) {
      src_tree = src_trees->next();
      tgt_tree = tgt_trees->next();
      if (!src_tree || !tgt_tree) {
        throw InputError("line " + std::to_string(line_no) + ": CoNLL-U file has fewer sentences than the corpus");
      }
      res.source_tree = &*src_tree;
      res.target_trees = std::span<const DepTree>(&*tgt_tree, 1);
    }
    try {
      const auto annotated = annotate_line(Sentence(src_line), Sentence(tgt_line), attrs, res);
      warnings += annotated.fell_back ? 1 : 0;
      out << annotated.text << '\n';
    } catch (const Error& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (have_trees && (src_trees->next() || tgt_trees->next())) {
    throw InputError("CoNLL-U file has more sentences than the corpus");
  }
  if (warnings) std::cerr << "annotate: " << warnings << " line(s) fell back to bucket 1.0\n";

  auto manifest = make_manifest(sub, {a.source, a.target, a.freq, a.conllu_src, a.conllu_tgt});
  manifest.conventions["levsim"] = "indel-ratio";
  manifest.conventions["log_base"] = "e";
  manifest.conventions["depth_offset"] = "root=1";
  if (std::find(attrs.begin(), attrs.end(), ControlAttribute::kDepTreeDepth) != attrs.end()) {
    manifest.conventions["depth_source"] = std::string(depth_source_name(depth));
  }
  manifest.conventions["fallback_lines"] = std::to_string(warnings);
  manifest.write(a.out + ".manifest.json");
  return 0;
}

// --- prepend -------------------------------------------------------------------

struct PrependArgs {
  std::string source, out;
  std::vector<std::string> sets;
};

int run_prepend(const CLI::App* sub, const PrependArgs& a) {
  const ControlSpec spec = parse_set_flags(a.sets);
  if (spec.empty()) throw ConfigError("prepend needs at least one --set Attr=R");
  auto in = open_in(a.source);
  auto out = open_out(a.out);
  std::string line;
  while (next_line(in, line)) out << apply_fixed_ratio_line(line, spec) << '\n';

  auto manifest = make_manifest(sub, {a.source});
  manifest.conventions["prefix"] = spec.prefix();
  manifest.write(a.out + ".manifest.json");
  return 0;
}

// --- evaluate ------------------------------------------------------------------

struct EvaluateArgs {
  std::string source, pred, metric = "all", zero_division = "perfect", out;
  std::vector<std::string> refs;
};

int run_evaluate(const CLI::App* sub, const EvaluateArgs& a) {
  const bool want_sari = a.metric == "sari" || a.metric == "all";
  const bool want_fkgl = a.metric == "fkgl" || a.metric == "all";
  const bool want_bleu = a.metric == "bleu" || a.metric == "all";
  const auto zd = zero_division_from_name(a.zero_division);
  if ((want_sari || want_bleu) && a.refs.empty()) throw ConfigError("SARI and BLEU need --refs");
  if (want_sari && a.source.empty()) throw ConfigError("SARI needs --source");

  const auto predictions = read_lines(a.pred);
  const auto pred_sentences = to_sentences(predictions);
  std::vector<ReferenceSet> refs;
  if (!a.refs.empty()) {
    refs = load_references(a.refs);
    if (refs.size() != predictions.size()) {
      throw InputError("predictions have " + std::to_string(predictions.size()) + " lines, references " +
                       std::to_string(refs.size()));
    }
  }

  ensure_dir(a.out);
  std::ostringstream report;
  if (want_sari) {
    const auto sources = to_sentences(read_lines(a.source));
    if (sources.size() != predictions.size()) {
      throw InputError("source has " + std::to_string(sources.size()) + " lines, predictions " +
                       std::to_string(predictions.size()));
    }
    const auto result = sari(sources, pred_sentences, refs, SariOptions{zd});
    write_sari_report(report, result);
    auto csv = open_out((fs::path(a.out) / "sari_per_order.csv").string());
    write_sari_per_order_csv(csv, result);
    auto per_sentence = open_out((fs::path(a.out) / "sari_sentences.csv").string());
    per_sentence << "line,sari,f_add,f_keep,f_del\n";
    for (std::size_t i = 0; i < result.sentences.size(); ++i) {
      const auto& s = result.sentences[i];
      per_sentence << (i + 1) << ',' << format_number(s.score) << ',' << format_number(s.per_operation[0]) << ','
                   << format_number(s.per_operation[1]) << ',' << format_number(s.per_operation[2]) << '\n';
    }
  }
  if (want_fkgl) write_fkgl_report(report, fkgl(predictions));
  if (want_bleu) write_bleu_report(report, bleu(pred_sentences, refs));

  auto out = open_out((fs::path(a.out) / "report.txt").string());
  out << report.str();
  std::cout << report.str();

  std::vector<std::string> inputs = {a.source, a.pred};
  inputs.insert(inputs.end(), a.refs.begin(), a.refs.end());
  auto manifest = make_manifest(sub, inputs);
  manifest.conventions["sari_zero_division"] = std::string(zero_division_name(zd));
  manifest.conventions["sari_aggregation"] = "macro";
  manifest.conventions["bleu_reference_length"] = "closest";
  manifest.write((fs::path(a.out) / "manifest.json").string());
  return 0;
}

// --- stats -----------------------------------------------------------------------

struct StatsArgs {
  std::string source, target, out;
  double bin = 0.05;
};

int run_stats(const CLI::App* sub, const StatsArgs& a) {
  const auto sources = to_sentences(read_lines(a.source));
  const auto targets = to_sentences(read_lines(a.target));
  const auto histogram = compression_histogram(sources, targets, a.bin);
  auto out = open_out(a.out);
  write_histogram_csv(out, histogram);
  std::cout << "pairs=" << histogram.total << "\nmean=" << format_number(histogram.mean)
            << "\nmedian=" << format_number(histogram.median) << '\n';
  make_manifest(sub, {a.source, a.target}).write(a.out + ".manifest.json");
  return 0;
}

// --- search ------------------------------------------------------------------------

struct SearchArgs {
  std::string system, valid_source, grid, out, zero_division = "perfect";
  std::vector<std::string> refs;
  OracleFlags oracle;
};

int run_search(const CLI::App* sub, const SearchArgs& a) {
  const auto grid = RatioGrid::parse(a.grid);
  const auto zd = zero_division_from_name(a.zero_division);
  const auto system = make_system(a.system, a.oracle);
  CorpusPaths paths;
  paths.source = a.valid_source;
  paths.references = a.refs;
  const auto validation = load_corpus(paths);

  const auto result = grid_search_ratios(*system, validation, grid, SariOptions{zd});
  ensure_dir(a.out);
  auto csv = open_out((fs::path(a.out) / "grid.csv").string());
  write_grid_csv(csv, result);
  std::ostringstream best;
  best << "spec=" << result.best.label() << "\nprefix=" << result.best.prefix()
       << "\nsari=" << format_number(result.best_sari) << '\n';
  auto best_out = open_out((fs::path(a.out) / "best.txt").string());
  best_out << best.str();
  std::cout << best.str();

  std::vector<std::string> inputs = {a.valid_source, a.oracle.freq, a.oracle.subs};
  inputs.insert(inputs.end(), a.refs.begin(), a.refs.end());
  auto manifest = make_manifest(sub, inputs);
  manifest.conventions["sari_zero_division"] = std::string(zero_division_name(zd));
  manifest.conventions["tie_break"] = "lexicographic-canonical";
  manifest.write((fs::path(a.out) / "manifest.json").string());
  return 0;
}

// --- analyze ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string system, source, attr, buckets = "0.25,0.5,0.75,1.0", out;
  std::vector<std::string> refs;
  bool constrain_nbchars = false;
  double bin = 0.05;
  OracleFlags oracle;
};

int run_analyze(const CLI::App* sub, const AnalyzeArgs& a) {
  const auto controlled = attribute_from_name(a.attr);
  if (!controlled) throw ConfigError("unknown control attribute '" + a.attr + "'");
  InfluenceOptions options;
  options.buckets = parse_bucket_list(a.buckets);
  options.constrain_nbchars = a.constrain_nbchars;
  options.bin_width = a.bin;
  std::optional<FrequencyTable> table;
  if (!a.oracle.freq.empty()) {
    table = load_frequency_file(a.oracle.freq);
    options.table = &*table;
  }
  const auto system = make_system(a.system, a.oracle);
  CorpusPaths paths;
  paths.source = a.source;
  paths.references = a.refs;
  const auto corpus = load_corpus(paths);

  const auto report = cross_influence_analysis(*system, corpus, *controlled, options);
  ensure_dir(a.out);
  auto hist = open_out((fs::path(a.out) / "histograms.csv").string());
  write_influence_histograms_csv(hist, report);
  auto summary = open_out((fs::path(a.out) / "summary.csv").string());
  write_influence_summary_csv(summary, report);
  std::ostringstream meta;
  meta << "controlled=" << attribute_name(report.controlled) << "\nconstrained_nbchars="
       << (report.constrained ? "true" : "false") << "\nground_truth=" << (report.has_ground_truth ? "true" : "false")
       << "\nwordrank_measured=" << (report.wordrank_measured ? "true" : "false")
       << "\ndepth_source=" << depth_source_name(report.depth_source) << '\n';
  auto meta_out = open_out((fs::path(a.out) / "metadata.txt").string());
  meta_out << meta.str();
  write_influence_summary_csv(std::cout, report);

  std::vector<std::string> inputs = {a.source, a.oracle.freq, a.oracle.subs};
  inputs.insert(inputs.end(), a.refs.begin(), a.refs.end());
  auto manifest = make_manifest(sub, inputs);
  manifest.conventions["depth_source"] = std::string(depth_source_name(report.depth_source));
  manifest.conventions["levsim"] = "indel-ratio";
  manifest.write((fs::path(a.out) / "manifest.json").string());
  return 0;
}

// --- oracle -------------------------------------------------------------------------------

int run_oracle(const OracleFlags& flags) {
  const OracleSimplifier oracle(make_oracle_config(flags));
  std::ios::sync_with_stdio(false);
  std::string line;
  std::size_t line_no = 0;
  while (next_line(std::cin, line)) {
    ++line_no;
    try {
      std::cout << oracle.simplify(line) << '\n';
    } catch (const ParseError& e) {
      throw ParseError(std::string("stdin: ") + e.what(), line_no);
    }
  }
  std::cout.flush();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controllable sentence simplification toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "TOML config file; command-line flags override it");
  app.require_subcommand(1);

  auto with_version = [](CLI::App* sub) {
    sub->set_version_flag("--version", std::string(kVersion));
    return sub;
  };

  AnnotateArgs annotate;
  auto* annotate_cmd = with_version(app.add_subcommand("annotate", "Prepend control tokens computed from each pair"));
  annotate_cmd->add_option("--source", annotate.source, "Source sentences")->required();
  annotate_cmd->add_option("--target", annotate.target, "Target sentences")->required();
  annotate_cmd->add_option("--attrs", annotate.attrs, "Comma-separated attributes, e.g. NbChars,LevSim");
  annotate_cmd->add_option("--freq", annotate.freq, "Frequency list (needed for WordRank)");
  annotate_cmd->add_option("--conllu-src", annotate.conllu_src, "CoNLL-U parses of the sources");
  annotate_cmd->add_option("--conllu-tgt", annotate.conllu_tgt, "CoNLL-U parses of the targets");
  annotate_cmd->add_flag("--depth-heuristic", annotate.depth_heuristic,
                         "Estimate DepTreeDepth from surface cues when no CoNLL-U is given");
  annotate_cmd->add_option("--out", annotate.out, "Annotated source file")->required();

  PrependArgs prepend;
  auto* prepend_cmd = with_version(app.add_subcommand("prepend", "Prepend fixed control tokens to every line"));
  prepend_cmd->add_option("--source", prepend.source, "Source sentences")->required();
  prepend_cmd->add_option("--set", prepend.sets, "Attr=R, repeatable");
  prepend_cmd->add_option("--out", prepend.out, "Output file")->required();

  EvaluateArgs evaluate;
  auto* evaluate_cmd = with_version(app.add_subcommand("evaluate", "Score predictions with SARI, FKGL and BLEU"));
  evaluate_cmd->add_option("--source", evaluate.source, "Source sentences");
  evaluate_cmd->add_option("--pred", evaluate.pred, "Predictions")->required();
  evaluate_cmd->add_option("--refs", evaluate.refs, "Reference files ref.0 ... ref.N-1");
  evaluate_cmd->add_option("--metric", evaluate.metric, "sari|fkgl|bleu|all")
      ->check(CLI::IsMember({"sari", "fkgl", "bleu", "all"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--zero-division", evaluate.zero_division, "perfect|zero")
      ->check(CLI::IsMember({"perfect", "zero"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--out", evaluate.out, "Output directory")->required();

  StatsArgs stats;
  auto* stats_cmd = with_version(app.add_subcommand("stats", "Histogram of compression ratios target/source"));
  stats_cmd->add_option("--source", stats.source, "Source sentences")->required();
  stats_cmd->add_option("--target", stats.target, "Target sentences")->required();
  stats_cmd->add_option("--bin", stats.bin, "Bin width")->capture_default_str();
  stats_cmd->add_option("--out", stats.out, "CSV output")->required();

  SearchArgs search;
  auto* search_cmd = with_version(app.add_subcommand("search", "Find the SARI-maximizing fixed ratios"));
  search_cmd->add_option("--system", search.system, "Shell command, builtin:oracle or builtin:identity")->required();
  search_cmd->add_option("--valid-source", search.valid_source, "Validation sources")->required();
  search_cmd->add_option("--refs", search.refs, "Validation reference files")->required();
  search_cmd->add_option("--grid", search.grid, "e.g. NbChars=0.9,0.95;LevSim=0.7,0.75")->required();
  search_cmd->add_option("--zero-division", search.zero_division, "perfect|zero")
      ->check(CLI::IsMember({"perfect", "zero"}))
      ->capture_default_str();
  search_cmd->add_option("--out", search.out, "Output directory")->required();
  add_oracle_flags(search_cmd, search.oracle, false);

  AnalyzeArgs analyze;
  auto* analyze_cmd = with_version(app.add_subcommand("analyze", "Measure how one control token moves every attribute"));
  analyze_cmd->add_option("--system", analyze.system, "Shell command, builtin:oracle or builtin:identity")->required();
  analyze_cmd->add_option("--source", analyze.source, "Source sentences")->required();
  analyze_cmd->add_option("--refs", analyze.refs, "Reference files for the ground-truth series");
  analyze_cmd->add_option("--attr", analyze.attr, "Controlled attribute")->required();
  analyze_cmd->add_flag("--constrain-nbchars", analyze.constrain_nbchars, "Also prepend <NbChars_1.0>");
  analyze_cmd->add_option("--buckets", analyze.buckets, "Comma-separated target ratios")->capture_default_str();
  analyze_cmd->add_option("--bin", analyze.bin, "Histogram bin width")->capture_default_str();
  analyze_cmd->add_option("--out", analyze.out, "Output directory")->required();
  add_oracle_flags(analyze_cmd, analyze.oracle, false);

  OracleFlags oracle;
  auto* oracle_cmd = with_version(app.add_subcommand("oracle", "Rule-based simplifier: prepended sources on stdin"));
  add_oracle_flags(oracle_cmd, oracle, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*annotate_cmd) return run_annotate(annotate_cmd, annotate);
    if (*prepend_cmd) return run_prepend(prepend_cmd, prepend);
    if (*evaluate_cmd) return run_evaluate(evaluate_cmd, evaluate);
    if (*stats_cmd) return run_stats(stats_cmd, stats);
    if (*search_cmd) return run_search(search_cmd, search);
    if (*analyze_cmd) return run_analyze(analyze_cmd, analyze);
    if (*oracle_cmd) return run_oracle(oracle);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SystemError& e) {
    std::cerr << "system error: " << e.what() << '\n';
    return kExitSystem;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitConfig;
}
