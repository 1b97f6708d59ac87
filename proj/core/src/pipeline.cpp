#include "ctrlsimp/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <thread>

#include "ctrlsimp/error.hpp"

namespace ctrlsimp {

namespace {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once; callers write results by index, so the outcome is
/// identical to a sequential loop.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n / 64, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        try {
          const std::size_t end = std::min(n, (t + 1) * chunk);
          for (std::size_t i = t * chunk; i < end; ++i) fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Bucket parse_exact_bucket(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value < 0.0) {
    throw ConfigError("invalid ratio '" + std::string(text) + "'");
  }
  const Bucket b = bucketize(value);
  if (std::abs(b.value() - value) > 1e-9) {
    throw ConfigError("ratio " + std::string(text) + " is not a bucket (multiples of 0.05 in [0.05, 2.0])");
  }
  return b;
}

std::vector<double> measure_pairs(ControlAttribute attr, std::span<const Sentence> sources,
                                  std::span<const std::string> outputs, const FrequencyTable* table,
                                  std::size_t& skipped) {
  std::vector<double> values;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const Sentence out(outputs[i]);
    try {
      switch (attr) {
        case ControlAttribute::kNbChars:
          values.push_back(nbchars_ratio(sources[i], out));
          break;
        case ControlAttribute::kLevSim:
          values.push_back(levsim_ratio(sources[i], out));
          break;
        case ControlAttribute::kWordRank:
          values.push_back(wordrank_ratio(sources[i], out, *table));
          break;
        case ControlAttribute::kDepTreeDepth:
          values.push_back(heuristic_depth_ratio(sources[i], out.joined()));
          break;
      }
    } catch (const DomainError&) {
      ++skipped;
    }
  }
  return values;
}

}  // namespace

DepthSource check_annotation_resources(std::span<const ControlAttribute> attrs, bool have_table, bool have_trees,
                                       bool allow_heuristic_depth) {
  DepthSource depth = DepthSource::kConllu;
  for (auto attr : attrs) {
    if (attr == ControlAttribute::kWordRank && !have_table) {
      throw ConfigError("WordRank annotation needs a frequency list");
    }
    if (attr == ControlAttribute::kDepTreeDepth && !have_trees) {
      if (!allow_heuristic_depth) {
        throw ConfigError("DepTreeDepth annotation needs CoNLL-U for sources and targets (or the depth heuristic)");
      }
      depth = DepthSource::kHeuristic;
    }
  }
  return depth;
}

AnnotatedLine annotate_line(const Sentence& source, const Sentence& target, std::span<const ControlAttribute> attrs,
                            const PairResources& resources) {
  ControlSpec spec;
  AnnotatedLine line;
  for (auto attr : attrs) {
    try {
      spec.set(attr, bucketize(attribute_ratio(attr, source, target, resources)));
    } catch (const DomainError&) {
      spec.set(attr, Bucket::one());
      line.fell_back = true;
    }
  }
  const std::string prefix = spec.prefix();
  line.text = prefix.empty() ? source.joined() : prefix + " " + source.joined();
  return line;
}

AnnotationResult annotate_corpus(const ParallelCorpus& corpus, std::span<const ControlAttribute> attrs,
                                 const AnnotationOptions& options) {
  if (!corpus.has_targets()) throw ConfigError("annotation needs target sentences");
  corpus.validate();
  AnnotationResult result;
  result.depth_source =
      check_annotation_resources(attrs, options.table != nullptr, corpus.has_trees(), options.allow_heuristic_depth);

  result.lines.resize(corpus.size());
  std::vector<char> fell_back(corpus.size(), 0);
  parallel_for(corpus.size(), options.threads, [&](std::size_t i) {
    PairResources res;
    res.table = options.table;
    res.allow_heuristic_depth = options.allow_heuristic_depth;
    if (corpus.has_trees()) {
      res.source_tree = &corpus.source_trees[i];
      res.target_trees = std::span<const DepTree>(&corpus.target_trees[i], 1);
    }
    auto line = annotate_line(corpus.sources[i], corpus.targets[i], attrs, res);
    result.lines[i] = std::move(line.text);
    fell_back[i] = line.fell_back;
  });
  result.warnings = static_cast<std::size_t>(std::count(fell_back.begin(), fell_back.end(), 1));
  return result;
}

std::string apply_fixed_ratio_line(std::string_view source, const ControlSpec& spec) {
  if (spec.empty()) return std::string(source);
  return spec.prefix() + " " + std::string(source);
}

std::vector<std::string> apply_fixed_ratios(std::span<const std::string> sources, const ControlSpec& spec) {
  std::vector<std::string> out;
  out.reserve(sources.size());
  for (const auto& s : sources) out.push_back(apply_fixed_ratio_line(s, spec));
  return out;
}

void RatioGrid::add(ControlAttribute attr, Bucket bucket) {
  auto& axis = axes_[attr];
  const auto it = std::lower_bound(axis.begin(), axis.end(), bucket);
  if (it == axis.end() || *it != bucket) axis.insert(it, bucket);
}

std::vector<ControlSpec> RatioGrid::expand() const {
  std::vector<ControlSpec> specs{ControlSpec{}};
  for (const auto& [attr, buckets] : axes_) {
    std::vector<ControlSpec> next;
    next.reserve(specs.size() * buckets.size());
    for (const auto& partial : specs) {
      for (auto b : buckets) {
        ControlSpec s = partial;
        s.set(attr, b);
        next.push_back(std::move(s));
      }
    }
    specs = std::move(next);
  }
  if (axes_.empty()) return {};
  return specs;
}

RatioGrid RatioGrid::parse(std::string_view text) {
  RatioGrid grid;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    const auto axis = text.substr(start, end - start);
    start = end + 1;
    if (axis.find_first_not_of(' ') == std::string_view::npos) continue;
    const auto eq = axis.find('=');
    if (eq == std::string_view::npos) throw ConfigError("grid axis needs Attr=r1,r2,...: '" + std::string(axis) + "'");
    auto name = axis.substr(0, eq);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    const auto attr = attribute_from_name(name);
    if (!attr) throw ConfigError("unknown control attribute '" + std::string(name) + "'");
    for (auto b : parse_bucket_list(axis.substr(eq + 1))) grid.add(*attr, b);
  }
  if (grid.empty()) throw ConfigError("empty ratio grid");
  return grid;
}

std::vector<Bucket> parse_bucket_list(std::string_view text) {
  std::vector<Bucket> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(parse_exact_bucket(text.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

GridSearchResult grid_search_ratios(const SimplificationSystem& system, const ParallelCorpus& validation,
                                    const RatioGrid& grid, const SariOptions& sari_options) {
  if (!validation.has_references()) throw ConfigError("grid search needs validation references");
  validation.validate();
  std::vector<std::string> sources;
  sources.reserve(validation.size());
  for (const auto& s : validation.sources) sources.push_back(s.joined());

  GridSearchResult result;
  for (const auto& spec : grid.expand()) {
    std::vector<std::string> predictions;
    try {
      predictions = system.run(apply_fixed_ratios(sources, spec));
    } catch (const Error& e) {
      throw SystemError("system failed for spec " + spec.label() + ": " + e.what());
    }
    const auto pred_sentences = to_sentences(predictions);
    GridRow row{spec, sari(validation.sources, pred_sentences, validation.references, sari_options).sari, 0.0};
    try {
      row.fkgl = fkgl(predictions).fkgl;
    } catch (const DomainError&) {
      row.fkgl = std::nan("");
    }
    result.table.push_back(std::move(row));
  }
  if (result.table.empty()) throw ConfigError("empty ratio grid");

  // Table rows are in canonical spec order, so the first maximum is the
  // lexicographically smallest among ties.
  const auto best = std::max_element(result.table.begin(), result.table.end(),
                                     [](const GridRow& a, const GridRow& b) { return a.sari < b.sari; });
  result.best = best->spec;
  result.best_sari = best->sari;
  return result;
}

void write_grid_csv(std::ostream& out, const GridSearchResult& result) {
  out << "spec,sari,fkgl\n";
  for (const auto& row : result.table) {
    out << row.spec.label() << ',' << format_number(row.sari) << ','
        << (std::isnan(row.fkgl) ? std::string("nan") : format_number(row.fkgl)) << '\n';
  }
}

AblationSchedule::AblationSchedule(std::vector<ControlAttribute> pool) {
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  remaining_ = std::move(pool);
}

std::vector<AttributeSet> AblationSchedule::round() const {
  std::vector<AttributeSet> sets;
  for (auto attr : remaining_) {
    AttributeSet s = selected_;
    s.push_back(attr);
    std::sort(s.begin(), s.end());
    sets.push_back(std::move(s));
  }
  return sets;
}

void AblationSchedule::advance(const AttributeSet& winner) {
  AttributeSet sorted = winner;
  std::sort(sorted.begin(), sorted.end());
  for (auto it = remaining_.begin(); it != remaining_.end(); ++it) {
    AttributeSet candidate = selected_;
    candidate.push_back(*it);
    std::sort(candidate.begin(), candidate.end());
    if (candidate == sorted) {
      selected_ = std::move(candidate);
      remaining_.erase(it);
      return;
    }
  }
  throw ConfigError("ablation winner is not a candidate of the current round");
}

std::vector<AblationRound> run_ablation(std::vector<ControlAttribute> pool,
                                        const std::function<double(const AttributeSet&)>& score) {
  AblationSchedule schedule(std::move(pool));
  std::vector<AblationRound> rounds;
  while (!schedule.finished()) {
    AblationRound round;
    round.candidates = schedule.round();
    for (const auto& set : round.candidates) round.scores.push_back(score(set));
    round.winner = static_cast<std::size_t>(
        std::distance(round.scores.begin(), std::max_element(round.scores.begin(), round.scores.end())));
    schedule.advance(round.candidates[round.winner]);
    rounds.push_back(std::move(round));
  }
  return rounds;
}

std::size_t ablation_candidate_count(std::size_t pool_size) { return pool_size * (pool_size + 1) / 2; }

InfluenceReport cross_influence_analysis(const SimplificationSystem& system, const ParallelCorpus& corpus,
                                         ControlAttribute controlled, const InfluenceOptions& options) {
  corpus.validate();
  std::vector<Bucket> buckets = options.buckets;
  if (buckets.empty()) {
    for (int step : {5, 10, 15, 20}) buckets.push_back(Bucket::from_step(step));
  }

  InfluenceReport report;
  report.controlled = controlled;
  report.constrained = options.constrain_nbchars;
  report.has_ground_truth = corpus.has_references();
  report.wordrank_measured = options.table != nullptr && options.table->vocab_size() > 0;
  report.depth_source = DepthSource::kHeuristic;

  std::vector<std::string> sources;
  sources.reserve(corpus.size());
  for (const auto& s : corpus.sources) sources.push_back(s.joined());

  auto measure_all = [&](const std::string& series, std::span<const Sentence> srcs,
                         std::span<const std::string> outputs) {
    for (auto attr : kAllAttributes) {
      if (attr == ControlAttribute::kWordRank && !report.wordrank_measured) continue;
      AttributeDistribution dist;
      dist.series = series;
      dist.measured = attr;
      dist.values = measure_pairs(attr, srcs, outputs, options.table, dist.skipped);
      dist.histogram = make_histogram(dist.values, options.bin_width);
      report.distributions.push_back(std::move(dist));
    }
  };

  for (auto bucket : buckets) {
    ControlSpec spec;
    spec.set(controlled, bucket);
    if (options.constrain_nbchars && controlled != ControlAttribute::kNbChars) {
      spec.set(ControlAttribute::kNbChars, Bucket::one());
    }
    std::vector<std::string> outputs;
    try {
      outputs = system.run(apply_fixed_ratios(sources, spec));
    } catch (const Error& e) {
      throw SystemError("system failed for spec " + spec.label() + ": " + e.what());
    }
    measure_all(bucket.str(), corpus.sources, outputs);
  }

  if (report.has_ground_truth) {
    std::vector<Sentence> srcs;
    std::vector<std::string> refs;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      for (const auto& r : corpus.references[i]) {
        srcs.push_back(corpus.sources[i]);
        refs.push_back(r.joined());
      }
    }
    measure_all("ground_truth", srcs, refs);
  }
  return report;
}

void write_influence_histograms_csv(std::ostream& out, const InfluenceReport& report) {
  out << "series,attribute,bin_low,bin_high,count,density\n";
  for (const auto& d : report.distributions) {
    for (const auto& row : d.histogram.rows) {
      out << d.series << ',' << attribute_name(d.measured) << ',' << format_number(row.bin_low, 4) << ','
          << format_number(row.bin_high, 4) << ',' << row.count << ',' << format_number(row.density) << '\n';
    }
  }
}

void write_influence_summary_csv(std::ostream& out, const InfluenceReport& report) {
  out << "series,attribute,n,skipped,mean,median\n";
  for (const auto& d : report.distributions) {
    out << d.series << ',' << attribute_name(d.measured) << ',' << d.values.size() << ',' << d.skipped << ','
        << (d.values.empty() ? std::string("nan") : format_number(d.histogram.mean)) << ','
        << (d.values.empty() ? std::string("nan") : format_number(d.histogram.median)) << '\n';
  }
}

}  // namespace ctrlsimp
