#pragma once

#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctrlsimp/control.hpp"
#include "ctrlsimp/corpus.hpp"
#include "ctrlsimp/metrics.hpp"
#include "ctrlsimp/system.hpp"

namespace ctrlsimp {

// --- Train-time annotation -------------------------------------------------

struct AnnotationOptions {
  const FrequencyTable* table = nullptr;
  /// Use the surface heuristic for DepTreeDepth when the corpus has no trees.
  bool allow_heuristic_depth = false;
  /// Worker threads; 0 picks hardware concurrency. Output does not depend on it.
  unsigned threads = 0;
};

struct AnnotatedLine {
  std::string text;
  bool fell_back = false;  // some attribute degraded to bucket 1.0
};

/// Annotates one pair. Attributes whose ratio cannot be computed for this pair
/// (DomainError, e.g. a degenerate WordRank) get bucket 1.0 and mark the line.
/// Missing resources still throw ConfigError.
AnnotatedLine annotate_line(const Sentence& source, const Sentence& target, std::span<const ControlAttribute> attrs,
                            const PairResources& resources);

struct AnnotationResult {
  std::vector<std::string> lines;
  std::size_t warnings = 0;  // lines that fell back to bucket 1.0
  DepthSource depth_source = DepthSource::kConllu;
};

/// Throws ConfigError when the corpus lacks targets or a requested resource.
AnnotationResult annotate_corpus(const ParallelCorpus& corpus, std::span<const ControlAttribute> attrs,
                                 const AnnotationOptions& options = {});

/// Checks that everything attrs need is available; throws ConfigError.
DepthSource check_annotation_resources(std::span<const ControlAttribute> attrs, bool have_table, bool have_trees,
                                       bool allow_heuristic_depth);

// --- Inference-time prepending -----------------------------------------------

std::string apply_fixed_ratio_line(std::string_view source, const ControlSpec& spec);
std::vector<std::string> apply_fixed_ratios(std::span<const std::string> sources, const ControlSpec& spec);

// --- Ratio search --------------------------------------------------------------

/// Candidate buckets per attribute. Candidates are kept sorted and unique so
/// the expansion does not depend on the order they were supplied in.
class RatioGrid {
 public:
  void add(ControlAttribute attr, Bucket bucket);
  const std::map<ControlAttribute, std::vector<Bucket>>& axes() const noexcept { return axes_; }
  bool empty() const noexcept { return axes_.empty(); }

  /// Cartesian product in canonical order.
  std::vector<ControlSpec> expand() const;

  /// "NbChars=0.5,0.75;LevSim=0.75,1.0". Throws ConfigError.
  static RatioGrid parse(std::string_view text);

 private:
  std::map<ControlAttribute, std::vector<Bucket>> axes_;
};

struct GridRow {
  ControlSpec spec;
  double sari = 0.0;
  double fkgl = 0.0;
};

struct GridSearchResult {
  ControlSpec best;
  double best_sari = 0.0;
  std::vector<GridRow> table;  // canonical spec order
};

/// Runs the system once per grid point on the validation sources and keeps
/// the SARI maximizer; ties go to the lexicographically smallest spec. A
/// failing configuration aborts with SystemError naming the spec.
GridSearchResult grid_search_ratios(const SimplificationSystem& system, const ParallelCorpus& validation,
                                    const RatioGrid& grid, const SariOptions& sari_options = {});

void write_grid_csv(std::ostream& out, const GridSearchResult& result);

// --- Ablation ------------------------------------------------------------------

using AttributeSet = std::vector<ControlAttribute>;

/// Greedy forward selection plan. Round 1 holds all singletons; each later
/// round extends the previous winner by every remaining attribute.
class AblationSchedule {
 public:
  explicit AblationSchedule(std::vector<ControlAttribute> pool);

  bool finished() const noexcept { return remaining_.empty(); }
  /// Candidate sets of the current round (canonical order inside each set).
  std::vector<AttributeSet> round() const;
  /// Records the winner of the current round, which must be one of round().
  void advance(const AttributeSet& winner);

 private:
  AttributeSet selected_;
  std::vector<ControlAttribute> remaining_;
};

struct AblationRound {
  std::vector<AttributeSet> candidates;
  std::vector<double> scores;
  std::size_t winner = 0;
};

/// Executes the whole schedule with a scoring callback (higher is better;
/// ties keep the earlier candidate).
std::vector<AblationRound> run_ablation(std::vector<ControlAttribute> pool,
                                        const std::function<double(const AttributeSet&)>& score);

/// n + (n - 1) + ... + 1
std::size_t ablation_candidate_count(std::size_t pool_size);

// --- Cross-influence analysis ------------------------------------------------

struct InfluenceOptions {
  std::vector<Bucket> buckets;  // empty means 0.25, 0.50, 0.75, 1.00
  bool constrain_nbchars = false;
  const FrequencyTable* table = nullptr;  // WordRank column is skipped without it
  double bin_width = 0.05;
};

struct AttributeDistribution {
  std::string series;  // bucket label such as "0.25", or "ground_truth"
  ControlAttribute measured;
  std::vector<double> values;
  std::size_t skipped = 0;  // pairs where the ratio was undefined
  Histogram histogram;
};

struct InfluenceReport {
  ControlAttribute controlled = ControlAttribute::kNbChars;
  bool constrained = false;
  bool has_ground_truth = false;
  bool wordrank_measured = false;
  DepthSource depth_source = DepthSource::kHeuristic;
  std::vector<AttributeDistribution> distributions;
};

/// For each bucket, prepends <controlled_bucket> (and <NbChars_1.0> when
/// constrained) to every source, runs the system and measures all attribute
/// ratios of (source, prediction). References, when present, add a
/// "ground_truth" series measured on (source, reference) pairs. Depth is
/// always measured with the heuristic estimator.
InfluenceReport cross_influence_analysis(const SimplificationSystem& system, const ParallelCorpus& corpus,
                                         ControlAttribute controlled, const InfluenceOptions& options = {});

/// Rows: series,attribute,bin_low,bin_high,count,density
void write_influence_histograms_csv(std::ostream& out, const InfluenceReport& report);
/// Rows: series,attribute,n,skipped,mean,median
void write_influence_summary_csv(std::ostream& out, const InfluenceReport& report);

std::vector<Bucket> parse_bucket_list(std::string_view text);

}  // namespace ctrlsimp
