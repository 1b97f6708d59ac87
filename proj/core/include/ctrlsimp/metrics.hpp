#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctrlsimp/text.hpp"

namespace ctrlsimp {

enum class SariOperation { kAdd = 0, kKeep = 1, kDel = 2 };
inline constexpr std::array<SariOperation, 3> kSariOperations = {SariOperation::kAdd, SariOperation::kKeep,
                                                                 SariOperation::kDel};
inline constexpr int kSariMaxOrder = 4;

std::string_view operation_name(SariOperation op);

/// What an operation scores when both its system and reference multisets are
/// empty at some n-gram order. kPerfect: p = r = f = 1. kZero: all 0.
enum class ZeroDivision { kPerfect, kZero };
ZeroDivision zero_division_from_name(std::string_view name);
std::string_view zero_division_name(ZeroDivision zd);

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

using PerOrder = std::array<std::array<PrfScore, kSariMaxOrder>, 3>;  // [operation][n - 1]

struct SentenceSari {
  PerOrder per_order{};
  std::array<double, 3> per_operation{};  // F_ope in [0, 1]
  double score = 0.0;                     // in [0, 100]
};

/// Corpus SARI. The corpus score is the mean of sentence scores, and the
/// per-operation and per-order entries are means of the sentence values.
struct SariReport {
  double sari = 0.0;
  std::array<double, 3> per_operation{};
  PerOrder per_order{};
  std::vector<double> sentence_scores;
  std::vector<SentenceSari> sentences;
  ZeroDivision zero_division = ZeroDivision::kPerfect;
};

struct SariOptions {
  ZeroDivision zero_division = ZeroDivision::kPerfect;
};

using ReferenceSet = std::vector<Sentence>;

/// SARI of one prediction. Tokens are lowercased before n-gram extraction.
/// keep/del compare multiset counts against the fractional reference count
/// (sum over references / number of references); add uses presence only.
/// Deletion is scored with full F1.
SentenceSari sari_sentence(const Sentence& source, const Sentence& prediction, std::span<const Sentence> references,
                           const SariOptions& options = {});

/// Throws InputError on length mismatch, empty input or an empty reference list.
SariReport sari(std::span<const Sentence> sources, std::span<const Sentence> predictions,
                std::span<const ReferenceSet> references, const SariOptions& options = {});

struct FkglReport {
  double fkgl = 0.0;
  std::size_t nb_words = 0;
  std::size_t nb_sentences = 0;
  std::size_t nb_syllables = 0;
};

/// Flesch-Kincaid grade level over corpus totals. Each prediction is split into
/// sentences; words are tokens containing a letter. Throws DomainError when the
/// corpus has no words.
FkglReport fkgl(std::span<const std::string> predictions);

struct BleuReport {
  double bleu = 0.0;  // in [0, 100]
  std::array<double, 4> precisions{};
  double brevity_penalty = 1.0;
  std::size_t hypothesis_length = 0;
  std::size_t reference_length = 0;
};

/// Corpus BLEU-4 with clipped counts, closest reference length (ties go to the
/// shorter reference) and no smoothing. Orders with no hypothesis n-grams in
/// the whole corpus are left out of the geometric mean.
BleuReport bleu(std::span<const Sentence> predictions, std::span<const ReferenceSet> references);

struct HistogramRow {
  double bin_low = 0.0;
  double bin_high = 0.0;
  std::size_t count = 0;
  double density = 0.0;  // count / (total * width)
};

struct Histogram {
  std::vector<HistogramRow> rows;  // contiguous from lowest to highest occupied bin
  double mean = 0.0;
  double median = 0.0;
  std::size_t total = 0;
};

Histogram make_histogram(std::span<const double> values, double bin_width);

/// Histogram of NbChars ratios target/source. Throws InputError on length
/// mismatch, DomainError on a non-positive bin width.
Histogram compression_histogram(std::span<const Sentence> sources, std::span<const Sentence> targets,
                                double bin_width);

double median_of(std::vector<double> values);

// Export.

void write_sari_report(std::ostream& out, const SariReport& report);
void write_sari_per_order_csv(std::ostream& out, const SariReport& report);
void write_fkgl_report(std::ostream& out, const FkglReport& report);
void write_bleu_report(std::ostream& out, const BleuReport& report);
void write_histogram_csv(std::ostream& out, const Histogram& histogram, bool header = true);

/// Fixed-precision rendering used by every report, so outputs are byte-stable.
std::string format_number(double value, int precision = 6);

}  // namespace ctrlsimp
