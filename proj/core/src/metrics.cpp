#include "ctrlsimp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "ctrlsimp/control.hpp"
#include "ctrlsimp/error.hpp"

namespace ctrlsimp {

namespace {

using NgramCounts = std::unordered_map<std::string, int>;

NgramCounts count_ngrams(const TokenList& tokens, int n, bool lowercase) {
  NgramCounts counts;
  const auto len = static_cast<int>(tokens.size());
  for (int i = 0; i + n <= len; ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k) key.push_back('\x1f');
      key += lowercase ? to_lower(tokens[i + k]) : tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

int count_of(const NgramCounts& counts, const std::string& key) {
  const auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

PrfScore prf(double overlap, double sys, double ref, ZeroDivision zd) {
  if (sys == 0.0 && ref == 0.0) {
    return zd == ZeroDivision::kPerfect ? PrfScore{1.0, 1.0, 1.0} : PrfScore{};
  }
  PrfScore s;
  s.precision = sys > 0.0 ? overlap / sys : 0.0;
  s.recall = ref > 0.0 ? overlap / ref : 0.0;
  const double denom = s.precision + s.recall;
  s.f1 = denom > 0.0 ? 2.0 * s.precision * s.recall / denom : 0.0;
  return s;
}

}  // namespace

std::string_view operation_name(SariOperation op) {
  switch (op) {
    case SariOperation::kAdd:
      return "add";
    case SariOperation::kKeep:
      return "keep";
    case SariOperation::kDel:
      return "del";
  }
  return "?";
}

ZeroDivision zero_division_from_name(std::string_view name) {
  if (name == "perfect") return ZeroDivision::kPerfect;
  if (name == "zero") return ZeroDivision::kZero;
  throw ConfigError("unknown zero-division convention '" + std::string(name) + "'");
}

std::string_view zero_division_name(ZeroDivision zd) { return zd == ZeroDivision::kPerfect ? "perfect" : "zero"; }

SentenceSari sari_sentence(const Sentence& source, const Sentence& prediction, std::span<const Sentence> references,
                           const SariOptions& options) {
  if (references.empty()) throw InputError("SARI needs at least one reference");
  const double num_refs = static_cast<double>(references.size());
  SentenceSari result;

  for (int n = 1; n <= kSariMaxOrder; ++n) {
    const auto in = count_ngrams(source.tokens(), n, true);
    const auto out = count_ngrams(prediction.tokens(), n, true);
    NgramCounts ref_sum;
    for (const auto& r : references) {
      for (const auto& [g, c] : count_ngrams(r.tokens(), n, true)) ref_sum[g] += c;
    }

    // keep / del over input n-grams; fractional reference count c_R = sum / r.
    double keep_sys = 0, keep_ref = 0, keep_overlap = 0;
    double del_sys = 0, del_ref = 0, del_overlap = 0;
    for (const auto& [g, c_in] : in) {
      const double c_i = c_in;
      const double c_o = count_of(out, g);
      const double c_r = count_of(ref_sum, g) / num_refs;

      const double ks = std::min(c_i, c_o);
      const double kr = std::min(c_i, c_r);
      keep_sys += ks;
      keep_ref += kr;
      keep_overlap += std::min(ks, kr);

      const double ds = std::max(c_i - c_o, 0.0);
      const double dr = std::max(c_i - c_r, 0.0);
      del_sys += ds;
      del_ref += dr;
      del_overlap += std::min(ds, dr);
    }

    // add: presence of n-grams absent from the input.
    double add_sys = 0, add_ref = 0, add_overlap = 0;
    for (const auto& [g, c_o] : out) {
      if (in.contains(g)) continue;
      add_sys += 1;
      if (ref_sum.contains(g)) add_overlap += 1;
    }
    for (const auto& [g, c_r] : ref_sum) {
      if (!in.contains(g)) add_ref += 1;
    }

    auto& po = result.per_order;
    po[static_cast<int>(SariOperation::kAdd)][n - 1] = prf(add_overlap, add_sys, add_ref, options.zero_division);
    po[static_cast<int>(SariOperation::kKeep)][n - 1] = prf(keep_overlap, keep_sys, keep_ref, options.zero_division);
    po[static_cast<int>(SariOperation::kDel)][n - 1] = prf(del_overlap, del_sys, del_ref, options.zero_division);
  }

  double total = 0.0;
  for (auto op : kSariOperations) {
    const auto idx = static_cast<int>(op);
    double f = 0.0;
    for (const auto& s : result.per_order[idx]) f += s.f1;
    result.per_operation[idx] = f / kSariMaxOrder;
    total += result.per_operation[idx];
  }
  result.score = 100.0 * total / 3.0;
  return result;
}

SariReport sari(std::span<const Sentence> sources, std::span<const Sentence> predictions,
                std::span<const ReferenceSet> references, const SariOptions& options) {
  if (sources.empty()) throw InputError("SARI needs at least one sentence");
  if (sources.size() != predictions.size() || sources.size() != references.size()) {
    throw InputError("SARI inputs differ in length: " + std::to_string(sources.size()) + " sources, " +
                     std::to_string(predictions.size()) + " predictions, " + std::to_string(references.size()) +
                     " reference sets");
  }
  SariReport report;
  report.zero_division = options.zero_division;
  report.sentences.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (references[i].empty()) throw InputError("empty reference list for sentence " + std::to_string(i + 1));
    report.sentences.push_back(sari_sentence(sources[i], predictions[i], references[i], options));
  }

  const double count = static_cast<double>(report.sentences.size());
  for (const auto& s : report.sentences) {
    report.sentence_scores.push_back(s.score);
    report.sari += s.score;
    for (int op = 0; op < 3; ++op) {
      report.per_operation[op] += s.per_operation[op];
      for (int n = 0; n < kSariMaxOrder; ++n) {
        report.per_order[op][n].precision += s.per_order[op][n].precision;
        report.per_order[op][n].recall += s.per_order[op][n].recall;
        report.per_order[op][n].f1 += s.per_order[op][n].f1;
      }
    }
  }
  report.sari /= count;
  for (int op = 0; op < 3; ++op) {
    report.per_operation[op] /= count;
    for (auto& p : report.per_order[op]) {
      p.precision /= count;
      p.recall /= count;
      p.f1 /= count;
    }
  }
  return report;
}

FkglReport fkgl(std::span<const std::string> predictions) {
  if (predictions.empty()) throw InputError("FKGL needs at least one prediction");
  FkglReport report;
  for (const auto& text : predictions) {
    for (const auto& segment : split_sentences(text)) {
      ++report.nb_sentences;
      for (const auto& tok : tokenize(segment)) {
        if (!has_letter(tok)) continue;
        ++report.nb_words;
        report.nb_syllables += static_cast<std::size_t>(count_syllables(tok));
      }
    }
  }
  if (report.nb_words == 0) throw DomainError("FKGL undefined: corpus contains no words");
  const double words = static_cast<double>(report.nb_words);
  report.fkgl = 0.39 * (words / static_cast<double>(report.nb_sentences)) +
                11.8 * (static_cast<double>(report.nb_syllables) / words) - 15.59;
  return report;
}

BleuReport bleu(std::span<const Sentence> predictions, std::span<const ReferenceSet> references) {
  if (predictions.empty()) throw InputError("BLEU needs at least one prediction");
  if (predictions.size() != references.size()) throw InputError("BLEU inputs differ in length");

  std::array<double, 4> matched{};
  std::array<double, 4> total{};
  BleuReport report;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& hyp = predictions[i].tokens();
    const auto& refs = references[i];
    if (refs.empty()) throw InputError("empty reference list for sentence " + std::to_string(i + 1));

    const std::size_t hyp_len = hyp.size();
    std::size_t closest = refs.front().tokens().size();
    for (const auto& r : refs) {
      const std::size_t len = r.tokens().size();
      const auto diff = [&](std::size_t l) { return l > hyp_len ? l - hyp_len : hyp_len - l; };
      if (diff(len) < diff(closest) || (diff(len) == diff(closest) && len < closest)) closest = len;
    }
    report.hypothesis_length += hyp_len;
    report.reference_length += closest;

    for (int n = 1; n <= 4; ++n) {
      const auto hyp_counts = count_ngrams(hyp, n, false);
      NgramCounts max_ref;
      for (const auto& r : refs) {
        for (const auto& [g, c] : count_ngrams(r.tokens(), n, false)) max_ref[g] = std::max(max_ref[g], c);
      }
      for (const auto& [g, c] : hyp_counts) {
        total[n - 1] += c;
        matched[n - 1] += std::min(c, count_of(max_ref, g));
      }
    }
  }

  double log_sum = 0.0;
  int orders = 0;
  bool zero = false;
  for (int n = 0; n < 4; ++n) {
    if (total[n] == 0) continue;
    report.precisions[n] = matched[n] / total[n];
    ++orders;
    if (matched[n] == 0) {
      zero = true;
    } else {
      log_sum += std::log(report.precisions[n]);
    }
  }
  if (report.hypothesis_length == 0) {
    report.brevity_penalty = 0.0;
  } else if (report.hypothesis_length < report.reference_length) {
    report.brevity_penalty = std::exp(1.0 - static_cast<double>(report.reference_length) /
                                                static_cast<double>(report.hypothesis_length));
  }
  report.bleu = (zero || orders == 0) ? 0.0 : 100.0 * report.brevity_penalty * std::exp(log_sum / orders);
  return report;
}

double median_of(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

Histogram make_histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0)) throw DomainError("histogram bin width must be positive");
  Histogram h;
  h.total = values.size();
  if (values.empty()) return h;

  std::vector<long long> bins;
  bins.reserve(values.size());
  double sum = 0.0;
  for (double v : values) {
    bins.push_back(static_cast<long long>(std::floor(v / bin_width + 1e-9)));
    sum += v;
  }
  h.mean = sum / static_cast<double>(values.size());
  h.median = median_of(std::vector<double>(values.begin(), values.end()));

  const auto [lo_it, hi_it] = std::minmax_element(bins.begin(), bins.end());
  const long long lo = *lo_it;
  const long long hi = *hi_it;
  std::vector<std::size_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  for (auto b : bins) ++counts[static_cast<std::size_t>(b - lo)];
  for (long long b = lo; b <= hi; ++b) {
    HistogramRow row;
    row.bin_low = static_cast<double>(b) * bin_width;
    row.bin_high = static_cast<double>(b + 1) * bin_width;
    row.count = counts[static_cast<std::size_t>(b - lo)];
    row.density = static_cast<double>(row.count) / (static_cast<double>(h.total) * bin_width);
    h.rows.push_back(row);
  }
  return h;
}

Histogram compression_histogram(std::span<const Sentence> sources, std::span<const Sentence> targets,
                                double bin_width) {
  if (sources.size() != targets.size()) throw InputError("compression histogram: sources and targets differ in length");
  std::vector<double> ratios;
  ratios.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) ratios.push_back(nbchars_ratio(sources[i], targets[i]));
  return make_histogram(ratios, bin_width);
}

}  // namespace ctrlsimp
