#include <cstdio>

#include "ctrlsimp/metrics.hpp"

namespace ctrlsimp {

std::string format_number(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  std::string out(buf);
  // Avoid "-0.000000" for tiny negative values.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

void write_sari_report(std::ostream& out, const SariReport& report) {
  out << "sari=" << format_number(report.sari) << '\n';
  for (auto op : kSariOperations) {
    out << "f_" << operation_name(op) << '=' << format_number(report.per_operation[static_cast<int>(op)]) << '\n';
  }
  out << "sentences=" << report.sentences.size() << '\n';
  out << "aggregation=macro\n";
  out << "zero_division=" << zero_division_name(report.zero_division) << '\n';
}

void write_sari_per_order_csv(std::ostream& out, const SariReport& report) {
  out << "operation,n,p,r,f\n";
  for (auto op : kSariOperations) {
    for (int n = 1; n <= kSariMaxOrder; ++n) {
      const auto& s = report.per_order[static_cast<int>(op)][n - 1];
      out << operation_name(op) << ',' << n << ',' << format_number(s.precision) << ',' << format_number(s.recall)
          << ',' << format_number(s.f1) << '\n';
    }
  }
}

void write_fkgl_report(std::ostream& out, const FkglReport& report) {
  out << "fkgl=" << format_number(report.fkgl) << '\n'
      << "nb_words=" << report.nb_words << '\n'
      << "nb_sentences=" << report.nb_sentences << '\n'
      << "nb_syllables=" << report.nb_syllables << '\n';
}

void write_bleu_report(std::ostream& out, const BleuReport& report) {
  out << "bleu=" << format_number(report.bleu) << '\n';
  for (int n = 0; n < 4; ++n) out << "precision_" << (n + 1) << '=' << format_number(report.precisions[n]) << '\n';
  out << "brevity_penalty=" << format_number(report.brevity_penalty) << '\n'
      << "hyp_len=" << report.hypothesis_length << '\n'
      << "ref_len=" << report.reference_length << '\n';
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram, bool header) {
  if (header) out << "bin_low,bin_high,count,density\n";
  for (const auto& row : histogram.rows) {
    out << format_number(row.bin_low, 4) << ',' << format_number(row.bin_high, 4) << ',' << row.count << ','
        << format_number(row.density) << '\n';
  }
}

}  // namespace ctrlsimp
