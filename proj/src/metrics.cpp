#include "gcrf/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace gcrf {

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

void write_row(std::ostream& out, const std::string& name, const ClassScores& s)
{
  out << std::left << std::setw(10) << name << std::right << std::fixed << std::setprecision(4) << std::setw(11)
      << s.precision << std::setw(11) << s.recall << std::setw(11) << s.accuracy << std::setw(11) << s.f1 << '\n';
}

}

MetricsReport compute_metrics(const Labeling& predicted, const Labeling& truth, int num_labels)
{
  if (predicted.size() != truth.size())
    throw contract_error("compute_metrics: predicted has " + std::to_string(predicted.size()) +
                         " labels, truth has " + std::to_string(truth.size()));
  if (num_labels < 1)
    throw contract_error("compute_metrics: need at least one label");

  MetricsReport r;
  r.confusion.assign(num_labels, std::vector<long>(num_labels, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_labels || predicted[i] < 0 || predicted[i] >= num_labels)
      throw contract_error("compute_metrics: label out of range at position " + std::to_string(i));
    ++r.confusion[truth[i]][predicted[i]];
  }

  const double total = static_cast<double>(truth.size());
  int present = 0;
  r.per_class.resize(num_labels);
  for (int c = 0; c < num_labels; ++c) {
    double tp = static_cast<double>(r.confusion[c][c]);
    double row = 0.0, col = 0.0;
    for (int o = 0; o < num_labels; ++o) {
      row += static_cast<double>(r.confusion[c][o]);
      col += static_cast<double>(r.confusion[o][c]);
    }
    const double fn = row - tp;
    const double fp = col - tp;
    const double tn = total - tp - fn - fp;

    ClassScores& s = r.per_class[c];
    s.present = row > 0.0;
    s.precision = ratio(tp, tp + fp);
    s.recall = ratio(tp, tp + fn);
    s.accuracy = ratio(tp + tn, total);
    s.f1 = ratio(2.0 * s.precision * s.recall, s.precision + s.recall);
    if (s.present) {
      ++present;
      r.macro.precision += s.precision;
      r.macro.recall += s.recall;
      r.macro.accuracy += s.accuracy;
      r.macro.f1 += s.f1;
    }
  }
  if (present > 0) {
    r.macro.precision /= present;
    r.macro.recall /= present;
    r.macro.accuracy /= present;
    r.macro.f1 /= present;
    r.macro.present = true;
  }
  return r;
}

MetricsSummary summarize(const std::vector<MetricsReport>& reports)
{
  MetricsSummary s;
  s.count = reports.size();
  if (reports.empty())
    return s;
  const auto fields = [](ClassScores& c) {
    return std::array<double*, 4>{&c.precision, &c.recall, &c.accuracy, &c.f1};
  };
  for (const auto& r : reports) {
    ClassScores m = r.macro;
    auto src = fields(m);
    auto dst = fields(s.mean);
    for (int f = 0; f < 4; ++f)
      *dst[f] += *src[f] / static_cast<double>(reports.size());
  }
  if (reports.size() > 1) {
    for (const auto& r : reports) {
      ClassScores m = r.macro;
      auto src = fields(m);
      auto mean = fields(s.mean);
      auto dst = fields(s.stddev);
      for (int f = 0; f < 4; ++f)
        *dst[f] += (*src[f] - *mean[f]) * (*src[f] - *mean[f]);
    }
    for (double* v : fields(s.stddev))
      *v = std::sqrt(*v / static_cast<double>(reports.size() - 1));
  }
  s.mean.present = true;
  return s;
}

void write_summary_table(std::ostream& out, const std::vector<std::pair<std::string, MetricsSummary>>& rows)
{
  std::size_t width = 6;
  for (const auto& [name, summary] : rows)
    width = std::max(width, name.size());
  const auto flags = out.flags();
  out << std::left << std::setw(static_cast<int>(width) + 2) << "Method" << std::setw(20) << "Precision"
      << std::setw(20) << "Recall" << std::setw(20) << "Accuracy" << "F1\n";
  for (const auto& [name, s] : rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << name;
    const double means[] = {s.mean.precision, s.mean.recall, s.mean.accuracy, s.mean.f1};
    const double stds[] = {s.stddev.precision, s.stddev.recall, s.stddev.accuracy, s.stddev.f1};
    for (int f = 0; f < 4; ++f) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(4) << means[f] << " ± " << std::setprecision(3) << stds[f];
      if (f < 3)
        out << std::setw(21) << cell.str();
      else
        out << cell.str();
    }
    out << '\n';
  }
  out.flags(flags);
}

void write_metrics_table(std::ostream& out, const MetricsReport& report)
{
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::left << std::setw(10) << "Class" << std::right << std::setw(11) << "Precision" << std::setw(11)
      << "Recall" << std::setw(11) << "Accuracy" << std::setw(11) << "F1" << '\n';
  for (std::size_t c = 0; c < report.per_class.size(); ++c)
    write_row(out, std::to_string(c) + (report.per_class[c].present ? "" : "*"), report.per_class[c]);
  write_row(out, "macro", report.macro);
  out.flags(flags);
  out.precision(precision);
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report)
{
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "class,precision,recall,accuracy,f1,present\n" << std::setprecision(10);
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& s = report.per_class[c];
    out << c << ',' << s.precision << ',' << s.recall << ',' << s.accuracy << ',' << s.f1 << ','
        << (s.present ? 1 : 0) << '\n';
  }
  const auto& m = report.macro;
  out << "macro," << m.precision << ',' << m.recall << ',' << m.accuracy << ',' << m.f1 << ",1\n";
  out.flags(flags);
  out.precision(precision);
}

}
