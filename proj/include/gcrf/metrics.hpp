#ifndef GCRF_METRICS_HPP
#define GCRF_METRICS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "gcrf/crf.hpp"

namespace gcrf {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
  bool present = false;  // class occurs in the ground truth
};

struct MetricsReport {
  /// confusion(t, p): nodes with true label t predicted as p.
  std::vector<std::vector<long>> confusion;
  std::vector<ClassScores> per_class;
  /// Unweighted mean over classes present in the ground truth.
  ClassScores macro;
};

/// One-vs-rest scores per class. Ratios with a zero denominator are 0.
MetricsReport compute_metrics(const Labeling& predicted, const Labeling& truth, int num_labels);

/// Mean and sample standard deviation of macro scores over several scenes.
struct MetricsSummary {
  ClassScores mean;
  ClassScores stddev;
  std::size_t count = 0;
};

MetricsSummary summarize(const std::vector<MetricsReport>& reports);

/// "Method  Precision  Recall  Accuracy  F1" rows, "0.8549 ± 0.079" cells.
void write_summary_table(std::ostream& out, const std::vector<std::pair<std::string, MetricsSummary>>& rows);

/// Per-class rows followed by a macro row.
void write_metrics_table(std::ostream& out, const MetricsReport& report);
void write_metrics_csv(std::ostream& out, const MetricsReport& report);

}

#endif
