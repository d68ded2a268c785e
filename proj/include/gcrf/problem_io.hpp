#ifndef GCRF_PROBLEM_IO_HPP
#define GCRF_PROBLEM_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gcrf/crf.hpp"
#include "gcrf/potentials.hpp"
#include "gcrf/reduction.hpp"

namespace gcrf {

inline constexpr int problem_schema_version = 1;

/// Schema violation in a problem file; the message names the offending field
/// (e.g. "edges[3].psi") or the parse position.
class schema_error : public contract_error {
public:
  using contract_error::contract_error;
};

/// Self-contained problem document:
///
///   { "version": 1, "num_labels": K, "num_nodes": N,
///     "unary": [[...K numbers], ...N rows],
///     "edges": [{"i": 0, "j": 1, "psi": [[...]]} | {"i": 0, "j": 1, "dis": 0.3}, ...],
///     "constraints": [[node, ...], ...],                      (optional)
///     "features": [{"centroid": [x, y], "mean_color": [r, g, b],
///                   "histogram": [...]}, ...] }                (optional)
///
/// An edge given by "dis" gets psi = pairwise_potential(dis, K).
struct ProblemFile {
  struct EdgeEntry {
    Edge edge;
    Matrix psi;
    std::optional<double> dis;

    friend bool operator==(const EdgeEntry&, const EdgeEntry&) = default;
  };

  int num_labels = 0;
  int num_nodes = 0;
  Matrix unary;
  std::vector<EdgeEntry> edges;
  ConstraintSets constraints;
  std::vector<NodeFeatures> features;

  CrfGraph graph() const;
  Potentials potentials() const;

  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile read_problem(std::istream& in);
std::string serialize_problem(const ProblemFile& problem);

/// Builds a problem document from in-memory model parts. When `dissimilarity`
/// is given, edges are written in "dis" form.
ProblemFile make_problem(const CrfGraph& graph, const Potentials& potentials, const ConstraintSets& constraints,
                         const std::vector<NodeFeatures>& features = {},
                         const std::vector<double>& dissimilarity = {});

/// One label per line.
Labeling read_labeling(std::istream& in);
void write_labeling(std::ostream& out, const Labeling& labeling);

}

#endif
