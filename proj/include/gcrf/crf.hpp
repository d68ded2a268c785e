#ifndef GCRF_CRF_HPP
#define GCRF_CRF_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "gcrf/matrix.hpp"

namespace gcrf {

/// Undirected edge between two distinct nodes. Orientation is significant only
/// for how the edge's pairwise matrix is indexed: psi(label of i, label of j).
struct Edge {
  int i;
  int j;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Node count, label count and neighbourhood structure of a pairwise CRF.
///
/// Edges are stored once per undirected pair. The constructor rejects
/// self-loops, duplicates (in either orientation), out-of-range indices and
/// fewer than two labels.
class CrfGraph {
public:
  /// One entry of a node's adjacency list.
  struct Incidence {
    std::size_t edge;
    int neighbour;
    bool is_first;  // true when this node is edge.i
  };

  CrfGraph() = default;
  CrfGraph(int num_nodes, int num_labels, std::vector<Edge> edges);

  int num_nodes() const { return num_nodes_; }
  int num_labels() const { return num_labels_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Incidence> incident(int node) const
  {
    return {incidence_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
  }

  friend bool operator==(const CrfGraph& a, const CrfGraph& b)
  {
    return a.num_nodes_ == b.num_nodes_ && a.num_labels_ == b.num_labels_ && a.edges_ == b.edges_;
  }

private:
  int num_nodes_ = 0;
  int num_labels_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidence_;
};

/// Unary scores (nodes x labels) and one labels x labels matrix per edge.
/// All scores are similarities: the MAP labeling maximises their sum.
struct Potentials {
  Matrix unary;
  std::vector<Matrix> pairwise;

  /// Throws contract_error on shape mismatch with `graph` or non-finite entries.
  void validate(const CrfGraph& graph) const;

  friend bool operator==(const Potentials&, const Potentials&) = default;
};

struct Labeling {
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  int operator[](std::size_t i) const { return labels[i]; }

  friend bool operator==(const Labeling&, const Labeling&) = default;
};

/// Relaxed indicator variables: one probability simplex per node.
class Marginals {
public:
  Marginals() = default;
  explicit Marginals(Matrix values) : values_(std::move(values)) {}

  static Marginals uniform(int num_nodes, int num_labels);
  static Marginals one_hot(const Labeling& labeling, int num_labels);

  int num_nodes() const { return static_cast<int>(values_.rows()); }
  int num_labels() const { return static_cast<int>(values_.cols()); }

  const Matrix& values() const { return values_; }
  Matrix& values() { return values_; }

  std::span<const double> row(int node) const { return values_.row(node); }

  /// True when every entry lies in [0, 1] and every row sums to 1 within `tol`.
  bool is_valid(double tol = 1e-9) const;

private:
  Matrix values_;
};

/// Relaxed QP objective. Each undirected edge contributes in both directions:
///   sum_i sum_p phi_i(p) mu_i(p)
///   + sum_(i,j) sum_p,q psi_ij(p,q) [mu_i(p) mu_j(q) + mu_j(p) mu_i(q)].
double objective(const CrfGraph& graph, const Potentials& potentials, const Marginals& marginals);

/// Integral objective; equals objective() on the one-hot marginals of `labeling`.
double objective_of_labeling(const CrfGraph& graph, const Potentials& potentials, const Labeling& labeling);

/// Per-node argmax, lowest label index on ties.
Labeling extract_labeling(const Marginals& marginals);

}

#endif
