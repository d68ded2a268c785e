#ifndef GCRF_REDUCTION_HPP
#define GCRF_REDUCTION_HPP

#include <cstddef>
#include <vector>

#include "gcrf/crf.hpp"

namespace gcrf {

/// Disjoint groups of nodes that must share a single label.
struct ConstraintSets {
  std::vector<std::vector<int>> sets;

  bool empty() const { return sets.empty(); }

  /// Rejects sets with fewer than two nodes, out-of-range indices, repeated
  /// nodes and overlap between sets.
  void validate(int num_nodes) const;

  /// True when `labeling` assigns one label per set.
  bool satisfied_by(const Labeling& labeling) const;

  friend bool operator==(const ConstraintSets&, const ConstraintSets&) = default;
};

/// Coordinate-format sparse matrix; entries are unique per (row, col).
struct SparseMatrix {
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Entry> entries;

  Matrix to_dense() const;
};

/// Sparse product a * b.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

/// Linear equality system E A = d over the stacked indicator vector
/// A[node * K + label].
struct ConstraintSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
};

/// One row per consecutive pair of nodes within a set and per label:
/// mu_a(p) - mu_b(p) = 0. Rows: sum_k (|C_k| - 1) * K.
ConstraintSystem build_constraint_matrix(const CrfGraph& graph, const ConstraintSets& constraints);

/// Surjection node -> supernode realising the null-space operator Z of the
/// constraint matrix. Supernodes are numbered in order of their lowest member.
struct ExpansionMap {
  std::vector<int> node_to_super;
  int num_super = 0;

  int num_nodes() const { return static_cast<int>(node_to_super.size()); }

  /// Z as an explicit (N*K) x (M*K) 0/1 matrix.
  SparseMatrix operator_matrix(int num_labels) const;
};

ExpansionMap build_null_space_operator(const CrfGraph& graph, const ConstraintSets& constraints);

/// The problem restricted to the null space: one supernode per constraint set
/// plus one per unconstrained node. For every integral supernode labeling,
/// objective(super_graph, potentials, y) + constant equals the original
/// objective of the expanded labeling.
struct ReducedProblem {
  CrfGraph super_graph;
  Potentials potentials;
  ExpansionMap expansion;
  double constant = 0.0;
};

/// Sums unaries over each supernode's members and pairwise matrices over the
/// original edges joining two supernodes. An edge whose endpoints merge into one
/// supernode is worth 2 psi(p,p) when both take label p; the label-dependent
/// part 2 (psi(p,p) - min_r psi(r,r)) is added to the supernode's unary and the
/// rest goes into `constant`.
ReducedProblem reduce_problem(const CrfGraph& graph, const Potentials& potentials,
                              const ConstraintSets& constraints);

/// A = Z R: copy each supernode's row onto its member nodes.
Marginals expand_solution(const ReducedProblem& reduced, const Marginals& reduced_marginals);

Labeling expand_labeling(const ExpansionMap& expansion, const Labeling& reduced_labeling);

}

#endif
