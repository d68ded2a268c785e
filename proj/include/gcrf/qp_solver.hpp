#ifndef GCRF_QP_SOLVER_HPP
#define GCRF_QP_SOLVER_HPP

#include <chrono>
#include <functional>
#include <utility>
#include <vector>

#include "gcrf/crf.hpp"
#include "gcrf/reduction.hpp"

namespace gcrf {

enum class InitStrategy { uniform, unary_softmax };

struct SolverConfig {
  int max_iterations = 1000;
  /// Stop once the largest absolute marginal change of an iteration falls below this.
  double convergence_tol = 1e-6;
  /// Minimum potential entry after the nonnegativity shift.
  double epsilon_shift = 1e-9;
  InitStrategy init = InitStrategy::uniform;
  /// Called after every update with the iteration index (1-based) and the new iterate.
  std::function<void(int, const Marginals&)> observer;

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  /// Objective of the final iterate in the caller's (unshifted) units.
  double final_objective = 0.0;
  /// Shifted objective of every iterate, starting with the initial point.
  std::vector<double> objective_trace;
  bool converged = false;
  std::chrono::duration<double> wall_time{0};
};

/// Constants added to every unary entry and every pairwise entry.
struct ShiftRecord {
  double unary_offset = 0.0;
  double pairwise_offset = 0.0;

  /// Objective in original units given the shifted objective of simplex-valued
  /// marginals on a graph with the given node and edge counts.
  double unshift(double shifted_objective, int num_nodes, std::size_t num_edges) const
  {
    return shifted_objective - (unary_offset * num_nodes + pairwise_offset * 2.0 * static_cast<double>(num_edges));
  }
};

/// Raises all unary entries by one constant and all pairwise entries by another
/// so that the minimum entry of each is at least `epsilon`. Inputs already above
/// `epsilon` are returned unchanged with zero offsets.
std::pair<Potentials, ShiftRecord> shift_nonnegative(const Potentials& potentials, double epsilon = 1e-9);

/// q_i(p) = phi_i(p) + sum_j sum_q (psi_ij(p,q) + psi_ij(q,p)) mu_j(q),
/// the exact partial derivative of objective() (2 psi mu for symmetric psi).
Matrix compute_gradient(const CrfGraph& graph, const Potentials& potentials, const Marginals& marginals);

/// Normalised multiplicative update mu_i(p) <- mu_i(p) q_i(p) / sum_r mu_i(r) q_i(r).
/// Rows whose normaliser is zero are left unchanged. Negative q is a contract violation.
Marginals multiplicative_update(const Marginals& marginals, const Matrix& gradient);

/// Starting point of the ascent for the given strategy.
Marginals initial_marginals(const Potentials& potentials, InitStrategy init);

struct SolveResult {
  Marginals marginals;
  SolveReport report;
};

/// Gradient ascent on the relaxed QP with the multiplicative update.
SolveResult solve(const CrfGraph& graph, const Potentials& potentials, const SolverConfig& config = {});

struct ConstrainedSolveResult {
  Marginals marginals;
  Labeling labeling;
  SolveReport report;
  int num_supernodes = 0;
};

/// Reduces the constraint sets into supernodes, solves the reduced problem,
/// and expands the result. The labeling satisfies every set by construction.
/// `report.final_objective` is the original objective of the expanded marginals.
ConstrainedSolveResult solve_constrained(const CrfGraph& graph, const Potentials& potentials,
                                         const ConstraintSets& constraints, const SolverConfig& config = {});

}

#endif
