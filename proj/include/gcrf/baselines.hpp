#ifndef GCRF_BASELINES_HPP
#define GCRF_BASELINES_HPP

#include <cstdint>

#include "gcrf/crf.hpp"
#include "gcrf/qp_solver.hpp"

namespace gcrf {

/// Largest label-space size bruteForceMap will enumerate.
inline constexpr std::uint64_t brute_force_limit = 10'000'000;

struct ExactMap {
  Labeling labeling;
  double value;
};

/// Exhaustive maximisation of objective_of_labeling in lexicographic order;
/// the first maximiser wins. Throws contract_error when K^N exceeds
/// brute_force_limit.
ExactMap brute_force_map(const CrfGraph& graph, const Potentials& potentials);

struct LbpConfig {
  int max_iterations = 200;
  double damping = 0.5;
  double convergence_tol = 1e-6;
  double epsilon_shift = 1e-9;
};

struct LbpResult {
  Labeling labeling;
  SolveReport report;
};

/// Synchronous damped max-product belief propagation in the log domain. The
/// scores are log-potentials, so messages are max-sum updates over
/// phi_i + psi_ij(a,b) + psi_ij(b,a); messages are normalised to a zero maximum.
/// Exact on trees. On non-convergence the last beliefs are decoded and
/// `converged` is false.
LbpResult lbp_map(const CrfGraph& graph, const Potentials& potentials, const LbpConfig& config = {});

}

#endif
