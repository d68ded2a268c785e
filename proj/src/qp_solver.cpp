#include "gcrf/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gcrf {

namespace {

// Edge matrices stored as psi + psi^T, flattened; the gradient only ever needs
// the symmetrised form.
struct SymmetricPairwise {
  int k;
  std::vector<double> data;

  SymmetricPairwise(const CrfGraph& graph, const Potentials& potentials)
  : k(graph.num_labels())
  , data(graph.num_edges() * static_cast<std::size_t>(k * k))
  {
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
      const Matrix& psi = potentials.pairwise[e];
      double* dst = data.data() + e * k * k;
      for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q)
          dst[p * k + q] = psi(p, q) + psi(q, p);
    }
  }
};

void gradient_into(const CrfGraph& graph, const Matrix& unary, const SymmetricPairwise& sym,
                   const Matrix& mu, Matrix& q)
{
  const int k = sym.k;
  std::copy(unary.data().begin(), unary.data().end(), q.data().begin());
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    const double* s = sym.data.data() + e * k * k;
    const auto mi = mu.row(i);
    const auto mj = mu.row(j);
    auto qi = q.row(i);
    auto qj = q.row(j);
    for (int p = 0; p < k; ++p) {
      double acc = 0.0;
      for (int r = 0; r < k; ++r) {
        acc += s[p * k + r] * mj[r];
        qj[r] += s[p * k + r] * mi[p];
      }
      qi[p] += acc;
    }
  }
}

// B(mu) = 1/2 sum mu (phi + q) for q the gradient at mu.
double objective_from_gradient(const Matrix& unary, const Matrix& mu, const Matrix& q)
{
  double total = 0.0;
  const auto u = unary.data();
  const auto m = mu.data();
  const auto g = q.data();
  for (std::size_t n = 0; n < m.size(); ++n)
    total += m[n] * (u[n] + g[n]);
  return 0.5 * total;
}

// Returns the largest absolute change. Rows with a zero normaliser are kept.
double update_into(const Matrix& mu, const Matrix& q, Matrix& out)
{
  const std::size_t k = mu.cols();
  double delta = 0.0;
  for (std::size_t i = 0; i < mu.rows(); ++i) {
    const auto m = mu.row(i);
    const auto g = q.row(i);
    auto o = out.row(i);
    double norm = 0.0;
    for (std::size_t p = 0; p < k; ++p)
      norm += m[p] * g[p];
    if (norm <= 0.0) {
      std::copy(m.begin(), m.end(), o.begin());
      continue;
    }
    for (std::size_t p = 0; p < k; ++p) {
      o[p] = m[p] * g[p] / norm;
      delta = std::max(delta, std::abs(o[p] - m[p]));
    }
  }
  return delta;
}

bool all_finite(std::span<const double> values)
{
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}

void SolverConfig::validate() const
{
  if (max_iterations < 1)
    throw contract_error("SolverConfig: max_iterations must be at least 1");
  if (!(convergence_tol > 0.0))
    throw contract_error("SolverConfig: convergence_tol must be positive");
  if (!(epsilon_shift >= 0.0))
    throw contract_error("SolverConfig: epsilon_shift must be nonnegative");
}

std::pair<Potentials, ShiftRecord> shift_nonnegative(const Potentials& potentials, double epsilon)
{
  Potentials out = potentials;
  ShiftRecord record;

  const auto u = potentials.unary.data();
  if (!u.empty()) {
    const double min_unary = *std::min_element(u.begin(), u.end());
    if (min_unary < epsilon) {
      record.unary_offset = epsilon - min_unary;
      for (double& v : out.unary.data())
        v += record.unary_offset;
    }
  }

  double min_pair = std::numeric_limits<double>::infinity();
  for (const Matrix& psi : potentials.pairwise)
    for (double v : psi.data())
      min_pair = std::min(min_pair, v);
  if (min_pair < epsilon) {
    record.pairwise_offset = epsilon - min_pair;
    for (Matrix& psi : out.pairwise)
      for (double& v : psi.data())
        v += record.pairwise_offset;
  }
  return {std::move(out), record};
}

Matrix compute_gradient(const CrfGraph& graph, const Potentials& potentials, const Marginals& marginals)
{
  potentials.validate(graph);
  if (marginals.num_nodes() != graph.num_nodes() || marginals.num_labels() != graph.num_labels())
    throw contract_error("compute_gradient: marginals shape does not match graph");
  Matrix q(graph.num_nodes(), graph.num_labels());
  gradient_into(graph, potentials.unary, SymmetricPairwise(graph, potentials), marginals.values(), q);
  return q;
}

Marginals multiplicative_update(const Marginals& marginals, const Matrix& gradient)
{
  if (gradient.rows() != marginals.values().rows() || gradient.cols() != marginals.values().cols())
    throw contract_error("multiplicative_update: gradient shape does not match marginals");
  for (std::size_t i = 0; i < gradient.rows(); ++i)
    for (std::size_t p = 0; p < gradient.cols(); ++p)
      if (!(gradient(i, p) >= 0.0))
        throw contract_error("multiplicative_update: negative gradient entry at node " + std::to_string(i) +
                             ", label " + std::to_string(p) + " (potentials need a nonnegativity shift)");
  Matrix out(gradient.rows(), gradient.cols());
  update_into(marginals.values(), gradient, out);
  return Marginals(std::move(out));
}

Marginals initial_marginals(const Potentials& potentials, InitStrategy init)
{
  const std::size_t n = potentials.unary.rows();
  const std::size_t k = potentials.unary.cols();
  Matrix mu(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = mu.row(i);
    if (init == InitStrategy::uniform) {
      // Exact uniform is a fixed point on symmetric instances; nudge it.
      for (std::size_t p = 0; p < k; ++p)
        row[p] = 1.0 / static_cast<double>(k) + 1e-6 * static_cast<double>((i * k + p) % 7) / 7.0;
    } else {
      const auto phi = potentials.unary.row(i);
      const double top = *std::max_element(phi.begin(), phi.end());
      for (std::size_t p = 0; p < k; ++p)
        row[p] = std::exp(phi[p] - top);
    }
    double sum = 0.0;
    for (double v : row)
      sum += v;
    for (double& v : row)
      v /= sum;
  }
  return Marginals(std::move(mu));
}

SolveResult solve(const CrfGraph& graph, const Potentials& potentials, const SolverConfig& config)
{
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  potentials.validate(graph);

  const auto [shifted, shift] = shift_nonnegative(potentials, config.epsilon_shift);
  const SymmetricPairwise sym(graph, shifted);

  Marginals current = initial_marginals(shifted, config.init);
  Matrix next(graph.num_nodes(), graph.num_labels());
  Matrix q(graph.num_nodes(), graph.num_labels());

  SolveReport report;
  report.objective_trace.reserve(std::min(config.max_iterations, 4096) + 1);
  for (int it = 0; it < config.max_iterations; ++it) {
    gradient_into(graph, shifted.unary, sym, current.values(), q);
    if (!all_finite(q.data()))
      throw solver_error("solve: non-finite gradient at iteration " + std::to_string(it));
    report.objective_trace.push_back(objective_from_gradient(shifted.unary, current.values(), q));

    const double delta = update_into(current.values(), q, next);
    if (!all_finite(next.data()))
      throw solver_error("solve: non-finite marginals at iteration " + std::to_string(it + 1));
    std::swap(current.values(), next);
    report.iterations = it + 1;
    if (config.observer)
      config.observer(report.iterations, current);
    if (delta < config.convergence_tol) {
      report.converged = true;
      break;
    }
  }

  gradient_into(graph, shifted.unary, sym, current.values(), q);
  const double final_shifted = objective_from_gradient(shifted.unary, current.values(), q);
  report.objective_trace.push_back(final_shifted);
  report.final_objective = shift.unshift(final_shifted, graph.num_nodes(), graph.num_edges());
  report.wall_time = std::chrono::steady_clock::now() - start;
  return {std::move(current), std::move(report)};
}

ConstrainedSolveResult solve_constrained(const CrfGraph& graph, const Potentials& potentials,
                                         const ConstraintSets& constraints, const SolverConfig& config)
{
  const auto start = std::chrono::steady_clock::now();
  const ReducedProblem reduced = reduce_problem(graph, potentials, constraints);
  SolveResult inner = solve(reduced.super_graph, reduced.potentials, config);

  ConstrainedSolveResult out;
  out.num_supernodes = reduced.expansion.num_super;
  out.labeling = expand_labeling(reduced.expansion, extract_labeling(inner.marginals));
  out.marginals = expand_solution(reduced, inner.marginals);
  out.report = std::move(inner.report);
  for (double& v : out.report.objective_trace)
    v += reduced.constant;
  out.report.final_objective = objective(graph, potentials, out.marginals);
  out.report.wall_time = std::chrono::steady_clock::now() - start;
  return out;
}

}
