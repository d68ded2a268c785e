#include "gcrf/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace gcrf {

namespace {

double labeling_value(const CrfGraph& graph, const Potentials& potentials, const std::vector<int>& x)
{
  double total = 0.0;
  for (int i = 0; i < graph.num_nodes(); ++i)
    total += potentials.unary(i, x[i]);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    total += potentials.pairwise[e](x[i], x[j]) + potentials.pairwise[e](x[j], x[i]);
  }
  return total;
}

}

ExactMap brute_force_map(const CrfGraph& graph, const Potentials& potentials)
{
  potentials.validate(graph);
  const int n = graph.num_nodes();
  const int k = graph.num_labels();

  std::uint64_t space = 1;
  for (int i = 0; i < n; ++i) {
    space *= static_cast<std::uint64_t>(k);
    if (space > brute_force_limit)
      throw contract_error("brute_force_map: " + std::to_string(k) + "^" + std::to_string(n) +
                           " labelings exceed the limit of " + std::to_string(brute_force_limit));
  }

  std::vector<int> x(n, 0);
  ExactMap best{Labeling{x}, labeling_value(graph, potentials, x)};
  while (true) {
    // Odometer with the last node fastest: lexicographic order.
    int pos = n - 1;
    while (pos >= 0 && x[pos] == k - 1)
      x[pos--] = 0;
    if (pos < 0)
      break;
    ++x[pos];
    const double v = labeling_value(graph, potentials, x);
    if (v > best.value) {
      best.value = v;
      best.labeling.labels = x;
    }
  }
  return best;
}

LbpResult lbp_map(const CrfGraph& graph, const Potentials& potentials, const LbpConfig& config)
{
  const auto start = std::chrono::steady_clock::now();
  potentials.validate(graph);
  if (!(config.damping >= 0.0 && config.damping < 1.0))
    throw contract_error("lbp_map: damping must lie in [0, 1)");
  if (config.max_iterations < 1)
    throw contract_error("lbp_map: max_iterations must be at least 1");

  const auto [shifted, shift] = shift_nonnegative(potentials, config.epsilon_shift);
  const int n = graph.num_nodes();
  const int k = graph.num_labels();
  const std::size_t m = graph.num_edges();

  // factor[e](a, b) for a the label of edge.i, b the label of edge.j.
  std::vector<double> factor(m * k * k);
  for (std::size_t e = 0; e < m; ++e) {
    const Matrix& psi = shifted.pairwise[e];
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        factor[(e * k + a) * k + b] = psi(a, b) + psi(b, a);
  }

  // messages[(2e) * k ...] is i -> j, messages[(2e + 1) * k ...] is j -> i.
  std::vector<double> messages(2 * m * k, 0.0);
  std::vector<double> next(messages.size());
  Matrix belief(n, k);

  const auto compute_beliefs = [&] {
    std::copy(shifted.unary.data().begin(), shifted.unary.data().end(), belief.data().begin());
    for (std::size_t e = 0; e < m; ++e) {
      const auto [i, j] = graph.edges()[e];
      auto bi = belief.row(i);
      auto bj = belief.row(j);
      for (int a = 0; a < k; ++a) {
        bj[a] += messages[(2 * e) * k + a];
        bi[a] += messages[(2 * e + 1) * k + a];
      }
    }
  };
  const auto decode = [&] {
    Labeling out;
    out.labels.resize(n);
    for (int i = 0; i < n; ++i) {
      const auto row = belief.row(i);
      out.labels[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    return out;
  };

  LbpResult result;
  SolveReport& report = result.report;
  std::vector<double> incoming(k), outgoing(k);
  for (int it = 0; it < config.max_iterations; ++it) {
    compute_beliefs();
    report.objective_trace.push_back(labeling_value(graph, shifted, decode().labels));

    double delta = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
      for (int dir = 0; dir < 2; ++dir) {
        const int from = dir == 0 ? graph.edges()[e].i : graph.edges()[e].j;
        const double* reverse = messages.data() + (2 * e + (1 - dir)) * k;
        for (int a = 0; a < k; ++a)
          incoming[a] = belief(from, a) - reverse[a];
        double top = -std::numeric_limits<double>::infinity();
        for (int b = 0; b < k; ++b) {
          double best = -std::numeric_limits<double>::infinity();
          for (int a = 0; a < k; ++a) {
            const double f = dir == 0 ? factor[(e * k + a) * k + b] : factor[(e * k + b) * k + a];
            best = std::max(best, incoming[a] + f);
          }
          outgoing[b] = best;
        }
        const double* old = messages.data() + (2 * e + dir) * k;
        for (int b = 0; b < k; ++b) {
          outgoing[b] = (1.0 - config.damping) * outgoing[b] + config.damping * old[b];
          top = std::max(top, outgoing[b]);
        }
        double* dst = next.data() + (2 * e + dir) * k;
        for (int b = 0; b < k; ++b) {
          dst[b] = outgoing[b] - top;
          delta = std::max(delta, std::abs(dst[b] - old[b]));
        }
      }
    }
    std::swap(messages, next);
    report.iterations = it + 1;
    if (!std::all_of(messages.begin(), messages.end(), [](double v) { return std::isfinite(v); }))
      throw solver_error("lbp_map: non-finite message at iteration " + std::to_string(it + 1));
    if (delta < config.convergence_tol) {
      report.converged = true;
      break;
    }
  }

  compute_beliefs();
  result.labeling = decode();
  report.objective_trace.push_back(labeling_value(graph, shifted, result.labeling.labels));
  report.final_objective = labeling_value(graph, potentials, result.labeling.labels);
  report.wall_time = std::chrono::steady_clock::now() - start;
  return result;
}

}
