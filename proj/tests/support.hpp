// Shared fixtures and independent oracles for the test programs.
#ifndef GCRF_TESTS_SUPPORT_HPP
#define GCRF_TESTS_SUPPORT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "gcrf/crf.hpp"
#include "gcrf/reduction.hpp"

namespace testing {

struct Instance {
  gcrf::CrfGraph graph;
  gcrf::Potentials potentials;
};

inline gcrf::Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double lo, double hi)
{
  std::uniform_real_distribution<double> u(lo, hi);
  gcrf::Matrix m(rows, cols);
  for (double& v : m.data())
    v = u(rng);
  return m;
}

// Erdos-Renyi edges with random orientation and asymmetric psi.
inline Instance random_instance(std::mt19937_64& rng, int n, int k, double edge_prob = 0.5, double lo = 0.0,
                                double hi = 1.0)
{
  std::bernoulli_distribution coin(edge_prob);
  std::vector<gcrf::Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng))
        edges.push_back(coin(rng) ? gcrf::Edge{i, j} : gcrf::Edge{j, i});
  std::shuffle(edges.begin(), edges.end(), rng);
  gcrf::Potentials p{random_matrix(rng, n, k, lo, hi), {}};
  for (std::size_t e = 0; e < edges.size(); ++e)
    p.pairwise.push_back(random_matrix(rng, k, k, lo, hi));
  return {gcrf::CrfGraph(n, k, std::move(edges)), std::move(p)};
}

// Random spanning tree: node i attaches to a random earlier node.
inline Instance random_tree(std::mt19937_64& rng, int n, int k, double lo = 0.0, double hi = 1.0)
{
  std::vector<gcrf::Edge> edges;
  for (int i = 1; i < n; ++i)
    edges.push_back({static_cast<int>(std::uniform_int_distribution<int>(0, i - 1)(rng)), i});
  gcrf::Potentials p{random_matrix(rng, n, k, lo, hi), {}};
  for (std::size_t e = 0; e < edges.size(); ++e)
    p.pairwise.push_back(random_matrix(rng, k, k, lo, hi));
  return {gcrf::CrfGraph(n, k, std::move(edges)), std::move(p)};
}

inline gcrf::Marginals random_marginals(std::mt19937_64& rng, int n, int k)
{
  gcrf::Matrix m = random_matrix(rng, n, k, 0.05, 1.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    const double s = std::accumulate(row.begin(), row.end(), 0.0);
    for (double& v : row)
      v /= s;
  }
  return gcrf::Marginals(std::move(m));
}

// Random disjoint sets of size >= 2 over a random subset of nodes.
inline gcrf::ConstraintSets random_constraints(std::mt19937_64& rng, int n, int max_sets)
{
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  gcrf::ConstraintSets c;
  std::size_t pos = 0;
  const int sets = std::uniform_int_distribution<int>(0, max_sets)(rng);
  for (int s = 0; s < sets && pos + 2 <= order.size(); ++s) {
    const auto left = order.size() - pos;
    const auto size = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(left, 4))(rng);
    c.sets.emplace_back(order.begin() + pos, order.begin() + pos + size);
    pos += size;
  }
  return c;
}

// Ordered-pair objective: sum_i phi_i . mu_i + sum_i sum_{j in N(i)} mu_i^T psi_{ij} mu_j,
// where both orientations of an edge carry the same stored matrix.
inline double naive_objective(const gcrf::CrfGraph& g, const gcrf::Potentials& pot, const gcrf::Marginals& mu)
{
  const int n = g.num_nodes(), k = g.num_labels();
  std::vector<const gcrf::Matrix*> table(n * n, nullptr);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edges()[e];
    table[i * n + j] = &pot.pairwise[e];
    table[j * n + i] = &pot.pairwise[e];
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < k; ++p)
      total += pot.unary(i, p) * mu.row(i)[p];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const gcrf::Matrix* psi = table[i * n + j];
      if (!psi)
        continue;
      for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q)
          total += (*psi)(p, q) * mu.row(i)[p] * mu.row(j)[q];
    }
  return total;
}

// Every labeling of n nodes with k labels, in lexicographic order.
template <typename F>
void for_each_labeling(int n, int k, F&& visit)
{
  gcrf::Labeling y;
  y.labels.assign(n, 0);
  while (true) {
    visit(y);
    int pos = n - 1;
    while (pos >= 0 && ++y.labels[pos] == k)
      y.labels[pos--] = 0;
    if (pos < 0)
      return;
  }
}

inline double exhaustive_max(const gcrf::CrfGraph& g, const gcrf::Potentials& pot)
{
  double best = -INFINITY;
  for_each_labeling(g.num_nodes(), g.num_labels(), [&](const gcrf::Labeling& y) {
    best = std::max(best, naive_objective(g, pot, gcrf::Marginals::one_hot(y, g.num_labels())));
  });
  return best;
}

// O(n^2) single-link components via union-find; clusters sorted by smallest index.
inline std::vector<std::vector<std::size_t>> brute_force_clusters(const std::vector<std::array<double, 3>>& pts,
                                                                  double radius)
{
  std::vector<std::size_t> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      double d2 = 0.0;
      for (int c = 0; c < 3; ++c)
        d2 += (pts[a][c] - pts[b][c]) * (pts[a][c] - pts[b][c]);
      if (std::sqrt(d2) <= radius)
        parent[find(a)] = find(b);
    }
  std::vector<std::vector<std::size_t>> by_root(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    by_root[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& c : by_root)
    if (!c.empty())
      out.push_back(std::move(c));
  std::sort(out.begin(), out.end());
  return out;
}

}

#endif
