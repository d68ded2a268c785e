#include "gcrf/reduction.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace gcrf {

void ConstraintSets::validate(int num_nodes) const
{
  std::vector<int> owner(num_nodes, -1);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (sets[k].size() < 2)
      throw contract_error("ConstraintSets: set " + std::to_string(k) + " has fewer than two nodes");
    for (int node : sets[k]) {
      if (node < 0 || node >= num_nodes)
        throw contract_error("ConstraintSets: node " + std::to_string(node) + " in set " + std::to_string(k) +
                             " is out of range");
      if (owner[node] != -1)
        throw contract_error("ConstraintSets: node " + std::to_string(node) + " appears in set " +
                             std::to_string(owner[node]) + " and set " + std::to_string(k));
      owner[node] = static_cast<int>(k);
    }
  }
}

bool ConstraintSets::satisfied_by(const Labeling& labeling) const
{
  for (const auto& set : sets)
    for (int node : set)
      if (labeling[node] != labeling[set.front()])
        return false;
  return true;
}

Matrix SparseMatrix::to_dense() const
{
  Matrix m(rows, cols, 0.0);
  for (const auto& e : entries)
    m(e.row, e.col) += e.value;
  return m;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b)
{
  if (a.cols != b.rows)
    throw contract_error("multiply: inner dimensions differ");
  std::vector<std::vector<std::pair<std::size_t, double>>> b_rows(b.rows);
  for (const auto& e : b.entries)
    b_rows[e.row].emplace_back(e.col, e.value);

  std::map<std::pair<std::size_t, std::size_t>, double> acc;
  for (const auto& ea : a.entries)
    for (const auto& [col, value] : b_rows[ea.col])
      acc[{ea.row, col}] += ea.value * value;

  SparseMatrix out{a.rows, b.cols, {}};
  out.entries.reserve(acc.size());
  for (const auto& [pos, value] : acc)
    out.entries.push_back({pos.first, pos.second, value});
  return out;
}

ConstraintSystem build_constraint_matrix(const CrfGraph& graph, const ConstraintSets& constraints)
{
  constraints.validate(graph.num_nodes());
  const auto k = static_cast<std::size_t>(graph.num_labels());

  ConstraintSystem sys;
  sys.matrix.cols = static_cast<std::size_t>(graph.num_nodes()) * k;
  std::size_t row = 0;
  for (const auto& set : constraints.sets) {
    for (std::size_t m = 0; m + 1 < set.size(); ++m) {
      const auto a = static_cast<std::size_t>(set[m]);
      const auto b = static_cast<std::size_t>(set[m + 1]);
      for (std::size_t p = 0; p < k; ++p, ++row) {
        sys.matrix.entries.push_back({row, a * k + p, 1.0});
        sys.matrix.entries.push_back({row, b * k + p, -1.0});
      }
    }
  }
  sys.matrix.rows = row;
  sys.rhs.assign(row, 0.0);
  return sys;
}

SparseMatrix ExpansionMap::operator_matrix(int num_labels) const
{
  const auto k = static_cast<std::size_t>(num_labels);
  SparseMatrix z{node_to_super.size() * k, static_cast<std::size_t>(num_super) * k, {}};
  for (std::size_t i = 0; i < node_to_super.size(); ++i)
    for (std::size_t p = 0; p < k; ++p)
      z.entries.push_back({i * k + p, static_cast<std::size_t>(node_to_super[i]) * k + p, 1.0});
  return z;
}

ExpansionMap build_null_space_operator(const CrfGraph& graph, const ConstraintSets& constraints)
{
  constraints.validate(graph.num_nodes());
  const int n = graph.num_nodes();

  std::vector<int> group(n, -1);
  for (std::size_t k = 0; k < constraints.sets.size(); ++k)
    for (int node : constraints.sets[k])
      group[node] = static_cast<int>(k);

  ExpansionMap map;
  map.node_to_super.assign(n, -1);
  std::vector<int> group_super(constraints.sets.size(), -1);
  for (int i = 0; i < n; ++i) {
    if (group[i] < 0) {
      map.node_to_super[i] = map.num_super++;
    } else {
      int& s = group_super[group[i]];
      if (s < 0)
        s = map.num_super++;
      map.node_to_super[i] = s;
    }
  }
  return map;
}

ReducedProblem reduce_problem(const CrfGraph& graph, const Potentials& potentials,
                              const ConstraintSets& constraints)
{
  potentials.validate(graph);
  ExpansionMap map = build_null_space_operator(graph, constraints);
  const int k = graph.num_labels();

  Matrix unary(map.num_super, k, 0.0);
  for (int i = 0; i < graph.num_nodes(); ++i) {
    auto dst = unary.row(map.node_to_super[i]);
    const auto src = potentials.unary.row(i);
    for (int p = 0; p < k; ++p)
      dst[p] += src[p];
  }

  double constant = 0.0;
  std::vector<Edge> super_edges;
  std::vector<Matrix> super_pairwise;
  std::map<std::pair<int, int>, std::size_t> index;
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const int a = map.node_to_super[graph.edges()[e].i];
    const int b = map.node_to_super[graph.edges()[e].j];
    const Matrix& psi = potentials.pairwise[e];
    if (a == b) {
      double floor = psi(0, 0);
      for (int p = 1; p < k; ++p)
        floor = std::min(floor, psi(p, p));
      auto dst = unary.row(a);
      for (int p = 0; p < k; ++p)
        dst[p] += 2.0 * (psi(p, p) - floor);
      constant += 2.0 * floor;
      continue;
    }
    auto [it, inserted] = index.try_emplace({std::min(a, b), std::max(a, b)}, super_edges.size());
    if (inserted) {
      super_edges.push_back({a, b});
      super_pairwise.emplace_back(k, k, 0.0);
    }
    Matrix& tau = super_pairwise[it->second];
    const bool same_orientation = super_edges[it->second].i == a;
    for (int p = 0; p < k; ++p)
      for (int q = 0; q < k; ++q)
        tau(p, q) += same_orientation ? psi(p, q) : psi(q, p);
  }

  std::vector<int> members(map.num_super, 0);
  for (int s : map.node_to_super)
    ++members[s];
  for (std::size_t e = 0; e < super_edges.size(); ++e) {
    if (members[super_edges[e].i] == 1 && members[super_edges[e].j] == 1)
      continue;
    const auto tau = super_pairwise[e].data();
    const double floor = *std::min_element(tau.begin(), tau.end());
    for (double& v : tau)
      v -= floor;
    constant += 2.0 * floor;
  }

  ReducedProblem out{CrfGraph(map.num_super, k, std::move(super_edges)),
                     Potentials{std::move(unary), std::move(super_pairwise)}, std::move(map), constant};
  return out;
}

Marginals expand_solution(const ReducedProblem& reduced, const Marginals& reduced_marginals)
{
  const ExpansionMap& map = reduced.expansion;
  if (reduced_marginals.num_nodes() != map.num_super)
    throw contract_error("expand_solution: marginals have " + std::to_string(reduced_marginals.num_nodes()) +
                         " rows, reduced problem has " + std::to_string(map.num_super) + " supernodes");
  const int k = reduced_marginals.num_labels();
  Matrix out(map.num_nodes(), k);
  for (int i = 0; i < map.num_nodes(); ++i) {
    const auto src = reduced_marginals.row(map.node_to_super[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return Marginals(std::move(out));
}

Labeling expand_labeling(const ExpansionMap& expansion, const Labeling& reduced_labeling)
{
  if (reduced_labeling.size() != static_cast<std::size_t>(expansion.num_super))
    throw contract_error("expand_labeling: labeling length does not match supernode count");
  Labeling out;
  out.labels.reserve(expansion.node_to_super.size());
  for (int s : expansion.node_to_super)
    out.labels.push_back(reduced_labeling[s]);
  return out;
}

}
