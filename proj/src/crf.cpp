#include "gcrf/crf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

namespace gcrf {

CrfGraph::CrfGraph(int num_nodes, int num_labels, std::vector<Edge> edges)
: num_nodes_(num_nodes)
, num_labels_(num_labels)
, edges_(std::move(edges))
{
  if (num_nodes_ < 1)
    throw contract_error("CrfGraph: need at least one node");
  if (num_labels_ < 2)
    throw contract_error("CrfGraph: need at least two labels, got " + std::to_string(num_labels_));

  std::set<std::pair<int, int>> seen;
  std::vector<std::size_t> degree(num_nodes_, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [i, j] = edges_[e];
    if (i < 0 || j < 0 || i >= num_nodes_ || j >= num_nodes_)
      throw contract_error("CrfGraph: edge " + std::to_string(e) + " has an out-of-range endpoint");
    if (i == j)
      throw contract_error("CrfGraph: edge " + std::to_string(e) + " is a self-loop");
    if (!seen.emplace(std::min(i, j), std::max(i, j)).second)
      throw contract_error("CrfGraph: duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    ++degree[i];
    ++degree[j];
  }

  offsets_.assign(num_nodes_ + 1, 0);
  for (int n = 0; n < num_nodes_; ++n)
    offsets_[n + 1] = offsets_[n] + degree[n];
  incidence_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [i, j] = edges_[e];
    incidence_[fill[i]++] = {e, j, true};
    incidence_[fill[j]++] = {e, i, false};
  }
}

void Potentials::validate(const CrfGraph& graph) const
{
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  const auto k = static_cast<std::size_t>(graph.num_labels());
  if (unary.rows() != n || unary.cols() != k)
    throw contract_error("Potentials: unary is " + std::to_string(unary.rows()) + "x" +
                         std::to_string(unary.cols()) + ", expected " + std::to_string(n) + "x" +
                         std::to_string(k));
  if (pairwise.size() != graph.num_edges())
    throw contract_error("Potentials: " + std::to_string(pairwise.size()) + " pairwise matrices for " +
                         std::to_string(graph.num_edges()) + " edges");
  for (double v : unary.data())
    if (!std::isfinite(v))
      throw contract_error("Potentials: non-finite unary entry");
  for (std::size_t e = 0; e < pairwise.size(); ++e) {
    if (pairwise[e].rows() != k || pairwise[e].cols() != k)
      throw contract_error("Potentials: pairwise matrix of edge " + std::to_string(e) + " has wrong shape");
    for (double v : pairwise[e].data())
      if (!std::isfinite(v))
        throw contract_error("Potentials: non-finite pairwise entry on edge " + std::to_string(e));
  }
}

Marginals Marginals::uniform(int num_nodes, int num_labels)
{
  return Marginals(Matrix(num_nodes, num_labels, 1.0 / num_labels));
}

Marginals Marginals::one_hot(const Labeling& labeling, int num_labels)
{
  Matrix m(labeling.size(), num_labels, 0.0);
  for (std::size_t i = 0; i < labeling.size(); ++i) {
    if (labeling[i] < 0 || labeling[i] >= num_labels)
      throw contract_error("Marginals::one_hot: label out of range at node " + std::to_string(i));
    m(i, labeling[i]) = 1.0;
  }
  return Marginals(std::move(m));
}

bool Marginals::is_valid(double tol) const
{
  for (std::size_t i = 0; i < values_.rows(); ++i) {
    double sum = 0.0;
    for (double v : values_.row(i)) {
      if (!(v >= 0.0 && v <= 1.0))
        return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      return false;
  }
  return true;
}

double objective(const CrfGraph& graph, const Potentials& potentials, const Marginals& marginals)
{
  potentials.validate(graph);
  if (marginals.num_nodes() != graph.num_nodes() || marginals.num_labels() != graph.num_labels())
    throw contract_error("objective: marginals shape does not match graph");

  const int k = graph.num_labels();
  double total = 0.0;
  for (int i = 0; i < graph.num_nodes(); ++i) {
    const auto mu = marginals.row(i);
    const auto phi = potentials.unary.row(i);
    for (int p = 0; p < k; ++p)
      total += phi[p] * mu[p];
  }
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    const auto mi = marginals.row(i);
    const auto mj = marginals.row(j);
    const Matrix& psi = potentials.pairwise[e];
    double edge = 0.0;
    for (int p = 0; p < k; ++p)
      for (int q = 0; q < k; ++q)
        edge += psi(p, q) * (mi[p] * mj[q] + mj[p] * mi[q]);
    total += edge;
  }
  return total;
}

double objective_of_labeling(const CrfGraph& graph, const Potentials& potentials, const Labeling& labeling)
{
  potentials.validate(graph);
  if (labeling.size() != static_cast<std::size_t>(graph.num_nodes()))
    throw contract_error("objective_of_labeling: labeling length does not match graph");
  for (std::size_t i = 0; i < labeling.size(); ++i)
    if (labeling[i] < 0 || labeling[i] >= graph.num_labels())
      throw contract_error("objective_of_labeling: label out of range at node " + std::to_string(i));

  double total = 0.0;
  for (int i = 0; i < graph.num_nodes(); ++i)
    total += potentials.unary(i, labeling[i]);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    const Matrix& psi = potentials.pairwise[e];
    total += psi(labeling[i], labeling[j]) + psi(labeling[j], labeling[i]);
  }
  return total;
}

Labeling extract_labeling(const Marginals& marginals)
{
  Labeling out;
  out.labels.resize(marginals.num_nodes());
  for (int i = 0; i < marginals.num_nodes(); ++i) {
    const auto row = marginals.row(i);
    out.labels[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

}
