#include "gcrf/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gcrf {

void PotentialParams::validate() const
{
  if (!(theta > 0.0 && theta_c > 0.0 && theta_l > 0.0))
    throw contract_error("PotentialParams: theta, theta_c and theta_l must be positive");
}

std::vector<Edge> build_edges(std::span<const NodeFeatures> features, double theta)
{
  if (features.empty())
    throw contract_error("build_edges: need at least one node");
  std::vector<Edge> edges;
  const double theta2 = theta * theta;
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (std::size_t j = i + 1; j < features.size(); ++j) {
      const double dx = features[i].centroid[0] - features[j].centroid[0];
      const double dy = features[i].centroid[1] - features[j].centroid[1];
      if (dx * dx + dy * dy < theta2)
        edges.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
  }
  return edges;
}

double bhattacharyya_distance(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size() || a.empty())
    throw contract_error("bhattacharyya_distance: histograms must have the same nonzero bin count");
  double sum_a = 0.0, sum_b = 0.0, overlap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0 || b[i] < 0.0)
      throw contract_error("bhattacharyya_distance: negative bin");
    sum_a += a[i];
    sum_b += b[i];
    overlap += std::sqrt(a[i] * b[i]);
  }
  if (sum_a <= 0.0 || sum_b <= 0.0)
    throw contract_error("bhattacharyya_distance: zero-sum histogram");
  const double n = static_cast<double>(a.size());
  const double radicand = 1.0 - overlap / std::sqrt(sum_a * sum_b * n * n);
  return std::sqrt(std::clamp(radicand, 0.0, 1.0));
}

double dissimilarity(const NodeFeatures& a, const NodeFeatures& b, const PotentialParams& params)
{
  double color = 0.0;
  for (int c = 0; c < 3; ++c)
    color += (a.mean_color[c] - b.mean_color[c]) * (a.mean_color[c] - b.mean_color[c]);
  const double dx = a.centroid[0] - b.centroid[0];
  const double dy = a.centroid[1] - b.centroid[1];

  const double hist = bhattacharyya_distance(a.histogram, b.histogram);
  const double color_term = std::min(1.0, params.theta_c * std::sqrt(color));
  const double location_term = std::min(1.0, params.theta_l * std::sqrt(dx * dx + dy * dy));
  return (hist + color_term + location_term) / 3.0;
}

Matrix pairwise_potential(double dis, int num_labels)
{
  if (!(dis >= 0.0 && dis <= 1.0))
    throw contract_error("pairwise_potential: dissimilarity " + std::to_string(dis) + " outside [0, 1]");
  const double d2 = dis * dis;
  Matrix psi(num_labels, num_labels, d2);
  for (int p = 0; p < num_labels; ++p)
    psi(p, p) = 1.0 - d2;
  return psi;
}

Matrix ingest_unary(Matrix scores)
{
  for (std::size_t i = 0; i < scores.rows(); ++i)
    for (double v : scores.row(i))
      if (!std::isfinite(v))
        throw contract_error("ingest_unary: non-finite score in row " + std::to_string(i));
  return scores;
}

FeatureModel build_feature_model(std::span<const NodeFeatures> features, Matrix unary,
                                 const PotentialParams& params)
{
  params.validate();
  if (unary.rows() != features.size())
    throw contract_error("build_feature_model: unary rows do not match feature count");
  const int k = static_cast<int>(unary.cols());

  std::vector<Edge> edges = build_edges(features, params.theta);
  std::vector<double> dis;
  std::vector<Matrix> pairwise;
  dis.reserve(edges.size());
  pairwise.reserve(edges.size());
  for (const Edge& e : edges) {
    dis.push_back(dissimilarity(features[e.i], features[e.j], params));
    pairwise.push_back(pairwise_potential(dis.back(), k));
  }
  FeatureModel model{CrfGraph(static_cast<int>(features.size()), k, std::move(edges)),
                     Potentials{ingest_unary(std::move(unary)), std::move(pairwise)}, std::move(dis)};
  return model;
}

}
