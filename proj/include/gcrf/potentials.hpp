#ifndef GCRF_POTENTIALS_HPP
#define GCRF_POTENTIALS_HPP

#include <array>
#include <span>
#include <vector>

#include "gcrf/crf.hpp"

namespace gcrf {

/// Appearance and position descriptor of one superpixel-like node.
struct NodeFeatures {
  std::array<double, 2> centroid{};    // image-plane position
  std::array<double, 3> mean_color{};  // RGB in [0, 1]
  std::vector<double> histogram;       // nonnegative bin counts, not all zero

  friend bool operator==(const NodeFeatures&, const NodeFeatures&) = default;
};

struct PotentialParams {
  double theta = 1.5;      // edge distance threshold
  double theta_c = 0.5773502691896258;  // colour normaliser, 1/sqrt(3)
  double theta_l = 1.0 / 1.5;           // location normaliser

  void validate() const;
};

/// Every pair of nodes whose centroids are strictly closer than `theta`,
/// ordered by (i, j) with i < j.
std::vector<Edge> build_edges(std::span<const NodeFeatures> features, double theta);

/// D(a, b) = sqrt(1 - sum_i sqrt(a_i b_i) / sqrt(sum a * sum b * N^2)) with the
/// radicand clamped to [0, 1]. Counts are used as given; note that identical
/// histograms do not in general give zero.
double bhattacharyya_distance(std::span<const double> a, std::span<const double> b);

/// Mean of the histogram distance, the scaled colour distance and the scaled
/// centroid distance; the two scaled terms are clamped at 1.
double dissimilarity(const NodeFeatures& a, const NodeFeatures& b, const PotentialParams& params);

/// Diagonal 1 - dis^2, off-diagonal dis^2.
Matrix pairwise_potential(double dis, int num_labels);

/// Accepts classifier scores as unary potentials; rejects non-finite entries.
Matrix ingest_unary(Matrix scores);

/// Edges from centroid distances and pairwise potentials from dissimilarity.
struct FeatureModel {
  CrfGraph graph;
  Potentials potentials;
  std::vector<double> edge_dissimilarity;
};

FeatureModel build_feature_model(std::span<const NodeFeatures> features, Matrix unary,
                                 const PotentialParams& params);

}

#endif
