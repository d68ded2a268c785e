#ifndef GCRF_SCENE_HPP
#define GCRF_SCENE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "gcrf/cloud.hpp"
#include "gcrf/crf.hpp"
#include "gcrf/potentials.hpp"

namespace gcrf {

struct SceneConfig {
  int width = 40;
  int height = 40;
  int num_objects = 12;
  int num_labels = 7;
  double noise = 0.6;
  std::uint64_t seed = 1;
  /// When set, objects are added until at least this fraction of nodes is
  /// covered and `num_objects` is ignored.
  std::optional<double> coverage;
  int min_object_side = 3;
  int max_object_side = 10;
  /// Area fraction of each object covered by a shaded corner patch; 0 disables.
  double shadow_fraction = 0.25;
  /// Lower bound on the point count of every object blob.
  int min_blob_points = 160;
  PotentialParams potential_params{};

  void validate() const;
};

/// Synthetic stand-in for an image with a registered laser scan. Nodes form a
/// width x height grid (row-major). Objects are non-overlapping rectangles with
/// labels in [1, K); everything else is background label 0.
struct PlantedScene {
  SceneConfig config;
  CrfGraph graph;
  Potentials potentials;
  std::vector<double> edge_dissimilarity;
  Labeling truth;
  std::vector<NodeFeatures> features;
  std::vector<std::vector<int>> objects;
  PointCloud cloud;
  NodeProjection projection;
};

/// Deterministic in `config.seed`. Unary rows are
/// (1 - noise) * onehot(truth) + noise * u with u ~ U(0,1)^K, renormalised, so
/// noise = 1 carries no label information. u is drawn per node, except inside
/// an object's shaded patch where one draw is shared by the whole patch, so the
/// classifier errs coherently there. Touching objects get different labels.
/// Each object gets a distinct colour and histogram profile (its shaded patch a
/// darker colour and its own histogram) and a lattice blob of points above a
/// flat ground plane that projects onto exactly its nodes. Throws
/// contract_error when the objects cannot be placed.
PlantedScene generate_scene(const SceneConfig& config);

/// Runs the cloud pipeline on the scene's blob cloud.
ConstraintSets scene_constraints(const PlantedScene& scene, const CloudParams& params = {});

}

#endif
