#ifndef GCRF_CLOUD_HPP
#define GCRF_CLOUD_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gcrf/reduction.hpp"

namespace gcrf {

using Point3 = std::array<double, 3>;

struct PointCloud {
  std::vector<Point3> points;

  std::size_t size() const { return points.size(); }
};

struct CloudParams {
  int ransac_iterations = 500;
  double plane_inlier_threshold = 0.15;  // metres
  double cluster_radius = 0.5;           // metres
  int min_cluster_size = 150;
  /// A plane is removed only when at least this fraction of points support it.
  double min_plane_support = 0.5;
  std::uint64_t rng_seed = 42;

  void validate() const;
};

/// Point index -> graph node, or nothing for points outside the graph.
struct NodeProjection {
  std::vector<std::optional<int>> mapping;
};

/// n . x + offset = 0 with |n| = 1.
struct PlaneModel {
  Point3 normal{0.0, 0.0, 1.0};
  double offset = 0.0;
  std::size_t inliers = 0;

  double distance(const Point3& x) const
  {
    return std::abs(normal[0] * x[0] + normal[1] * x[1] + normal[2] * x[2] + offset);
  }
};

struct GroundRemoval {
  PlaneModel plane;
  bool removed = false;
  std::vector<std::size_t> non_ground;
};

/// RANSAC over random non-collinear triples. The winning plane has the most
/// inliers; candidates within 1% of that count are ranked by how close their
/// normal is to +z. Points within the inlier threshold are removed only when the
/// plane's support reaches `min_plane_support`. Throws contract_error when fewer
/// than three points are given and solver_error when every sample is collinear.
GroundRemoval remove_ground_plane(const PointCloud& cloud, const CloudParams& params);

/// Single-link clusters: connected components of "distance <= radius". Each
/// cluster is a sorted list of indices into `points`; clusters are ordered by
/// their smallest index. Uses a hashed voxel grid with cell size `radius`.
std::vector<std::vector<std::size_t>> euclidean_cluster(std::span<const Point3> points, double radius);

/// Ground removal, clustering, minimum-size filter, projection onto nodes.
/// Node sets that overlap are merged; sets with fewer than two nodes are dropped.
/// Each set is sorted and sets are ordered by their smallest node.
ConstraintSets build_constraint_sets(const PointCloud& cloud, const CloudParams& params,
                                     const NodeProjection& projection, int num_nodes);

/// "x y z" per line.
PointCloud read_point_cloud(std::istream& in);
void write_point_cloud(std::ostream& out, const PointCloud& cloud);

/// One node index per line, -1 for unmapped points.
NodeProjection read_projection(std::istream& in);
void write_projection(std::ostream& out, const NodeProjection& projection);

}

#endif
