#include "gcrf/cloud.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

namespace gcrf {

namespace {

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x)
  {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b)
  {
    a = find(a);
    b = find(b);
    if (a != b)
      parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<std::size_t> parent_;
};

Point3 sub(const Point3& a, const Point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Point3 cross(const Point3& a, const Point3& b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Point3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const
  {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}

void CloudParams::validate() const
{
  if (ransac_iterations < 1 || !(plane_inlier_threshold > 0.0) || !(cluster_radius > 0.0) ||
      min_cluster_size < 1 || !(min_plane_support >= 0.0 && min_plane_support <= 1.0))
    throw contract_error("CloudParams: iterations, thresholds and sizes must be positive");
}

GroundRemoval remove_ground_plane(const PointCloud& cloud, const CloudParams& params)
{
  params.validate();
  const std::size_t n = cloud.size();
  if (n < 3)
    throw contract_error("remove_ground_plane: need at least three points");

  std::mt19937_64 rng(params.rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  struct Candidate {
    PlaneModel plane;
    double alignment;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(params.ransac_iterations);

  for (int it = 0; it < params.ransac_iterations; ++it) {
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    std::size_t c = pick(rng);
    if (a == b || a == c || b == c)
      continue;
    const Point3& p0 = cloud.points[a];
    const Point3 u = sub(cloud.points[b], p0);
    const Point3 v = sub(cloud.points[c], p0);
    Point3 normal = cross(u, v);
    const double len = norm(normal);
    if (!(len > 1e-12 * norm(u) * norm(v)))
      continue;
    for (double& x : normal)
      x /= len;

    PlaneModel plane{normal, -(normal[0] * p0[0] + normal[1] * p0[1] + normal[2] * p0[2]), 0};
    for (const Point3& x : cloud.points)
      if (plane.distance(x) <= params.plane_inlier_threshold)
        ++plane.inliers;
    candidates.push_back({plane, std::abs(normal[2])});
  }
  if (candidates.empty())
    throw solver_error("remove_ground_plane: no plane found (points are collinear)");

  std::size_t best_count = 0;
  for (const auto& c : candidates)
    best_count = std::max(best_count, c.plane.inliers);
  const Candidate* chosen = nullptr;
  for (const auto& c : candidates) {
    if (static_cast<double>(c.plane.inliers) < 0.99 * static_cast<double>(best_count))
      continue;
    if (!chosen || c.alignment > chosen->alignment ||
        (c.alignment == chosen->alignment && c.plane.inliers > chosen->plane.inliers))
      chosen = &c;
  }

  GroundRemoval out;
  out.plane = chosen->plane;
  out.removed = static_cast<double>(out.plane.inliers) >= params.min_plane_support * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!out.removed || out.plane.distance(cloud.points[i]) > params.plane_inlier_threshold)
      out.non_ground.push_back(i);
  return out;
}

std::vector<std::vector<std::size_t>> euclidean_cluster(std::span<const Point3> points, double radius)
{
  if (!(radius > 0.0))
    throw contract_error("euclidean_cluster: radius must be positive");
  const auto key_of = [radius](const Point3& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p[0] / radius)),
                   static_cast<std::int64_t>(std::floor(p[1] / radius)),
                   static_cast<std::int64_t>(std::floor(p[2] / radius))};
  };

  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  for (std::size_t i = 0; i < points.size(); ++i)
    grid[key_of(points[i])].push_back(i);

  const double r2 = radius * radius;
  DisjointSets sets(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CellKey k = key_of(points[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const auto cell = grid.find({k.x + dx, k.y + dy, k.z + dz});
          if (cell == grid.end())
            continue;
          for (std::size_t j : cell->second) {
            if (j <= i)
              continue;
            const Point3 d = sub(points[i], points[j]);
            if (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] <= r2)
              sets.unite(i, j);
          }
        }
  }

  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < points.size(); ++i)
    by_root[sets.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> clusters;
  clusters.reserve(by_root.size());
  for (auto& [root, members] : by_root)
    clusters.push_back(std::move(members));
  return clusters;
}

ConstraintSets build_constraint_sets(const PointCloud& cloud, const CloudParams& params,
                                     const NodeProjection& projection, int num_nodes)
{
  params.validate();
  if (projection.mapping.size() != cloud.size())
    throw contract_error("build_constraint_sets: projection has " + std::to_string(projection.mapping.size()) +
                         " entries for " + std::to_string(cloud.size()) + " points");
  for (const auto& node : projection.mapping)
    if (node && (*node < 0 || *node >= num_nodes))
      throw contract_error("build_constraint_sets: projection targets node " + std::to_string(*node) +
                           " outside the graph");
  if (cloud.size() < 3)
    return {};

  const GroundRemoval ground = remove_ground_plane(cloud, params);
  std::vector<Point3> survivors;
  survivors.reserve(ground.non_ground.size());
  for (std::size_t i : ground.non_ground)
    survivors.push_back(cloud.points[i]);

  std::vector<std::vector<int>> node_sets;
  for (const auto& cluster : euclidean_cluster(survivors, params.cluster_radius)) {
    if (cluster.size() < static_cast<std::size_t>(params.min_cluster_size))
      continue;
    std::vector<int> nodes;
    for (std::size_t s : cluster)
      if (const auto& node = projection.mapping[ground.non_ground[s]])
        nodes.push_back(*node);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (nodes.size() >= 2)
      node_sets.push_back(std::move(nodes));
  }

  DisjointSets merge(num_nodes);
  std::vector<bool> used(num_nodes, false);
  for (const auto& set : node_sets)
    for (int node : set) {
      used[node] = true;
      merge.unite(set.front(), node);
    }
  std::map<std::size_t, std::vector<int>> by_root;
  for (int node = 0; node < num_nodes; ++node)
    if (used[node])
      by_root[merge.find(node)].push_back(node);

  ConstraintSets out;
  for (auto& [root, nodes] : by_root)
    out.sets.push_back(std::move(nodes));
  std::sort(out.sets.begin(), out.sets.end());
  return out;
}

PointCloud read_point_cloud(std::istream& in)
{
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::istringstream fields(line);
    Point3 p;
    std::string extra;
    if (!(fields >> p[0] >> p[1] >> p[2]) || (fields >> extra))
      throw contract_error("point cloud line " + std::to_string(line_no) + ": expected three numbers");
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2]))
      throw contract_error("point cloud line " + std::to_string(line_no) + ": non-finite coordinate");
    cloud.points.push_back(p);
  }
  return cloud;
}

void write_point_cloud(std::ostream& out, const PointCloud& cloud)
{
  const auto old = out.precision(17);
  for (const Point3& p : cloud.points)
    out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  out.precision(old);
}

NodeProjection read_projection(std::istream& in)
{
  NodeProjection projection;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::istringstream fields(line);
    long long node;
    std::string extra;
    if (!(fields >> node) || (fields >> extra) || node < -1)
      throw contract_error("projection line " + std::to_string(line_no) + ": expected a node index or -1");
    projection.mapping.push_back(node < 0 ? std::nullopt : std::optional<int>(static_cast<int>(node)));
  }
  return projection;
}

void write_projection(std::ostream& out, const NodeProjection& projection)
{
  for (const auto& node : projection.mapping)
    out << (node ? *node : -1) << '\n';
}

}
