#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "gcrf/cloud.hpp"
#include "support.hpp"

using namespace gcrf;

namespace {

// n points on a jittered lattice (spacing 0.2) starting at `origin`.
std::vector<Point3> blob(std::mt19937_64& rng, int n, Point3 origin)
{
  std::uniform_real_distribution<double> jitter(-0.04, 0.04);
  std::vector<Point3> pts;
  for (int t = 0; t < n; ++t)
    pts.push_back({origin[0] + 0.2 * (t % 6) + jitter(rng), origin[1] + 0.2 * ((t / 6) % 6) + jitter(rng),
                   origin[2] + 0.2 * (t / 36) + jitter(rng)});
  return pts;
}

std::vector<Point3> ground(std::mt19937_64& rng, int n)
{
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::normal_distribution<double> z(0.0, 0.02);
  std::vector<Point3> pts;
  for (int t = 0; t < n; ++t)
    pts.push_back({u(rng), u(rng), z(rng)});
  return pts;
}

struct Scene {
  PointCloud cloud;
  NodeProjection projection;

  void add(const std::vector<Point3>& pts, const std::vector<int>& nodes)
  {
    for (std::size_t t = 0; t < pts.size(); ++t) {
      cloud.points.push_back(pts[t]);
      if (nodes.empty())
        projection.mapping.emplace_back(std::nullopt);
      else
        projection.mapping.emplace_back(nodes[t % nodes.size()]);
    }
  }
};

}

TEST_CASE("ground plane removal")
{
  SUBCASE("elevated points survive")
  {
    PointCloud c;
    for (int x = 0; x < 10; ++x)
      for (int y = 0; y < 10; ++y)
        c.points.push_back({double(x), double(y), 0.0});
    for (int t = 0; t < 10; ++t)
      c.points.push_back({0.5 * t, 1.0, 5.0});
    const auto r = remove_ground_plane(c, CloudParams{});
    CHECK(r.removed);
    std::vector<std::size_t> expected;
    for (std::size_t t = 100; t < 110; ++t)
      expected.push_back(t);
    CHECK(r.non_ground == expected);
    CHECK(std::abs(r.plane.normal[2]) == doctest::Approx(1.0));
  }
  SUBCASE("no dominant plane keeps every point")
  {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    PointCloud c;
    for (int t = 0; t < 300; ++t)
      c.points.push_back({u(rng), u(rng), u(rng)});
    const auto r = remove_ground_plane(c, CloudParams{});
    CHECK_FALSE(r.removed);
    CHECK(r.non_ground.size() == 300);
    CHECK(r.plane.inliers > 0);
  }
  SUBCASE("deterministic given the seed")
  {
    std::mt19937_64 rng(52);
    PointCloud c;
    c.points = ground(rng, 400);
    for (const auto& p : blob(rng, 100, {0, 0, 1}))
      c.points.push_back(p);
    const auto a = remove_ground_plane(c, CloudParams{});
    const auto b = remove_ground_plane(c, CloudParams{});
    CHECK(a.non_ground == b.non_ground);
    CHECK(a.plane.normal == b.plane.normal);
    CHECK(a.plane.offset == b.plane.offset);
  }
  SUBCASE("degenerate input")
  {
    PointCloud line;
    for (int t = 0; t < 10; ++t)
      line.points.push_back({double(t), 2.0 * t, 0.0});
    CHECK_THROWS_AS(remove_ground_plane(line, CloudParams{}), solver_error);
    PointCloud two;
    two.points = {{0, 0, 0}, {1, 0, 0}};
    CHECK_THROWS_AS(remove_ground_plane(two, CloudParams{}), contract_error);
  }
  SUBCASE("a vanishing threshold removes nothing on generic data")
  {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointCloud c;
    for (int t = 0; t < 50; ++t)
      c.points.push_back({u(rng), u(rng), u(rng)});
    CloudParams params;
    params.plane_inlier_threshold = 1e-12;
    params.min_plane_support = 1e-9;
    const auto r = remove_ground_plane(c, params);
    CHECK(r.non_ground.size() >= 47);
  }
}

TEST_CASE("euclidean clustering")
{
  std::mt19937_64 rng(54);
  SUBCASE("separated blobs")
  {
    auto pts = blob(rng, 50, {0, 0, 0});
    for (const auto& p : blob(rng, 50, {5, 0, 0}))
      pts.push_back(p);
    const auto clusters = euclidean_cluster(pts, 0.5);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].size() == 50);
    CHECK(clusters[1].front() == 50);
  }
  SUBCASE("single link is transitive")
  {
    std::vector<Point3> chain;
    for (int t = 0; t < 30; ++t)
      chain.push_back({0.45 * t, 0.0, 0.0});
    CHECK(euclidean_cluster(chain, 0.5).size() == 1);
  }
  SUBCASE("matches the brute-force oracle")
  {
    for (int t = 0; t < 10; ++t) {
      std::uniform_real_distribution<double> u(0.0, 6.0);
      std::vector<Point3> pts;
      for (int i = 0; i < 500; ++i)
        pts.push_back({u(rng), u(rng), u(rng) * 0.5});
      const double radius = 0.25 + 0.05 * t;
      CHECK(euclidean_cluster(pts, radius) == testing::brute_force_clusters(pts, radius));
    }
  }
  SUBCASE("permutation invariant")
  {
    std::uniform_real_distribution<double> u(0.0, 4.0);
    std::vector<Point3> pts;
    for (int i = 0; i < 200; ++i)
      pts.push_back({u(rng), u(rng), u(rng)});
    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Point3> shuffled(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      shuffled[perm[i]] = pts[i];
    auto mapped = euclidean_cluster(pts, 0.6);
    for (auto& c : mapped) {
      for (auto& i : c)
        i = perm[i];
      std::sort(c.begin(), c.end());
    }
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == euclidean_cluster(shuffled, 0.6));
  }
}

TEST_CASE("constraint sets from a cloud")
{
  std::mt19937_64 rng(55);
  SUBCASE("ground only")
  {
    Scene s;
    s.add(ground(rng, 500), {});
    CHECK(build_constraint_sets(s.cloud, CloudParams{}, s.projection, 10).empty());
  }
  SUBCASE("one blob")
  {
    Scene s;
    s.add(ground(rng, 1000), {});
    s.add(blob(rng, 200, {0, 0, 1}), {4, 5, 9});
    const auto c = build_constraint_sets(s.cloud, CloudParams{}, s.projection, 12);
    CHECK(c.sets == std::vector<std::vector<int>>{{4, 5, 9}});
  }
  SUBCASE("small clusters are dropped")
  {
    Scene s;
    s.add(ground(rng, 1000), {});
    s.add(blob(rng, 100, {0, 0, 1}), {1, 2});
    s.add(blob(rng, 200, {5, 0, 1}), {6, 7});
    const auto c = build_constraint_sets(s.cloud, CloudParams{}, s.projection, 12);
    CHECK(c.sets == std::vector<std::vector<int>>{{6, 7}});
  }
  SUBCASE("149 against 151 points")
  {
    Scene s;
    s.add(ground(rng, 1000), {});
    s.add(blob(rng, 149, {0, 0, 1}), {1, 2, 3});
    s.add(blob(rng, 151, {5, 0, 1}), {6, 7, 8});
    const auto c = build_constraint_sets(s.cloud, CloudParams{}, s.projection, 12);
    CHECK(c.sets == std::vector<std::vector<int>>{{6, 7, 8}});
  }
  SUBCASE("overlapping projections are merged and singletons dropped")
  {
    Scene s;
    s.add(ground(rng, 1000), {});
    s.add(blob(rng, 160, {0, 0, 1}), {1, 2});
    s.add(blob(rng, 160, {5, 0, 1}), {2, 3});
    s.add(blob(rng, 160, {10, 0, 1}), {7});
    s.add(blob(rng, 160, {15, 0, 1}), {10, 11});
    const auto c = build_constraint_sets(s.cloud, CloudParams{}, s.projection, 12);
    CHECK(c.sets == std::vector<std::vector<int>>{{1, 2, 3}, {10, 11}});
    CHECK_NOTHROW(c.validate(12));
  }
  SUBCASE("projection must match the cloud")
  {
    Scene s;
    s.add(blob(rng, 10, {0, 0, 0}), {20});
    CHECK_THROWS_AS(build_constraint_sets(s.cloud, CloudParams{}, s.projection, 12), contract_error);
    s.projection.mapping.pop_back();
    CHECK_THROWS_AS(build_constraint_sets(s.cloud, CloudParams{}, s.projection, 30), contract_error);
  }
}

TEST_CASE("cloud and projection files")
{
  PointCloud c;
  c.points = {{0.125, -2.5, 3.0}, {1e-3, 4.0, 0.0}};
  std::stringstream ss;
  write_point_cloud(ss, c);
  CHECK(read_point_cloud(ss).points == c.points);

  NodeProjection p;
  p.mapping = {3, std::nullopt, 0};
  std::stringstream ps;
  write_projection(ps, p);
  CHECK(read_projection(ps).mapping == p.mapping);

  std::istringstream bad("1 2\n");
  CHECK_THROWS_AS(read_point_cloud(bad), contract_error);
  std::istringstream bad_proj("x\n");
  CHECK_THROWS_AS(read_projection(bad_proj), contract_error);
}
