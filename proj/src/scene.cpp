#include "gcrf/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace gcrf {

namespace {

struct Rect {
  int x, y, w, h;
};

// Guillotine partition of the grid into tiles whose sides lie in
// [min_side, max_side] wherever the grid allows it.
void partition(const Rect& r, int min_side, int max_side, std::mt19937_64& rng, std::vector<Rect>& out)
{
  const bool split_w = r.w > max_side && r.w >= 2 * min_side;
  const bool split_h = r.h > max_side && r.h >= 2 * min_side;
  if (split_w && (!split_h || r.w >= r.h)) {
    const int cut = std::uniform_int_distribution<int>(min_side, r.w - min_side)(rng);
    partition({r.x, r.y, cut, r.h}, min_side, max_side, rng, out);
    partition({r.x + cut, r.y, r.w - cut, r.h}, min_side, max_side, rng, out);
  } else if (split_h) {
    const int cut = std::uniform_int_distribution<int>(min_side, r.h - min_side)(rng);
    partition({r.x, r.y, r.w, cut}, min_side, max_side, rng, out);
    partition({r.x, r.y + cut, r.w, r.h - cut}, min_side, max_side, rng, out);
  } else {
    out.push_back(r);
  }
}

// Shares an edge or a corner.
bool touching(const Rect& a, const Rect& b)
{
  return a.x <= b.x + b.w && b.x <= a.x + a.w && a.y <= b.y + b.h && b.y <= a.y + a.h;
}

struct Appearance {
  std::array<double, 3> color;
  std::vector<double> histogram;
};

constexpr int histogram_bins = 8;

// Keeps the colour at least 0.9 away from every colour in `avoid` when 100
// draws allow it, otherwise the farthest draw.
Appearance random_appearance(std::mt19937_64& rng, const std::vector<std::array<double, 3>>& avoid)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Appearance a;
  double best = -1.0;
  for (int attempt = 0; attempt < 100 && best < 0.81; ++attempt) {
    const std::array<double, 3> color{unit(rng), unit(rng), unit(rng)};
    double nearest = 3.0;
    for (const auto& other : avoid) {
      double d2 = 0.0;
      for (int c = 0; c < 3; ++c)
        d2 += (color[c] - other[c]) * (color[c] - other[c]);
      nearest = std::min(nearest, d2);
    }
    if (nearest > best) {
      best = nearest;
      a.color = color;
    }
  }
  a.histogram.resize(histogram_bins);
  for (double& v : a.histogram)
    v = 100.0 * unit(rng) * unit(rng);
  return a;
}

}

void SceneConfig::validate() const
{
  if (width < 1 || height < 1)
    throw contract_error("SceneConfig: width and height must be positive");
  if (num_labels < 2)
    throw contract_error("SceneConfig: need at least two labels");
  if (num_objects < 0)
    throw contract_error("SceneConfig: object count must be nonnegative");
  if (!(noise >= 0.0 && noise <= 1.0))
    throw contract_error("SceneConfig: noise must lie in [0, 1]");
  if (coverage && !(*coverage >= 0.0 && *coverage <= 1.0))
    throw contract_error("SceneConfig: coverage must lie in [0, 1]");
  if (min_object_side < 1 || max_object_side < min_object_side)
    throw contract_error("SceneConfig: invalid object side bounds");
  if (!(shadow_fraction >= 0.0 && shadow_fraction <= 1.0))
    throw contract_error("SceneConfig: shadow_fraction must lie in [0, 1]");
  if (min_blob_points < 1)
    throw contract_error("SceneConfig: min_blob_points must be positive");
  potential_params.validate();
}

PlantedScene generate_scene(const SceneConfig& config)
{
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = config.width * config.height;
  const int k = config.num_labels;

  PlantedScene scene;
  scene.config = config;
  scene.truth.labels.assign(n, 0);

  // Placement: tile the grid, then pick tiles as objects.
  std::vector<Rect> tiles;
  for (int max_side = config.max_object_side;; --max_side) {
    tiles.clear();
    partition({0, 0, config.width, config.height}, config.min_object_side, max_side, rng, tiles);
    if (config.coverage || static_cast<int>(tiles.size()) >= config.num_objects)
      break;
    if (max_side == config.min_object_side)
      throw contract_error("generate_scene: cannot place " + std::to_string(config.num_objects) + " objects on a " +
                           std::to_string(config.width) + "x" + std::to_string(config.height) + " grid");
  }
  std::shuffle(tiles.begin(), tiles.end(), rng);

  std::vector<int> region(n, -1);  // -1 background, else object index
  std::vector<Rect> placed;
  int covered = 0;
  for (const Rect& t : tiles) {
    if (config.coverage ? covered >= *config.coverage * n
                        : static_cast<int>(placed.size()) >= config.num_objects)
      break;
    placed.push_back(t);
    covered += t.w * t.h;
  }

  std::vector<int> object_label(placed.size());
  for (std::size_t o = 0; o < placed.size(); ++o) {
    std::vector<bool> taken(k, false);
    taken[0] = true;
    for (std::size_t prev = 0; prev < o; ++prev) {
      if (touching(placed[o], placed[prev]))
        taken[object_label[prev]] = true;
    }
    std::vector<int> free_labels;
    for (int p = 1; p < k; ++p)
      if (!taken[p])
        free_labels.push_back(p);
    object_label[o] = free_labels.empty()
                          ? std::uniform_int_distribution<int>(1, k - 1)(rng)
                          : free_labels[std::uniform_int_distribution<std::size_t>(0, free_labels.size() - 1)(rng)];
  }

  std::vector<bool> shaded(n, false);
  for (std::size_t o = 0; o < placed.size(); ++o) {
    const Rect& t = placed[o];
    std::vector<int> nodes;
    for (int y = t.y; y < t.y + t.h; ++y)
      for (int x = t.x; x < t.x + t.w; ++x) {
        const int node = y * config.width + x;
        nodes.push_back(node);
        region[node] = static_cast<int>(o);
        scene.truth.labels[node] = object_label[o];
      }
    if (config.shadow_fraction > 0.0) {
      const double side = std::sqrt(config.shadow_fraction);
      const int sw = std::clamp(static_cast<int>(std::lround(t.w * side)), 1, t.w);
      const int sh = std::clamp(static_cast<int>(std::lround(t.h * side)), 1, t.h);
      const int sx = unit(rng) < 0.5 ? t.x : t.x + t.w - sw;
      const int sy = unit(rng) < 0.5 ? t.y : t.y + t.h - sh;
      for (int y = sy; y < sy + sh; ++y)
        for (int x = sx; x < sx + sw; ++x)
          shaded[y * config.width + x] = true;
    }
    scene.objects.push_back(std::move(nodes));
  }

  // Appearance: one profile per region, jittered per node.
  const Appearance background = random_appearance(rng, {});
  std::vector<Appearance> looks, shades;
  for (std::size_t o = 0; o < scene.objects.size(); ++o) {
    std::vector<std::array<double, 3>> avoid{background.color};
    for (std::size_t prev = 0; prev < o; ++prev)
      if (touching(placed[o], placed[prev]))
        avoid.push_back(looks[prev].color);
    looks.push_back(random_appearance(rng, avoid));
    Appearance shade = random_appearance(rng, {});
    for (int c = 0; c < 3; ++c)
      shade.color[c] = 0.4 * looks.back().color[c];
    shades.push_back(std::move(shade));
  }

  std::normal_distribution<double> color_jitter(0.0, 0.03);
  scene.features.resize(n);
  for (int node = 0; node < n; ++node) {
    const Appearance& look = region[node] < 0 ? background : shaded[node] ? shades[region[node]] : looks[region[node]];
    NodeFeatures& f = scene.features[node];
    f.centroid = {static_cast<double>(node % config.width), static_cast<double>(node / config.width)};
    for (int c = 0; c < 3; ++c)
      f.mean_color[c] = std::clamp(look.color[c] + color_jitter(rng), 0.0, 1.0);
    f.histogram.resize(histogram_bins);
    for (int b = 0; b < histogram_bins; ++b)
      f.histogram[b] = look.histogram[b] + 5.0 * unit(rng) + 1e-3;
  }

  std::vector<std::vector<double>> shade_noise(scene.objects.size(), std::vector<double>(k));
  for (auto& u : shade_noise)
    for (double& v : u)
      v = unit(rng);

  Matrix unary(n, k);
  for (int node = 0; node < n; ++node) {
    auto row = unary.row(node);
    double sum = 0.0;
    for (int p = 0; p < k; ++p) {
      const double u = shaded[node] ? shade_noise[region[node]][p] : unit(rng);
      row[p] = (1.0 - config.noise) * (p == scene.truth[node] ? 1.0 : 0.0) + config.noise * u;
      sum += row[p];
    }
    for (double& v : row)
      v /= sum;
  }

  FeatureModel model = build_feature_model(scene.features, std::move(unary), config.potential_params);
  scene.graph = std::move(model.graph);
  scene.potentials = std::move(model.potentials);
  scene.edge_dissimilarity = std::move(model.edge_dissimilarity);

  // Cloud: one jittered lattice blob per object, floating above a flat ground.
  constexpr double spacing = 0.2;
  constexpr double gap = 1.5;
  std::uniform_real_distribution<double> lattice_jitter(-0.04, 0.04);
  double x_cursor = 0.0;
  std::vector<Point3> blob_points;
  std::vector<std::optional<int>> blob_projection;
  for (const auto& nodes : scene.objects) {
    const int count = std::max(config.min_blob_points, 2 * static_cast<int>(nodes.size()));
    const int side = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(count))));
    for (int t = 0; t < count; ++t) {
      const int a = t % side, b = (t / side) % side, c = t / (side * side);
      blob_points.push_back({x_cursor + a * spacing + lattice_jitter(rng), b * spacing + lattice_jitter(rng),
                             0.8 + c * spacing + lattice_jitter(rng)});
      blob_projection.emplace_back(nodes[t % nodes.size()]);
    }
    x_cursor += side * spacing + gap;
  }

  const int ground_count = std::max(1000, 2 * static_cast<int>(blob_points.size()));
  const double ground_length = std::max(x_cursor, 10.0) + 2.0;
  const int ground_cols = static_cast<int>(std::ceil(std::sqrt(ground_count * ground_length / 8.0)));
  const int ground_rows = (ground_count + ground_cols - 1) / ground_cols;
  std::normal_distribution<double> ground_noise(0.0, 0.02);
  for (int r = 0; r < ground_rows; ++r)
    for (int c = 0; c < ground_cols; ++c) {
      scene.cloud.points.push_back({-1.0 + ground_length * (c + unit(rng)) / ground_cols,
                                    -4.0 + 8.0 * (r + unit(rng)) / ground_rows, ground_noise(rng)});
      scene.projection.mapping.emplace_back(std::nullopt);
    }
  scene.cloud.points.insert(scene.cloud.points.end(), blob_points.begin(), blob_points.end());
  scene.projection.mapping.insert(scene.projection.mapping.end(), blob_projection.begin(), blob_projection.end());
  return scene;
}

ConstraintSets scene_constraints(const PlantedScene& scene, const CloudParams& params)
{
  return build_constraint_sets(scene.cloud, params, scene.projection, scene.graph.num_nodes());
}

}
