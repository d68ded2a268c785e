#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "gcrf/baselines.hpp"
#include "gcrf/cloud.hpp"
#include "gcrf/metrics.hpp"
#include "gcrf/potentials.hpp"
#include "gcrf/qp_solver.hpp"
#include "gcrf/scene.hpp"

namespace py = pybind11;
using namespace gcrf;

namespace {

using Doubles = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Ints = py::array_t<int, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Doubles& a, const char* name)
{
  if (a.ndim() != 2)
    throw contract_error(std::string(name) + " must be a 2-d array");
  const auto r = static_cast<std::size_t>(a.shape(0)), c = static_cast<std::size_t>(a.shape(1));
  return Matrix(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

Doubles from_matrix(const Matrix& m)
{
  Doubles out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Labeling to_labeling(const Ints& a)
{
  if (a.ndim() != 1)
    throw contract_error("labels must be a 1-d array");
  return Labeling{std::vector<int>(a.data(), a.data() + a.shape(0))};
}

py::array_t<int> from_ints(const std::vector<int>& v)
{
  py::array_t<int> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<int> from_labeling(const Labeling& y)
{
  return from_ints(y.labels);
}

std::vector<Point3> to_points(const Doubles& a)
{
  if (a.ndim() != 2 || a.shape(1) != 3)
    throw contract_error("points must have shape (n, 3)");
  std::vector<Point3> pts(static_cast<std::size_t>(a.shape(0)));
  for (std::size_t i = 0; i < pts.size(); ++i)
    pts[i] = {a.at(i, 0), a.at(i, 1), a.at(i, 2)};
  return pts;
}

struct Problem {
  CrfGraph graph;
  Potentials potentials;
};

// unary (N, K), edges (E, 2), pairwise (E, K, K).
Problem to_problem(const Doubles& unary, const Ints& edges, const Doubles& pairwise)
{
  Matrix phi = to_matrix(unary, "unary");
  const int n = static_cast<int>(phi.rows()), k = static_cast<int>(phi.cols());
  const auto e = edges.ndim() == 2 ? edges.shape(0) : 0;
  if (edges.size() > 0 && (edges.ndim() != 2 || edges.shape(1) != 2))
    throw contract_error("edges must have shape (e, 2)");
  if (pairwise.size() > 0 && (pairwise.ndim() != 3 || pairwise.shape(0) != e || pairwise.shape(1) != k ||
                              pairwise.shape(2) != k))
    throw contract_error("pairwise must have shape (e, k, k)");
  if (e > 0 && pairwise.size() == 0)
    throw contract_error("pairwise must have shape (e, k, k)");
  std::vector<Edge> list;
  std::vector<Matrix> psi;
  for (py::ssize_t t = 0; t < e; ++t) {
    list.push_back({edges.at(t, 0), edges.at(t, 1)});
    const double* base = pairwise.data() + t * k * k;
    psi.emplace_back(k, k, std::vector<double>(base, base + k * k));
  }
  Problem p{CrfGraph(n, k, std::move(list)), Potentials{std::move(phi), std::move(psi)}};
  p.potentials.validate(p.graph);
  return p;
}

SolverConfig solver_config(int max_iterations, double tol, const std::string& init)
{
  SolverConfig c;
  c.max_iterations = max_iterations;
  c.convergence_tol = tol;
  if (init == "uniform")
    c.init = InitStrategy::uniform;
  else if (init == "softmax")
    c.init = InitStrategy::unary_softmax;
  else
    throw contract_error("init must be 'uniform' or 'softmax'");
  c.validate();
  return c;
}

py::dict report_dict(const SolveReport& r)
{
  py::dict d;
  d["iterations"] = r.iterations;
  d["objective"] = r.final_objective;
  d["objective_trace"] = r.objective_trace;
  d["converged"] = r.converged;
  d["wall_time"] = r.wall_time.count();
  return d;
}

py::dict scores_dict(const ClassScores& s)
{
  py::dict d;
  d["precision"] = s.precision;
  d["recall"] = s.recall;
  d["accuracy"] = s.accuracy;
  d["f1"] = s.f1;
  d["present"] = s.present;
  return d;
}

}

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Pairwise CRF inference with hard same-label constraints.";

  m.def(
      "objective",
      [](const Doubles& unary, const Ints& edges, const Doubles& pairwise, const Doubles& marginals) {
        const Problem p = to_problem(unary, edges, pairwise);
        return objective(p.graph, p.potentials, Marginals(to_matrix(marginals, "marginals")));
      },
      py::arg("unary"), py::arg("edges"), py::arg("pairwise"), py::arg("marginals"));

  m.def(
      "solve",
      [](const Doubles& unary, const Ints& edges, const Doubles& pairwise, int max_iterations, double tol,
         const std::string& init) {
        const Problem p = to_problem(unary, edges, pairwise);
        const SolveResult r = solve(p.graph, p.potentials, solver_config(max_iterations, tol, init));
        py::dict d = report_dict(r.report);
        d["marginals"] = from_matrix(r.marginals.values());
        d["labels"] = from_labeling(extract_labeling(r.marginals));
        return d;
      },
      py::arg("unary"), py::arg("edges"), py::arg("pairwise"), py::arg("max_iterations") = 1000,
      py::arg("tol") = 1e-6, py::arg("init") = "uniform");

  m.def(
      "solve_constrained",
      [](const Doubles& unary, const Ints& edges, const Doubles& pairwise, std::vector<std::vector<int>> constraints,
         int max_iterations, double tol, const std::string& init) {
        const Problem p = to_problem(unary, edges, pairwise);
        const ConstrainedSolveResult r = solve_constrained(p.graph, p.potentials, ConstraintSets{std::move(constraints)},
                                                           solver_config(max_iterations, tol, init));
        py::dict d = report_dict(r.report);
        d["marginals"] = from_matrix(r.marginals.values());
        d["labels"] = from_labeling(r.labeling);
        d["num_supernodes"] = r.num_supernodes;
        return d;
      },
      py::arg("unary"), py::arg("edges"), py::arg("pairwise"), py::arg("constraints"),
      py::arg("max_iterations") = 1000, py::arg("tol") = 1e-6, py::arg("init") = "uniform");

  m.def(
      "lbp",
      [](const Doubles& unary, const Ints& edges, const Doubles& pairwise, int max_iterations, double damping,
         double tol) {
        const Problem p = to_problem(unary, edges, pairwise);
        LbpConfig c;
        c.max_iterations = max_iterations;
        c.damping = damping;
        c.convergence_tol = tol;
        const LbpResult r = lbp_map(p.graph, p.potentials, c);
        py::dict d = report_dict(r.report);
        d["labels"] = from_labeling(r.labeling);
        return d;
      },
      py::arg("unary"), py::arg("edges"), py::arg("pairwise"), py::arg("max_iterations") = 200,
      py::arg("damping") = 0.5, py::arg("tol") = 1e-6);

  m.def(
      "brute_force",
      [](const Doubles& unary, const Ints& edges, const Doubles& pairwise) {
        const Problem p = to_problem(unary, edges, pairwise);
        const ExactMap r = brute_force_map(p.graph, p.potentials);
        return py::make_tuple(from_labeling(r.labeling), r.value);
      },
      py::arg("unary"), py::arg("edges"), py::arg("pairwise"));

  m.def(
      "bhattacharyya",
      [](const Doubles& a, const Doubles& b) {
        return bhattacharyya_distance({a.data(), static_cast<std::size_t>(a.size())},
                                      {b.data(), static_cast<std::size_t>(b.size())});
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "compute_metrics",
      [](const Ints& predicted, const Ints& truth, int num_labels) {
        const MetricsReport r = compute_metrics(to_labeling(predicted), to_labeling(truth), num_labels);
        py::dict d = scores_dict(r.macro);
        py::list per_class;
        for (const auto& c : r.per_class)
          per_class.append(scores_dict(c));
        d["per_class"] = per_class;
        d["confusion"] = r.confusion;
        return d;
      },
      py::arg("predicted"), py::arg("truth"), py::arg("num_labels"));

  m.def(
      "euclidean_cluster",
      [](const Doubles& points, double radius) { return euclidean_cluster(to_points(points), radius); },
      py::arg("points"), py::arg("radius"));

  m.def(
      "build_constraint_sets",
      [](const Doubles& points, const Ints& projection, int num_nodes, double cluster_radius, int min_cluster_size,
         double plane_inlier_threshold, std::uint64_t seed) {
        PointCloud cloud{to_points(points)};
        NodeProjection proj;
        for (py::ssize_t t = 0; t < projection.size(); ++t) {
          const int node = projection.data()[t];
          proj.mapping.push_back(node < 0 ? std::nullopt : std::optional<int>(node));
        }
        CloudParams params;
        params.cluster_radius = cluster_radius;
        params.min_cluster_size = min_cluster_size;
        params.plane_inlier_threshold = plane_inlier_threshold;
        params.rng_seed = seed;
        return build_constraint_sets(cloud, params, proj, num_nodes).sets;
      },
      py::arg("points"), py::arg("projection"), py::arg("num_nodes"), py::arg("cluster_radius") = 0.5,
      py::arg("min_cluster_size") = 150, py::arg("plane_inlier_threshold") = 0.15, py::arg("seed") = 42);

  m.def(
      "generate_scene",
      [](int width, int height, int objects, int labels, double noise, std::uint64_t seed,
         std::optional<double> coverage) {
        SceneConfig c;
        c.width = width;
        c.height = height;
        c.num_objects = objects;
        c.num_labels = labels;
        c.noise = noise;
        c.seed = seed;
        c.coverage = coverage;
        const PlantedScene s = generate_scene(c);
        const auto e = static_cast<py::ssize_t>(s.graph.num_edges());
        py::array_t<int> edges({e, py::ssize_t{2}});
        Doubles pairwise({e, py::ssize_t{labels}, py::ssize_t{labels}});
        for (py::ssize_t t = 0; t < e; ++t) {
          edges.mutable_at(t, 0) = s.graph.edges()[t].i;
          edges.mutable_at(t, 1) = s.graph.edges()[t].j;
          const auto& psi = s.potentials.pairwise[t].data();
          std::copy(psi.begin(), psi.end(), pairwise.mutable_data() + t * labels * labels);
        }
        Doubles cloud({static_cast<py::ssize_t>(s.cloud.size()), py::ssize_t{3}});
        std::vector<int> projection;
        for (std::size_t t = 0; t < s.cloud.size(); ++t) {
          for (int c3 = 0; c3 < 3; ++c3)
            cloud.mutable_at(t, c3) = s.cloud.points[t][c3];
          projection.push_back(s.projection.mapping[t].value_or(-1));
        }
        py::dict d;
        d["unary"] = from_matrix(s.potentials.unary);
        d["edges"] = edges;
        d["pairwise"] = pairwise;
        d["truth"] = from_labeling(s.truth);
        d["objects"] = s.objects;
        d["constraints"] = scene_constraints(s).sets;
        d["cloud"] = cloud;
        d["projection"] = from_ints(projection);
        return d;
      },
      py::arg("width") = 40, py::arg("height") = 40, py::arg("objects") = 12, py::arg("labels") = 7,
      py::arg("noise") = 0.6, py::arg("seed") = 1, py::arg("coverage") = std::nullopt);
}
