// gcrf: command-line front end for constrained CRF inference.
//
//   gcrf solve problem.json --solver cqp --out labels.txt --report report.json
//   gcrf synth --width 40 --height 40 --objects 12 --labels 7 --noise 0.6 --seed 1 --out scene.json
//   gcrf eval predicted.txt truth.txt --labels 7 --format table
//   gcrf bench --sizes 176,219,787,1628 --fractions 0.25,0.5,0.75 --seed 1 --out bench.csv
//   gcrf constraints --cloud scan.xyz --projection scan.proj --nodes 1600
//
// Exit codes: 0 success, 2 input error, 3 solver error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcrf/baselines.hpp"
#include "gcrf/benchmark.hpp"
#include "gcrf/cloud.hpp"
#include "gcrf/metrics.hpp"
#include "gcrf/problem_io.hpp"
#include "gcrf/qp_solver.hpp"
#include "gcrf/scene.hpp"

namespace {

constexpr int exit_input_error = 2;
constexpr int exit_solver_error = 3;

class input_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw input_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path)
{
  std::ofstream out(path);
  if (!out)
    throw input_error("cannot write " + path);
  return out;
}

std::string stem(const std::string& path)
{
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path;
  return path.substr(0, dot);
}

struct SolveOptions {
  std::string problem;
  std::string solver = "cqp";
  int max_iters = 1000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string init = "uniform";
  double damping = 0.5;
  std::string out;
  std::string report;
};

int run_solve(const SolveOptions& opt)
{
  auto in = open_in(opt.problem);
  const gcrf::ProblemFile problem = gcrf::read_problem(in);
  const gcrf::CrfGraph graph = problem.graph();
  const gcrf::Potentials potentials = problem.potentials();

  gcrf::SolverConfig config;
  config.max_iterations = opt.max_iters;
  config.convergence_tol = opt.tol;
  config.init = opt.init == "softmax" ? gcrf::InitStrategy::unary_softmax : gcrf::InitStrategy::uniform;

  gcrf::Labeling labeling;
  gcrf::SolveReport report;
  int supernodes = graph.num_nodes();
  try {
    if (opt.solver == "qp") {
      auto r = gcrf::solve(graph, potentials, config);
      labeling = gcrf::extract_labeling(r.marginals);
      report = std::move(r.report);
    } else if (opt.solver == "cqp") {
      auto r = gcrf::solve_constrained(graph, potentials, problem.constraints, config);
      labeling = std::move(r.labeling);
      report = std::move(r.report);
      supernodes = r.num_supernodes;
    } else if (opt.solver == "lbp") {
      gcrf::LbpConfig lbp;
      lbp.max_iterations = opt.max_iters;
      lbp.convergence_tol = opt.tol;
      lbp.damping = opt.damping;
      auto r = gcrf::lbp_map(graph, potentials, lbp);
      labeling = std::move(r.labeling);
      report = std::move(r.report);
    } else {
      const auto start = std::chrono::steady_clock::now();
      auto r = gcrf::brute_force_map(graph, potentials);
      labeling = std::move(r.labeling);
      report.iterations = 1;
      report.converged = true;
      report.final_objective = r.value;
      report.wall_time = std::chrono::steady_clock::now() - start;
    }
  } catch (const gcrf::solver_error& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return exit_solver_error;
  } catch (const gcrf::contract_error& e) {
    // Only reachable from solver-side refusals such as an oversized brute-force space.
    std::cerr << "solver failure: " << e.what() << '\n';
    return exit_solver_error;
  }

  const bool satisfied = problem.constraints.satisfied_by(labeling);
  const std::string labels_path = opt.out.empty() ? stem(opt.problem) + ".labels.txt" : opt.out;
  const std::string report_path = opt.report.empty() ? stem(opt.problem) + ".report.json" : opt.report;
  {
    auto out = open_out(labels_path);
    gcrf::write_labeling(out, labeling);
  }
  nlohmann::json doc{{"solver", opt.solver},
                     {"iterations", report.iterations},
                     {"converged", report.converged},
                     {"objective", gcrf::objective_of_labeling(graph, potentials, labeling)},
                     {"relaxed_objective", report.final_objective},
                     {"wall_ms", 1e3 * report.wall_time.count()},
                     {"num_nodes", graph.num_nodes()},
                     {"num_supernodes", supernodes},
                     {"constraint_sets", problem.constraints.sets.size()},
                     {"constraints_satisfied", satisfied},
                     {"seed", opt.seed}};
  {
    auto out = open_out(report_path);
    out << doc.dump(2) << '\n';
  }
  std::cout << opt.solver << ": " << report.iterations << " iterations, objective " << std::setprecision(10)
            << doc["objective"].get<double>() << ", constraints " << (satisfied ? "satisfied" : "VIOLATED") << ", "
            << std::setprecision(4) << doc["wall_ms"].get<double>() << " ms\n";
  return 0;
}

struct SynthOptions {
  gcrf::SceneConfig scene;
  std::string out = "scene.json";
  std::string truth;
  std::string cloud;
  std::string projection;
};

int run_synth(const SynthOptions& opt)
{
  const gcrf::PlantedScene scene = gcrf::generate_scene(opt.scene);
  const gcrf::ConstraintSets constraints = gcrf::scene_constraints(scene);
  const gcrf::ProblemFile problem =
      gcrf::make_problem(scene.graph, scene.potentials, constraints, scene.features, scene.edge_dissimilarity);
  {
    auto out = open_out(opt.out);
    out << gcrf::serialize_problem(problem);
  }
  const std::string truth_path = opt.truth.empty() ? stem(opt.out) + ".truth.txt" : opt.truth;
  {
    auto out = open_out(truth_path);
    gcrf::write_labeling(out, scene.truth);
  }
  if (!opt.cloud.empty()) {
    auto out = open_out(opt.cloud);
    gcrf::write_point_cloud(out, scene.cloud);
  }
  if (!opt.projection.empty()) {
    auto out = open_out(opt.projection);
    gcrf::write_projection(out, scene.projection);
  }
  std::cout << "wrote " << opt.out << " (" << scene.graph.num_nodes() << " nodes, " << scene.graph.num_edges()
            << " edges, " << constraints.sets.size() << " constraint sets) and " << truth_path << '\n';
  return 0;
}

struct EvalOptions {
  std::string predicted;
  std::string truth;
  int labels = 0;
  std::string format = "table";
};

int run_eval(const EvalOptions& opt)
{
  auto pin = open_in(opt.predicted);
  auto tin = open_in(opt.truth);
  const gcrf::Labeling predicted = gcrf::read_labeling(pin);
  const gcrf::Labeling truth = gcrf::read_labeling(tin);
  if (predicted.size() != truth.size())
    throw input_error("predicted has " + std::to_string(predicted.size()) + " labels, truth has " +
                      std::to_string(truth.size()));
  int k = opt.labels;
  if (k <= 0) {
    for (int v : predicted.labels)
      k = std::max(k, v + 1);
    for (int v : truth.labels)
      k = std::max(k, v + 1);
  }
  const gcrf::MetricsReport report = gcrf::compute_metrics(predicted, truth, k);
  if (opt.format == "csv")
    gcrf::write_metrics_csv(std::cout, report);
  else
    gcrf::write_metrics_table(std::cout, report);
  return 0;
}

struct BenchOptions {
  gcrf::BenchConfig config;
  std::string out = "bench.csv";
};

int run_bench(const BenchOptions& opt)
{
  const auto rows = gcrf::run_benchmark(opt.config);
  {
    auto out = open_out(opt.out);
    gcrf::write_bench_csv(out, rows);
  }
  std::cout << std::left << std::setw(8) << "nodes" << std::setw(10) << "fraction" << std::setw(12) << "qp ms"
            << std::setw(12) << "cqp ms" << std::setw(10) << "speedup" << std::setw(10) << "qp it" << "cqp it\n";
  for (std::size_t r = 0; r + 1 < rows.size(); r += 2) {
    const auto& qp = rows[r];
    const auto& cqp = rows[r + 1];
    std::cout << std::left << std::setw(8) << qp.nodes << std::fixed << std::setprecision(2) << std::setw(10)
              << qp.constraint_fraction << std::setprecision(3) << std::setw(12) << qp.wall_ms << std::setw(12) << cqp.wall_ms
              << std::setprecision(1) << std::setw(10) << qp.wall_ms / cqp.wall_ms << std::setw(10) << qp.iterations
              << cqp.iterations << std::defaultfloat << '\n';
  }
  std::cout << "wrote " << opt.out << '\n';
  return 0;
}

struct ConstraintsOptions {
  std::string cloud;
  std::string projection;
  int nodes = 0;
  gcrf::CloudParams params;
};

int run_constraints(const ConstraintsOptions& opt)
{
  auto cin = open_in(opt.cloud);
  auto pin = open_in(opt.projection);
  const gcrf::PointCloud cloud = gcrf::read_point_cloud(cin);
  const gcrf::NodeProjection projection = gcrf::read_projection(pin);
  const gcrf::ConstraintSets sets = gcrf::build_constraint_sets(cloud, opt.params, projection, opt.nodes);
  std::cout << nlohmann::json(sets.sets).dump() << '\n';
  return 0;
}

}

int main(int argc, char** argv)
{
  CLI::App app{"Globally constrained CRF inference"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "Solve a problem file");
  solve->add_option("problem", solve_opt.problem, "Problem JSON file")->required();
  solve->add_option("--solver", solve_opt.solver, "qp, cqp, lbp or brute")
      ->check(CLI::IsMember({"qp", "cqp", "lbp", "brute"}));
  solve->add_option("--max-iters", solve_opt.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  solve->add_option("--tol", solve_opt.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--seed", solve_opt.seed, "Recorded in the report; all solvers are deterministic");
  solve->add_option("--init", solve_opt.init, "QP start point")->check(CLI::IsMember({"uniform", "softmax"}));
  solve->add_option("--damping", solve_opt.damping, "LBP message damping")->check(CLI::Range(0.0, 0.999));
  solve->add_option("-o,--out", solve_opt.out, "Labeling output (default: <problem>.labels.txt)");
  solve->add_option("--report", solve_opt.report, "Report output (default: <problem>.report.json)");

  SynthOptions synth_opt;
  auto* synth = app.add_subcommand("synth", "Generate a planted synthetic scene");
  synth->add_option("--width", synth_opt.scene.width)->check(CLI::PositiveNumber);
  synth->add_option("--height", synth_opt.scene.height)->check(CLI::PositiveNumber);
  synth->add_option("--objects", synth_opt.scene.num_objects)->check(CLI::NonNegativeNumber);
  synth->add_option("--labels", synth_opt.scene.num_labels)->check(CLI::Range(2, 1000));
  synth->add_option("--noise", synth_opt.scene.noise)->check(CLI::Range(0.0, 1.0));
  synth->add_option("--seed", synth_opt.scene.seed);
  synth->add_option("-o,--out", synth_opt.out, "Problem JSON output");
  synth->add_option("--truth", synth_opt.truth, "Ground-truth labeling (default: <out>.truth.txt)");
  synth->add_option("--cloud", synth_opt.cloud, "Also write the point cloud (x y z per line)");
  synth->add_option("--projection", synth_opt.projection, "Also write the point-to-node projection");

  EvalOptions eval_opt;
  auto* eval = app.add_subcommand("eval", "Score a labeling against ground truth");
  eval->add_option("predicted", eval_opt.predicted)->required();
  eval->add_option("truth", eval_opt.truth)->required();
  eval->add_option("--labels", eval_opt.labels, "Label count (default: inferred)");
  eval->add_option("--format", eval_opt.format)->check(CLI::IsMember({"table", "csv"}));

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "Runtime benchmark of qp against cqp");
  bench->add_option("--sizes", bench_opt.config.sizes)->delimiter(',');
  bench->add_option("--fractions", bench_opt.config.fractions)->delimiter(',');
  bench->add_option("--seed", bench_opt.config.seed);
  bench->add_option("--labels", bench_opt.config.num_labels)->check(CLI::Range(2, 1000));
  bench->add_option("--noise", bench_opt.config.noise)->check(CLI::Range(0.0, 1.0));
  bench->add_option("--repeats", bench_opt.config.repeats)->check(CLI::PositiveNumber);
  bench->add_option("-o,--out", bench_opt.out, "CSV output");

  ConstraintsOptions cons_opt;
  auto* cons = app.add_subcommand("constraints", "Extract constraint sets from a point cloud");
  cons->add_option("--cloud", cons_opt.cloud)->required();
  cons->add_option("--projection", cons_opt.projection)->required();
  cons->add_option("--nodes", cons_opt.nodes)->required()->check(CLI::PositiveNumber);
  cons->add_option("--min-cluster", cons_opt.params.min_cluster_size)->check(CLI::PositiveNumber);
  cons->add_option("--radius", cons_opt.params.cluster_radius)->check(CLI::PositiveNumber);
  cons->add_option("--plane-threshold", cons_opt.params.plane_inlier_threshold)->check(CLI::PositiveNumber);
  cons->add_option("--ransac-iters", cons_opt.params.ransac_iterations)->check(CLI::PositiveNumber);
  cons->add_option("--seed", cons_opt.params.rng_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_input_error;
  }

  try {
    if (*solve)
      return run_solve(solve_opt);
    if (*synth)
      return run_synth(synth_opt);
    if (*eval)
      return run_eval(eval_opt);
    if (*bench)
      return run_bench(bench_opt);
    return run_constraints(cons_opt);
  } catch (const gcrf::schema_error& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return exit_input_error;
  } catch (const gcrf::contract_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return exit_input_error;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return exit_input_error;
  } catch (const gcrf::solver_error& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return exit_solver_error;
  }
}
