#include "gcrf/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gcrf/qp_solver.hpp"
#include "gcrf/scene.hpp"

namespace gcrf {

std::pair<int, int> grid_dims(int nodes)
{
  if (nodes < 1)
    throw contract_error("grid_dims: node count must be positive");
  const double root = std::sqrt(static_cast<double>(nodes));
  std::pair<int, int> best{1, nodes};
  long best_err = std::numeric_limits<long>::max();
  int best_skew = std::numeric_limits<int>::max();
  for (int w = std::max(1, static_cast<int>(std::floor(root / 1.5))); w <= static_cast<int>(std::ceil(root * 1.5)); ++w) {
    const int h = std::max(1, static_cast<int>(std::lround(static_cast<double>(nodes) / w)));
    if (std::max(w, h) > 2 * std::min(w, h))
      continue;
    const long err = std::labs(static_cast<long>(w) * h - nodes);
    const int skew = std::abs(w - h);
    if (err < best_err || (err == best_err && skew <= best_skew)) {
      best = {w, h};
      best_err = err;
      best_skew = skew;
    }
  }
  return best;
}

std::vector<BenchRow> run_benchmark(const BenchConfig& config)
{
  if (config.repeats < 1)
    throw contract_error("run_benchmark: repeats must be at least 1");
  std::vector<BenchRow> rows;
  for (std::size_t si = 0; si < config.sizes.size(); ++si) {
    const auto [w, h] = grid_dims(config.sizes[si]);
    for (std::size_t fi = 0; fi < config.fractions.size(); ++fi) {
      SceneConfig sc;
      sc.width = w;
      sc.height = h;
      sc.num_labels = config.num_labels;
      sc.noise = config.noise;
      sc.seed = config.seed * 1000003ull + si * 101ull + fi;
      sc.coverage = config.fractions[fi];
      sc.max_object_side = std::max(3, static_cast<int>(std::lround(std::min(w, h) / 3.0)));
      sc.min_object_side = std::max(2, sc.max_object_side / 2);
      const PlantedScene scene = generate_scene(sc);
      const ConstraintSets constraints = scene_constraints(scene);

      BenchRow qp{scene.graph.num_nodes(), config.num_labels, config.fractions[fi],
                  static_cast<long>(scene.graph.num_nodes()) * config.num_labels, 0,
                  std::numeric_limits<double>::infinity(), 0.0, "qp"};
      BenchRow cqp = qp;
      cqp.solver = "cqp";
      for (int r = 0; r < config.repeats; ++r) {
        const SolveResult a = solve(scene.graph, scene.potentials);
        qp.iterations = a.report.iterations;
        qp.objective = objective_of_labeling(scene.graph, scene.potentials, extract_labeling(a.marginals));
        qp.wall_ms = std::min(qp.wall_ms, 1e3 * a.report.wall_time.count());

        const ConstrainedSolveResult b = solve_constrained(scene.graph, scene.potentials, constraints);
        cqp.iterations = b.report.iterations;
        cqp.reduced_vars = static_cast<long>(b.num_supernodes) * config.num_labels;
        cqp.objective = objective_of_labeling(scene.graph, scene.potentials, b.labeling);
        cqp.wall_ms = std::min(cqp.wall_ms, 1e3 * b.report.wall_time.count());
      }
      rows.push_back(qp);
      rows.push_back(cqp);
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows)
{
  const auto precision = out.precision(17);
  out << bench_csv_header << '\n';
  for (const BenchRow& r : rows)
    out << r.nodes << ',' << r.labels << ',' << r.constraint_fraction << ',' << r.reduced_vars << ','
        << r.iterations << ',' << r.wall_ms << ',' << r.objective << ',' << r.solver << '\n';
  out.precision(precision);
}

std::vector<BenchRow> read_bench_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line) || line != bench_csv_header)
    throw contract_error("read_bench_csv: missing or unexpected header");
  std::vector<BenchRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      continue;
    std::vector<std::string> fields;
    std::istringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');)
      fields.push_back(f);
    if (fields.size() != 8)
      throw contract_error("read_bench_csv: line " + std::to_string(line_no) + " has " +
                           std::to_string(fields.size()) + " fields");
    try {
      rows.push_back({std::stoi(fields[0]), std::stoi(fields[1]), std::stod(fields[2]), std::stol(fields[3]),
                      std::stoi(fields[4]), std::stod(fields[5]), std::stod(fields[6]), fields[7]});
    } catch (const std::logic_error&) {
      throw contract_error("read_bench_csv: line " + std::to_string(line_no) + " has a malformed number");
    }
  }
  return rows;
}

}
