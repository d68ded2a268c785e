#ifndef GCRF_BENCHMARK_HPP
#define GCRF_BENCHMARK_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gcrf {

struct BenchConfig {
  std::vector<int> sizes{176, 219, 787, 1628};
  std::vector<double> fractions{0.25, 0.5, 0.75};
  std::uint64_t seed = 1;
  int num_labels = 7;
  double noise = 0.6;
  /// Each solve is timed this many times; the fastest run is reported.
  int repeats = 3;
};

struct BenchRow {
  int nodes = 0;
  int labels = 0;
  double constraint_fraction = 0.0;
  long reduced_vars = 0;
  int iterations = 0;
  double wall_ms = 0.0;
  double objective = 0.0;
  std::string solver;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

/// Grid closest to `nodes` with aspect ratio at most 2, preferring exact
/// factorisations, then the squarest shape, then width >= height.
std::pair<int, int> grid_dims(int nodes);

/// For every (size, fraction): one planted scene whose objects cover at least
/// `fraction` of the nodes. Object sides scale with the grid (up to a third of
/// its shorter side), so finer grids look like the same scene at a finer
/// segmentation rather than a scene with more objects. Each scene is solved
/// with "qp" (unconstrained) and "cqp" (constraints from the scene's cloud).
/// Two rows per cell, qp first.
std::vector<BenchRow> run_benchmark(const BenchConfig& config);

inline constexpr const char* bench_csv_header =
    "nodes,labels,constraint_fraction,reduced_vars,iterations,wall_ms,objective,solver";

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
std::vector<BenchRow> read_bench_csv(std::istream& in);

}

#endif
