#include <doctest.h>

#include <sstream>

#include "gcrf/benchmark.hpp"
#include "gcrf/matrix.hpp"

using namespace gcrf;

TEST_CASE("grid_dims")
{
  CHECK(grid_dims(176) == std::pair{16, 11});
  CHECK(grid_dims(1600) == std::pair{40, 40});
  CHECK(grid_dims(1628) == std::pair{44, 37});
  for (int n : {219, 787}) {
    const auto [w, h] = grid_dims(n);
    CHECK(std::abs(w * h - n) <= 5);
    CHECK(w <= 2 * h);
    CHECK(h <= 2 * w);
  }
}

TEST_CASE("benchmark rows")
{
  BenchConfig cfg;
  cfg.sizes = {176};
  cfg.fractions = {0.25, 0.5, 0.75};
  cfg.repeats = 1;
  const auto rows = run_benchmark(cfg);
  REQUIRE(rows.size() == 6);
  long previous = 0;
  for (std::size_t r = 0; r < rows.size(); r += 2) {
    CHECK(rows[r].solver == "qp");
    CHECK(rows[r + 1].solver == "cqp");
    CHECK(rows[r].nodes == 176);
    CHECK(rows[r].labels == 7);
    CHECK(rows[r].reduced_vars == 176 * 7);
    CHECK(rows[r + 1].reduced_vars < rows[r].reduced_vars);
    if (r > 0)
      CHECK(rows[r + 1].reduced_vars < previous);
    previous = rows[r + 1].reduced_vars;
  }

  SUBCASE("deterministic apart from timings")
  {
    auto again = run_benchmark(cfg);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      again[r].wall_ms = rows[r].wall_ms;
      CHECK(again[r] == rows[r]);
    }
  }
  SUBCASE("csv round trip")
  {
    std::stringstream ss;
    write_bench_csv(ss, rows);
    CHECK(ss.str().rfind(std::string(bench_csv_header) + "\n", 0) == 0);
    CHECK(read_bench_csv(ss) == rows);
  }
  SUBCASE("malformed csv")
  {
    std::istringstream bad(std::string(bench_csv_header) + "\n1,2,3\n");
    CHECK_THROWS_AS(read_bench_csv(bad), contract_error);
  }
}
