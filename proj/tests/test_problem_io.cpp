#include <doctest.h>

#include <sstream>

#include "gcrf/problem_io.hpp"
#include "gcrf/scene.hpp"

using namespace gcrf;

namespace {

std::string error_of(const std::string& text)
{
  try {
    parse_problem(text);
  } catch (const schema_error& e) {
    return e.what();
  }
  return "";
}

const char* minimal = R"({"version": 1, "num_labels": 2, "num_nodes": 2,
  "unary": [[1, 0], [0.5, 0.5]],
  "edges": [{"i": 0, "j": 1, "psi": [[1, 0], [0, 1]]}]})";

}

TEST_CASE("problem files")
{
  SUBCASE("minimal document")
  {
    const ProblemFile p = parse_problem(minimal);
    CHECK(p.num_nodes == 2);
    CHECK(p.graph().num_edges() == 1);
    CHECK(p.potentials().pairwise[0] == Matrix(2, 2, {1, 0, 0, 1}));
    CHECK(p.constraints.empty());
    CHECK(p.features.empty());
  }
  SUBCASE("dissimilarity edges derive psi")
  {
    const ProblemFile p = parse_problem(R"({"version": 1, "num_labels": 3, "num_nodes": 2,
      "unary": [[1, 0, 0], [0, 1, 0]], "edges": [{"i": 1, "j": 0, "dis": 0.5}], "constraints": [[0, 1]]})");
    CHECK(p.edges[0].dis == 0.5);
    CHECK(p.edges[0].psi == pairwise_potential(0.5, 3));
    CHECK(p.constraints.sets == std::vector<std::vector<int>>{{0, 1}});
  }
  SUBCASE("planted scene round trip")
  {
    SceneConfig cfg;
    cfg.width = 12;
    cfg.height = 10;
    cfg.num_objects = 3;
    const PlantedScene s = generate_scene(cfg);
    const ProblemFile p = make_problem(s.graph, s.potentials, scene_constraints(s), s.features, s.edge_dissimilarity);
    const std::string text = serialize_problem(p);
    const ProblemFile back = parse_problem(text);
    CHECK(back == p);
    CHECK(back.potentials() == s.potentials);
    CHECK(serialize_problem(back) == text);
  }
  SUBCASE("explicit psi round trip")
  {
    const ProblemFile p = parse_problem(minimal);
    CHECK(parse_problem(serialize_problem(p)) == p);
  }
  SUBCASE("schema errors name the field")
  {
    CHECK(error_of("{").find("parse error") != std::string::npos);
    CHECK(error_of(R"({"num_labels": 2})").find("version") == 0);
    CHECK(error_of(R"({"version": 9, "num_labels": 2, "num_nodes": 1, "unary": [[0, 0]], "edges": []})")
              .find("version") == 0);
    CHECK(error_of(R"({"version": 1, "num_labels": 2, "num_nodes": 2, "unary": [[0, 0], [0]], "edges": []})")
              .find("unary[1]") == 0);
    CHECK(error_of(R"({"version": 1, "num_labels": 2, "num_nodes": 2, "unary": [[0, 0], [0, 0]],
                       "edges": [{"i": 0, "j": 5, "dis": 0.1}]})")
              .find("edges[0].j") == 0);
    CHECK(error_of(R"({"version": 1, "num_labels": 2, "num_nodes": 2, "unary": [[0, 0], [0, 0]],
                       "edges": [{"i": 0, "j": 1, "psi": [[0, "x"], [0, 0]]}]})")
              .find("edges[0].psi[0][1]") == 0);
    CHECK(error_of(R"({"version": 1, "num_labels": 2, "num_nodes": 2, "unary": [[0, 0], [0, 0]],
                       "edges": [{"i": 0, "j": 1}]})")
              .find("edges[0]") == 0);
    CHECK(error_of(R"({"version": 1, "num_labels": 2, "num_nodes": 3, "unary": [[0, 0], [0, 0], [0, 0]],
                       "edges": [], "constraints": [[0, 1], [1, 2]]})")
              .find("constraints") == 0);
    CHECK(error_of(R"({"version": 1, "num_labels": 2, "num_nodes": 2, "unary": [[0, 0], [0, 0]],
                       "edges": [{"i": 0, "j": 1, "dis": 0.1}, {"i": 1, "j": 0, "dis": 0.2}]})")
              .find("edges") == 0);
  }
}

TEST_CASE("labeling files")
{
  std::stringstream ss;
  write_labeling(ss, Labeling{{3, 0, 2}});
  CHECK(ss.str() == "3\n0\n2\n");
  CHECK(read_labeling(ss).labels == std::vector<int>{3, 0, 2});
  std::istringstream bad("1\nfoo\n");
  CHECK_THROWS_AS(read_labeling(bad), schema_error);
}
