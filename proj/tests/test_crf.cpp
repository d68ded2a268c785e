#include <doctest.h>

#include "gcrf/crf.hpp"
#include "support.hpp"

using namespace gcrf;

namespace {

Matrix mat(std::size_t r, std::size_t c, std::vector<double> v)
{
  return Matrix(r, c, std::move(v));
}

}

TEST_CASE("objective: single unary term")
{
  CrfGraph g(1, 2, {});
  Potentials p{mat(1, 2, {3, 1}), {}};
  CHECK(objective(g, p, Marginals(mat(1, 2, {1, 0}))) == 3.0);
}

TEST_CASE("objective: one edge counts in both directions")
{
  CrfGraph g(2, 2, {{0, 1}});
  Potentials p{Matrix(2, 2, 0.0), {mat(2, 2, {1, 0, 0, 1})}};
  CHECK(objective(g, p, Marginals(mat(2, 2, {1, 0, 1, 0}))) == 2.0);
}

TEST_CASE("objective agrees with the ordered-pair oracle")
{
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    auto [g, p] = testing::random_instance(rng, 5, 3, 0.6, -1.0, 1.0);
    const Marginals mu = testing::random_marginals(rng, 5, 3);
    CHECK(objective(g, p, mu) == doctest::Approx(testing::naive_objective(g, p, mu)).epsilon(1e-12));
  }
}

TEST_CASE("objective is invariant under edge reversal")
{
  std::mt19937_64 rng(12);
  auto [g, p] = testing::random_instance(rng, 6, 3, 0.7);
  std::vector<Edge> flipped;
  Potentials q{p.unary, {}};
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    flipped.push_back({g.edges()[e].j, g.edges()[e].i});
    q.pairwise.push_back(p.pairwise[e].transposed());
  }
  CrfGraph h(6, 3, flipped);
  const Marginals mu = testing::random_marginals(rng, 6, 3);
  CHECK(objective(h, q, mu) == doctest::Approx(objective(g, p, mu)).epsilon(1e-13));
}

TEST_CASE("objective_of_labeling")
{
  SUBCASE("matches one-hot marginals")
  {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) {
      auto [g, p] = testing::random_instance(rng, 6, 3, 0.5, -2.0, 2.0);
      Labeling y;
      for (int i = 0; i < 6; ++i)
        y.labels.push_back(static_cast<int>(rng() % 3));
      CHECK(std::abs(objective_of_labeling(g, p, y) - objective(g, p, Marginals::one_hot(y, 3))) < 1e-12);
    }
  }
  SUBCASE("single node")
  {
    CrfGraph g(1, 2, {});
    Potentials p{mat(1, 2, {3, 1}), {}};
    CHECK(objective_of_labeling(g, p, Labeling{{1}}) == 1.0);
  }
  SUBCASE("Potts chain")
  {
    const Matrix potts = mat(2, 2, {1, 0, 0, 1});
    CrfGraph g(3, 2, {{0, 1}, {1, 2}});
    Potentials p{Matrix(3, 2, 0.0), {potts, potts}};
    CHECK(objective_of_labeling(g, p, Labeling{{1, 1, 1}}) == 4.0);
  }
  SUBCASE("out-of-range label")
  {
    CrfGraph g(1, 2, {});
    Potentials p{mat(1, 2, {3, 1}), {}};
    CHECK_THROWS_AS(objective_of_labeling(g, p, Labeling{{2}}), contract_error);
    CHECK_THROWS_AS(objective_of_labeling(g, p, Labeling{{0, 0}}), contract_error);
  }
}

TEST_CASE("extract_labeling")
{
  CHECK(extract_labeling(Marginals(mat(1, 2, {0, 1}))).labels == std::vector<int>{1});
  CHECK(extract_labeling(Marginals(mat(1, 2, {0.5, 0.5}))).labels == std::vector<int>{0});
  CHECK(extract_labeling(Marginals(mat(1, 3, {0.2, 0.3, 0.5}))).labels == std::vector<int>{2});
}

TEST_CASE("graph construction rejects malformed input")
{
  CHECK_THROWS_AS(CrfGraph(3, 1, {}), contract_error);
  CHECK_THROWS_AS(CrfGraph(3, 2, {{0, 0}}), contract_error);
  CHECK_THROWS_AS(CrfGraph(3, 2, {{0, 3}}), contract_error);
  CHECK_THROWS_AS(CrfGraph(3, 2, {{0, 1}, {1, 0}}), contract_error);
  CHECK_NOTHROW(CrfGraph(3, 2, {{0, 1}, {1, 2}}));
}

TEST_CASE("incidence lists")
{
  CrfGraph g(4, 2, {{0, 1}, {2, 1}, {1, 3}});
  const auto inc = g.incident(1);
  REQUIRE(inc.size() == 3);
  CHECK(inc[0].neighbour == 0);
  CHECK_FALSE(inc[0].is_first);
  CHECK(inc[1].neighbour == 2);
  CHECK(inc[2].neighbour == 3);
  CHECK(inc[2].is_first);
  CHECK(g.incident(0).size() == 1);
}

TEST_CASE("potential and marginal validation")
{
  CrfGraph g(2, 2, {{0, 1}});
  CHECK_THROWS_AS((Potentials{Matrix(2, 3), {Matrix(2, 2)}}.validate(g)), contract_error);
  CHECK_THROWS_AS((Potentials{Matrix(2, 2), {}}.validate(g)), contract_error);
  CHECK_THROWS_AS((Potentials{Matrix(2, 2), {Matrix(2, 2, NAN)}}.validate(g)), contract_error);
  CHECK_THROWS_AS(objective(g, Potentials{Matrix(2, 2), {Matrix(2, 2)}}, Marginals::uniform(3, 2)), contract_error);

  CHECK(Marginals::uniform(3, 4).is_valid());
  CHECK_FALSE(Marginals(mat(1, 2, {0.7, 0.7})).is_valid());
  CHECK_FALSE(Marginals(mat(1, 2, {1.5, -0.5})).is_valid());
  CHECK(Marginals::one_hot(Labeling{{1, 0}}, 2).values() == mat(2, 2, {0, 1, 1, 0}));
}
