#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "htk/local_limit.hpp"
#include "htk/models.hpp"

using namespace htk;
using Catch::Approx;

namespace {
void check_type_rules(const local_limit::DTreeNode& f, std::int32_t d,
                      std::uint64_t& cells_seen) {
  REQUIRE_FALSE(f.is_cell);
  std::uint64_t type_a = 0;
  for (const auto& cell : f.children) {
    REQUIRE(cell.is_cell);
    ++cells_seen;
    type_a += cell.type == local_limit::TypeTag::A;
    if (!cell.children.empty())
      REQUIRE(cell.children.size() == static_cast<std::size_t>(d));
    std::uint64_t facet_b = 0;
    for (const auto& child : cell.children) {
      facet_b += child.type == local_limit::TypeTag::B;
      check_type_rules(child, d, cells_seen);
    }
    if (!cell.children.empty())
      CHECK(facet_b == (cell.type == local_limit::TypeTag::B ? 1u : 0u));
  }
  if (!f.children.empty())
    CHECK(type_a == (f.type == local_limit::TypeTag::A ? 1u : 0u));
}
}  // namespace

TEST_CASE("sample_Bd: truncation and type rules") {
  auto leaf = local_limit::sample_Bd(2, 0, models::Rng(1));
  CHECK_FALSE(leaf.is_cell);
  CHECK(leaf.type == local_limit::TypeTag::A);
  CHECK(leaf.children.empty());

  for (std::int32_t d : {2, 3}) {
    std::uint64_t cells = 0;
    for (int t = 0; t < 10000; ++t)
      check_type_rules(local_limit::sample_Bd(d, 2, models::Rng(7).substream("s", t)), d,
                       cells);
    CHECK(cells > 0);
  }
}

TEST_CASE("sample_Bd: root cell count is 1 + Poisson(d)") {
  const std::int32_t d = 2;
  const int trials = 100000;
  double sum = 0;
  for (int t = 0; t < trials; ++t)
    sum += static_cast<double>(
        local_limit::sample_Bd(d, 1, models::Rng(11).substream("m", t)).children.size());
  const double mean = sum / trials;
  const double sigma3 = 3 * std::sqrt(static_cast<double>(d) / trials);
  CHECK(std::fabs(mean - (1.0 + d)) < sigma3);
}

TEST_CASE("encoders agree on a handcrafted two-triangle ball") {
  // {0,1,2} and {1,2,3}, rooted at the edge {0,1}
  auto X = core::SimplicialComplex::from_faces(5, 2, {{0, 1, 2}, {1, 2, 3}});
  const std::uint64_t root = core::face_rank(std::vector<std::int32_t>{0, 1}, 5);
  CHECK(local_limit::encode_ball(X, root, 0) == "f");
  CHECK(local_limit::encode_ball(X, root, 1) == "[(ff)]");
  CHECK(local_limit::encode_ball(X, root, 2) == "[([(ff)][])]");

  local_limit::DTreeNode tree;  // same shape, built by hand
  local_limit::DTreeNode cell, inner_cell, f_deg1, f_deg2, leaf;
  leaf.is_cell = false;
  inner_cell.is_cell = true;
  inner_cell.children = {leaf, leaf};
  f_deg1.is_cell = false;
  f_deg2.is_cell = false;
  f_deg2.children = {inner_cell};
  cell.is_cell = true;
  cell.children = {f_deg1, f_deg2};
  tree.children = {cell};
  CHECK(local_limit::encode_tree(tree, 2) == "[([(ff)][])]");
  CHECK(local_limit::encode_tree(tree, 1) == "[(ff)]");
}

TEST_CASE("neighborhood census: radius 0 and 1") {
  auto X = models::sample_1out(200, 2, models::Rng(55)).complex;
  auto r0 = local_limit::neighborhood_census(X, 0, 500, models::Rng(56), 500);
  REQUIRE(r0.rows.size() == 1);
  CHECK(r0.tv == 0.0);

  auto r1 = local_limit::neighborhood_census(X, 1, 10000, models::Rng(57), 100000);
  CHECK(r1.tv < 0.05);
  double emp = 0, lim = 0;
  for (const auto& row : r1.rows) {
    emp += row.empirical;
    lim += row.limit;
  }
  CHECK(emp == Approx(1.0));
  CHECK(lim == Approx(1.0));
  CHECK_THROWS(local_limit::neighborhood_census(X, 3, 10, models::Rng(58)));
}

TEST_CASE("neighborhood census: TV shrinks with n and radius 2 runs") {
  auto X50 = models::sample_1out(50, 2, models::Rng(60)).complex;
  auto X200 = models::sample_1out(200, 2, models::Rng(61)).complex;
  // same master seed so the limit-side sample is shared by both reports
  auto c50 = local_limit::neighborhood_census(X50, 1, 40000, models::Rng(62), 100000);
  auto c200 = local_limit::neighborhood_census(X200, 1, 40000, models::Rng(62), 100000);
  CHECK(c200.tv < c50.tv);

  auto c2 = local_limit::neighborhood_census(X50, 2, 2000, models::Rng(63), 20000);
  CHECK(c2.rows.size() > 3);
  CHECK(c2.tv < 0.8);
  for (const auto& row : c2.rows) CHECK(row.empirical + row.limit > 0);
}

TEST_CASE("solve_ab: d=2 and d=3 branches with residuals") {
  for (std::int32_t d : {2, 3}) {
    auto fps = local_limit::solve_ab(d);
    REQUIRE(fps.size() == 3);
    for (const auto& fp : fps) {
      CHECK(std::fabs(fp.resid_a) < 1e-12);
      CHECK(std::fabs(fp.resid_b) < 1e-12);
      CHECK(local_limit::expected_X_formula(fp.a, fp.b, d) <= 1e-12);
    }
    CHECK(fps[0].branch == "trivial");
    CHECK(fps[0].a == 0.0);
    CHECK(fps[1].branch == "nontrivial");
    CHECK(fps[2].a == 1.0);
    CHECK(fps[2].b == 1.0);
  }
  auto f2 = local_limit::solve_ab(2);
  CHECK(f2[0].b == Approx(0.20318786997998).epsilon(1e-10));
  CHECK(f2[1].a == Approx(0.367503567339596).epsilon(1e-9));
  CHECK(f2[1].b == Approx(0.612558765822444).epsilon(1e-9));
  auto f3 = local_limit::solve_ab(3);
  CHECK(f3[0].b == Approx(0.0595202092926404).epsilon(1e-10));
  CHECK(f3[1].a == Approx(0.30784280059499).epsilon(1e-9));
  CHECK(f3[1].b == Approx(0.460566569409075).epsilon(1e-9));
  CHECK_THROWS(local_limit::solve_ab(1));
}

TEST_CASE("expected_X_formula reference values") {
  auto f2 = local_limit::solve_ab(2);
  CHECK(local_limit::expected_X_formula(0.0, f2[0].b, 2) == Approx(0.0).margin(1e-15));
  CHECK(local_limit::expected_X_formula(1.0, 1.0, 2) == 0.0);
  CHECK(local_limit::expected_X_formula(f2[1].a, f2[1].b, 2) ==
        Approx(-0.05232737606).margin(1e-9));
  auto f3 = local_limit::solve_ab(3);
  CHECK(local_limit::expected_X_formula(f3[1].a, f3[1].b, 3) ==
        Approx(-0.1218875596).margin(1e-9));
  CHECK_THROWS(local_limit::expected_X_formula(-0.1, 0.5, 2));
}

TEST_CASE("population dynamics: zero absorption and range invariants") {
  auto zero = local_limit::population_dynamics(2, 2000, 10, models::Rng(70), 0.0);
  CHECK(zero.E_X == 0.0);
  CHECK(zero.Pr_X_positive == 0.0);
  for (double h : zero.history) CHECK(h == 0.0);
  // Y keeps its atom at 1 (empty Poisson sum), so only the X pool absorbs
  CHECK(zero.E_Y > 0.0);

  auto run = local_limit::population_dynamics(2, 5000, 40, models::Rng(71));
  REQUIRE(run.history.size() == 40);
  CHECK(run.E_X == Approx(run.history.back()));
  CHECK(run.E_X < run.history.front());
  CHECK(run.Pr_X_positive == 1.0);  // exact zeros can never appear from all-ones
  for (double x : run.state.pool_X) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
  for (double y : run.state.pool_Y) {
    CHECK(y >= 0.0);
    CHECK(y <= 1.0);
  }
}

TEST_CASE("population dynamics: bit-reproducible and drifting toward zero") {
  auto a = local_limit::population_dynamics(2, 3000, 25, models::Rng(72));
  auto b = local_limit::population_dynamics(2, 3000, 25, models::Rng(72));
  CHECK(a.E_X == b.E_X);
  CHECK(a.E_Y == b.E_Y);
  CHECK(a.history == b.history);
  CHECK(a.state.pool_X == b.state.pool_X);

  auto c = local_limit::population_dynamics(2, 3000, 25, models::Rng(73));
  CHECK_FALSE(c.E_X == a.E_X);  // different seed, different pool

  CHECK(a.E_X < 0.1);  // well on its way to the E[X] = 0 limit
}
