#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "htk/models.hpp"

using namespace htk;
using Catch::Approx;

namespace {
core::SimplicialComplex star2(std::int32_t n) {
  std::vector<core::FaceKey> faces;
  for (std::int32_t a = 1; a < n; ++a)
    for (std::int32_t b = a + 1; b < n; ++b) faces.push_back({0, a, b});
  return core::SimplicialComplex::from_faces(n, 2, faces);
}
}  // namespace

TEST_CASE("sample_Y: edge cases and binomial mean") {
  auto full = models::sample_Y(8, 2, 1.0, models::Rng(1));
  CHECK(full.faces.size() == core::choose(8, 3));
  auto empty = models::sample_Y(8, 2, 0.0, models::Rng(1));
  CHECK(empty.faces.empty());
  CHECK_THROWS(models::sample_Y(8, 2, 1.5, models::Rng(1)));

  const int trials = 2000;
  double sum = 0;
  for (int t = 0; t < trials; ++t)
    sum += static_cast<double>(
        models::sample_Y(10, 2, 0.3, models::Rng(77).substream("t", t)).faces.size());
  const double mean = sum / trials;
  const double sigma = std::sqrt(120.0 * 0.3 * 0.7 / trials);
  CHECK(std::fabs(mean - 36.0) < 3 * sigma);
}

TEST_CASE("sample_Y_M: exact count, uniform prefix, determinism") {
  auto x = models::sample_Y_M(10, 2, 25, models::Rng(5));
  CHECK(x.faces.size() == 25);
  CHECK(models::sample_Y_M(10, 2, 0, models::Rng(5)).faces.empty());
  auto all = models::sample_Y_M(10, 2, core::choose(10, 3), models::Rng(5));
  CHECK(all.faces.size() == core::choose(10, 3));
  CHECK_THROWS(models::sample_Y_M(10, 2, core::choose(10, 3) + 1, models::Rng(5)));
  CHECK(models::sample_Y_M(10, 2, 25, models::Rng(5)) == x);
  CHECK_FALSE(models::sample_Y_M(10, 2, 25, models::Rng(6)) == x);
  // single-face marginal is uniform-ish: every rank appears as the M=1 draw
  std::set<std::uint64_t> seen;
  for (int t = 0; t < 4000; ++t)
    seen.insert(models::sample_Y_M(6, 2, 1, models::Rng(9).substream("u", t)).faces[0]);
  CHECK(seen.size() == core::choose(6, 3));
}

TEST_CASE("growth process: trace invariants and final certificate") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    auto tr = models::growth_process(7, 2, models::Rng(seed));
    REQUIRE(tr.faces.size() == core::choose(6, 2));
    REQUIRE(tr.live.size() == tr.faces.size() + 1);
    CHECK(tr.live.front() == core::choose(7, 3));
    CHECK(tr.live.back() == 0);
    for (std::size_t i = 1; i < tr.live.size(); ++i) REQUIRE(tr.live[i] < tr.live[i - 1]);
    REQUIRE(ops::certify(tr.final_complex).is_hypertree);
  }
  // determinism
  auto a = models::growth_process(7, 2, models::Rng(11));
  auto b = models::growth_process(7, 2, models::Rng(11));
  CHECK(a.faces == b.faces);
  CHECK(a.live == b.live);
}

TEST_CASE("growth process: all 16 trees on 4 vertices appear") {
  std::set<std::vector<std::uint64_t>> seen;
  for (int t = 0; t < 50000 && seen.size() < 16; ++t)
    seen.insert(models::growth_process(4, 1, models::Rng(123).substream("runs", t))
                    .final_complex.faces);
  CHECK(seen.size() == 16);
}

TEST_CASE("growth process: entropy of the trace matches the alpha window") {
  const int n = 25, d = 2, runs = 20;
  const double alpha2 = -0.187137761996;
  const double steps = static_cast<double>(core::choose(n - 1, d));
  const double log_total = std::log(static_cast<double>(core::choose(n, d + 1)));
  double acc = 0;
  for (int t = 0; t < runs; ++t) {
    auto tr = models::growth_process(n, d, models::Rng(31).substream("entropy", t));
    double s = 0;
    for (std::size_t i = 0; i + 1 < tr.live.size(); ++i)
      s += std::log(static_cast<double>(tr.live[i]));
    acc += s / steps;
  }
  const double avg = acc / runs;
  CHECK(avg < log_total);
  CHECK(avg > log_total + alpha2 - 0.1);
}

TEST_CASE("1-out sample: structural invariants") {
  auto s = models::sample_1out(12, 2, models::Rng(3));
  const std::uint64_t selectors = core::choose(12, 2);
  REQUIRE(s.selection.size() == selectors);
  std::uint64_t active = 0;
  std::map<std::uint64_t, std::uint64_t> mult;
  for (std::uint64_t tr = 0; tr < selectors; ++tr) {
    const std::uint64_t sr = s.selection[tr];
    REQUIRE(sr != models::OneOutSample::kInactive);  // eps = 0: all active
    ++active;
    ++mult[sr];
    // the chosen coface really contains its selector
    auto tau = core::face_unrank(tr, 2, 12);
    auto sig = core::face_unrank(sr, 3, 12);
    CHECK(std::includes(sig.begin(), sig.end(), tau.begin(), tau.end()));
    CHECK(s.complex.has(sr));
  }
  CHECK(active == selectors);
  CHECK(s.complex.faces.size() == mult.size());
  CHECK(s.complex.faces.size() <= selectors);
  std::uint64_t multi = 0, extra = 0;
  for (auto& [r, m] : mult) {
    multi += m >= 2;
    extra += m - 1;
  }
  CHECK(s.duplicates == multi);
  CHECK(s.complex.faces.size() + extra == active);

  // eps = 1: nothing selected
  auto none = models::sample_1out_eps(12, 2, 1.0, models::Rng(3));
  CHECK(none.complex.faces.empty());
  CHECK(none.duplicates == 0);
}

TEST_CASE("1-out sample: duplicate count matches the collision oracle") {
  const int n = 100, d = 2, trials = 500;
  const double q = 1.0 / (n - d);
  const double p2 = 1.0 - std::pow(1 - q, d + 1) - (d + 1) * q * std::pow(1 - q, d);
  const double expect = static_cast<double>(core::choose(n, d + 1)) * p2;
  double s1 = 0, s2 = 0;
  for (int t = 0; t < trials; ++t) {
    auto s = models::sample_1out(n, d, models::Rng(17).substream("dup", t));
    const double x = static_cast<double>(s.duplicates);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / trials;
  const double sd = std::sqrt((s2 - s1 * s1 / trials) / (trials - 1));
  CHECK(std::fabs(mean - expect) < 3 * sd / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("1-out sample: distinct-face count matches inclusion-exclusion") {
  const int n = 20, d = 2, trials = 400;
  const double q = 1.0 / (n - d);
  const double expect =
      static_cast<double>(core::choose(n, d + 1)) * (1.0 - std::pow(1 - q, d + 1));
  double s1 = 0, s2 = 0;
  for (int t = 0; t < trials; ++t) {
    auto s = models::sample_1out(n, d, models::Rng(19).substream("cnt", t));
    const double x = static_cast<double>(s.complex.faces.size());
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / trials;
  const double sd = std::sqrt((s2 - s1 * s1 / trials) / (trials - 1));
  CHECK(std::fabs(mean - expect) < 3 * sd / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("betti_top on reference complexes") {
  auto sphere = core::SimplicialComplex::from_faces(
      4, 2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  CHECK(models::betti_top(sphere) == 1);
  CHECK(models::betti_top(star2(6)) == 0);
  auto empty = core::SimplicialComplex(5, 2);
  CHECK(models::betti_top(empty) == 0);
}

TEST_CASE("simplex_boundary_count on reference complexes") {
  auto sphere = core::SimplicialComplex::from_faces(
      4, 2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  CHECK(models::simplex_boundary_count(sphere) == 1);
  CHECK(models::simplex_boundary_count(star2(6)) == 0);
  core::SimplicialComplex full(5, 2);
  for (std::uint64_t r = 0; r < core::choose(5, 3); ++r) full.faces.push_back(r);
  CHECK(models::simplex_boundary_count(full) == core::choose(5, 4));
  // beta equals the count on sparse complexes where all cycles are local
  auto rp2 = core::SimplicialComplex::from_faces(
      6, 2,
      {{0, 1, 4}, {0, 1, 5}, {0, 2, 3}, {0, 2, 5}, {0, 3, 4},
       {1, 2, 3}, {1, 2, 4}, {1, 3, 5}, {2, 4, 5}, {3, 4, 5}});
  CHECK(models::simplex_boundary_count(rp2) == 0);
}

TEST_CASE("base-exchange chain: step mechanics") {
  // a single step must preserve the face count and stay a hypertree
  auto init = star2(5);
  auto res = models::base_exchange_chain(5, 2, 1, models::Rng(2), init);
  CHECK(res.state.faces.size() == core::choose(4, 2));
  CHECK(ops::certify(res.state).is_hypertree);
  REQUIRE(res.log.size() == 1);
  CHECK_FALSE(init.has(res.log[0].first));

  // rejects a non-hypertree start
  auto sphere = core::SimplicialComplex::from_faces(
      4, 2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  CHECK_THROWS_AS(models::base_exchange_chain(4, 2, 1, models::Rng(2), sphere),
                  std::invalid_argument);
}

TEST_CASE("base-exchange chain: mixes uniformly over the 3 trees of K3") {
  auto path = core::SimplicialComplex::from_faces(3, 1, {{0, 1}, {0, 2}});
  const std::uint64_t steps = 30000;
  auto res = models::base_exchange_chain(3, 1, steps, models::Rng(4), path);
  REQUIRE(res.visits.size() == 3);
  double chi2 = 0;
  const double expect = static_cast<double>(steps) / 3.0;
  for (auto& [state, cnt] : res.visits) {
    const double dev = static_cast<double>(cnt) - expect;
    chi2 += dev * dev / expect;
  }
  CHECK(chi2 < 9.21034037197618);  // chi^2 99%, df=2
}

TEST_CASE("greedy collapsible process") {
  // d = 1: a maximal acyclic graph is a spanning tree
  auto g1 = models::greedy_collapsible_process(8, 1, models::Rng(21));
  CHECK(g1.face_count == 7);
  CHECK(ops::certify(g1.complex).is_hypertree);

  auto g2 = models::greedy_collapsible_process(7, 2, models::Rng(22));
  CHECK(ops::peel_collapse(g2.complex).collapsible);
  CHECK(g2.face_count <= core::choose(6, 2));
  CHECK(g2.face_count == g2.complex.faces.size());

  // determinism
  auto g3 = models::greedy_collapsible_process(7, 2, models::Rng(22));
  CHECK(g3.complex == g2.complex);
}

TEST_CASE("hypertree probability estimates") {
  auto e41 = models::hypertree_probability(4, 1, 10000, models::Rng(31));
  CHECK(e41.lo <= 0.8);
  CHECK(e41.hi >= 0.8);
  CHECK(e41.estimate == Approx(0.8).margin(0.02));

  auto e52 = models::hypertree_probability(5, 2, 10000, models::Rng(32));
  const double exact = 125.0 / 210.0;
  CHECK(e52.lo <= exact);
  CHECK(e52.hi >= exact);

  auto e62 = models::hypertree_probability(6, 2, 10000, models::Rng(33));
  CHECK(e62.estimate < e52.estimate);
}

TEST_CASE("curve experiment approaches the analytic curve") {
  auto cells = models::curve_experiment(60, 2, {1.0, 5.0}, 4, models::Rng(41));
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].mean_rank_norm == Approx(1.0 / 3).margin(0.08));
  CHECK(cells[0].mean_density > 0.9);
  CHECK(cells[1].mean_rank_norm == Approx(0.993018853532).margin(0.05));
  CHECK(cells[1].mean_density == Approx(0.0215694008429).margin(0.05));
  // determinism
  auto again = models::curve_experiment(60, 2, {1.0, 5.0}, 4, models::Rng(41));
  CHECK(again[1].mean_rank_norm == cells[1].mean_rank_norm);
  CHECK(again[1].mean_density == cells[1].mean_density);
}
