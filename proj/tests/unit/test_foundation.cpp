#include <catch2/catch_amalgamated.hpp>
#include <gmpxx.h>

#include "htk/binomial.hpp"
#include "htk/modular.hpp"
#include "htk/rng.hpp"

using namespace htk;

TEST_CASE("binomial table basics") {
  CHECK(core::choose(0, 0) == 1);
  CHECK(core::choose(5, 2) == 10);
  CHECK(core::choose(150, 3) == 551300);
  CHECK(core::choose(149, 2) == 11026);
  CHECK(core::choose(4, 7) == 0);
  CHECK(core::choose(20, 10) == 184756);
  // saturation instead of overflow
  CHECK(core::choose(1100, 16) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("log_choose matches exact values") {
  CHECK_THAT(core::log_choose(20, 10), Catch::Matchers::WithinAbs(std::log(184756.0), 1e-9));
  CHECK(core::log_choose(3, 5) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("colex rank/unrank round trip") {
  // colex order on 3-subsets starts {0,1,2},{0,1,3},{0,2,3},{1,2,3},{0,1,4},...
  std::vector<std::int32_t> f012{0, 1, 2}, f013{0, 1, 3}, f023{0, 2, 3}, f123{1, 2, 3},
      f014{0, 1, 4};
  CHECK(core::colex_rank(f012) == 0);
  CHECK(core::colex_rank(f013) == 1);
  CHECK(core::colex_rank(f023) == 2);
  CHECK(core::colex_rank(f123) == 3);
  CHECK(core::colex_rank(f014) == 4);

  for (int n = 3; n <= 12; ++n)
    for (int k = 1; k <= 4 && k <= n; ++k) {
      const std::uint64_t total = core::choose(n, k);
      for (std::uint64_t r = 0; r < total; ++r) {
        std::vector<std::int32_t> face(k);
        core::colex_unrank(r, k, face.data());
        for (int i = 1; i < k; ++i) REQUIRE(face[i] > face[i - 1]);
        REQUIRE(face[k - 1] < n);
        REQUIRE(core::colex_rank({face.data(), face.size()}) == r);
      }
    }
}

TEST_CASE("certification primes are prime") {
  mpz_class p1(std::to_string(linalg::kPrime1)), p2(std::to_string(linalg::kPrime2));
  CHECK(mpz_probab_prime_p(p1.get_mpz_t(), 40) > 0);
  CHECK(mpz_probab_prime_p(p2.get_mpz_t(), 40) > 0);
  CHECK((linalg::kPrime1 >> 62) == 0);
}

TEST_CASE("montgomery arithmetic") {
  linalg::Mont F(linalg::kPrime1);
  models::Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t a = rng.below(F.p), b = rng.below(F.p);
    std::uint64_t am = F.to(a), bm = F.to(b);
    const std::uint64_t want =
        static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % F.p);
    CHECK(F.from(F.mul(am, bm)) == want);
    CHECK(F.from(F.add(am, bm)) == (a + b) % F.p);
    CHECK(F.from(F.sub(am, bm)) == (a + F.p - b) % F.p);
    if (a != 0) CHECK(F.from(F.mul(F.inv(am), am)) == 1);
  }
  CHECK(F.from(F.to(1)) == 1);
  CHECK(F.to(1) == F.r1);
  CHECK(F.from(F.to_signed(-1)) == F.p - 1);
}

TEST_CASE("rng determinism and substreams") {
  models::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
  models::Rng s1 = models::Rng(42).substream("alpha", 0);
  models::Rng s2 = models::Rng(42).substream("alpha", 1);
  models::Rng s3 = models::Rng(42).substream("beta", 0);
  CHECK(s1.next() != s2.next());
  CHECK(s1.key != s3.key);
  models::Rng s1b = models::Rng(42).substream("alpha", 0);
  s1 = models::Rng(42).substream("alpha", 0);
  for (int i = 0; i < 16; ++i) REQUIRE(s1.next() == s1b.next());
}

TEST_CASE("rng uniform below is in range and unbiased-ish") {
  models::Rng r(1);
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 100000; ++i) ++counts[r.below(10)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);  // ~5 sigma
}

TEST_CASE("poisson sampler mean and variance") {
  models::Rng r(3);
  const double lambda = 2.0;
  const int trials = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < trials; ++i) {
    double x = static_cast<double>(r.poisson(lambda));
    s += x;
    s2 += x * x;
  }
  const double mean = s / trials, var = s2 / trials - mean * mean;
  CHECK_THAT(mean, Catch::Matchers::WithinAbs(lambda, 0.02));
  CHECK_THAT(var, Catch::Matchers::WithinAbs(lambda, 0.05));
}

TEST_CASE("shuffle is a permutation and seed-stable") {
  models::Rng r(9);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  r.shuffle(v);
  std::vector<int> w = v;
  std::sort(w.begin(), w.end());
  for (int i = 0; i < 50; ++i) REQUIRE(w[i] == i);
  models::Rng r2(9);
  std::vector<int> v2(50);
  for (int i = 0; i < 50; ++i) v2[i] = i;
  r2.shuffle(v2);
  CHECK(v == v2);
}
