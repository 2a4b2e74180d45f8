#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "htk/chain.hpp"
#include "htk/complex.hpp"
#include "htk/io.hpp"
#include "htk/sparse.hpp"

using namespace htk;
using core::FaceKey;

static core::SimplicialComplex star2(std::int32_t n) {
  // all triangles through vertex 0 on [0,n)
  std::vector<FaceKey> faces;
  for (std::int32_t a = 1; a < n; ++a)
    for (std::int32_t b = a + 1; b < n; ++b) faces.push_back({0, a, b});
  return core::SimplicialComplex::from_faces(n, 2, faces);
}

TEST_CASE("face_rank examples") {
  CHECK(core::face_rank(FaceKey{0, 1, 2}, 4) == 0);
  CHECK(core::face_rank(FaceKey{1, 2, 3}, 4) == 3);
  CHECK(core::face_rank(FaceKey{0, 2, 3}, 5) == 2);
  CHECK_THROWS_AS(core::face_rank(FaceKey{2, 1}, 5), std::invalid_argument);
  CHECK_THROWS_AS(core::face_rank(FaceKey{0, 5}, 5), std::invalid_argument);
  CHECK(core::face_unrank(2, 3, 5) == FaceKey{0, 2, 3});
  CHECK_THROWS_AS(core::face_unrank(10, 3, 5), std::invalid_argument);
}

TEST_CASE("face_unrank round trip exhaustive n<=12") {
  for (int n = 2; n <= 12; ++n)
    for (int k = 1; k <= 3 && k <= n; ++k)
      for (std::uint64_t r = 0; r < core::choose(n, k); ++r)
        REQUIRE(core::face_rank(core::face_unrank(r, k, n), n) == r);
}

TEST_CASE("cofaces") {
  auto cf = core::cofaces(FaceKey{0, 1}, 4);
  REQUIRE(cf.size() == 2);
  CHECK(cf[0] == FaceKey{0, 1, 2});
  CHECK(cf[1] == FaceKey{0, 1, 3});
  auto cf2 = core::cofaces(FaceKey{2, 3}, 4);
  REQUIRE(cf2.size() == 2);
  CHECK(cf2[0] == FaceKey{0, 2, 3});
  CHECK(cf2[1] == FaceKey{1, 2, 3});
}

TEST_CASE("boundary chain and dd=0") {
  core::SignedChain b = core::boundary_chain(FaceKey{0, 1, 2});
  REQUIRE(b.terms.size() == 3);
  CHECK(b.terms.at(FaceKey{1, 2}) == 1);
  CHECK(b.terms.at(FaceKey{0, 2}) == -1);
  CHECK(b.terms.at(FaceKey{0, 1}) == 1);
  CHECK(core::boundary_chain(core::boundary_chain(FaceKey{0, 1, 2})).zero());
  core::SignedChain e = core::boundary_chain(FaceKey{0, 1});
  CHECK(e.terms.at(FaceKey{1}) == 1);
  CHECK(e.terms.at(FaceKey{0}) == -1);
  CHECK(core::boundary_chain(FaceKey{3}).zero());
  // dd = 0 for a handful of larger faces
  for (auto f : {FaceKey{0, 1, 2, 3}, FaceKey{1, 3, 4, 6}, FaceKey{0, 2, 4, 5, 7}})
    CHECK(core::boundary_chain(core::boundary_chain(f)).zero());
}

TEST_CASE("boundary matrix shape and content") {
  core::SimplicialComplex all4 = core::SimplicialComplex::from_faces(
      4, 2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  linalg::SparseSignMatrix M = linalg::build_boundary_matrix(all4);
  CHECK(M.rows == 6);
  CHECK(M.cols == 4);
  for (std::uint64_t j = 0; j < M.cols; ++j) {
    REQUIRE(M.col_ptr[j + 1] - M.col_ptr[j] == 3);
    int abs_sum = 0;
    for (std::uint64_t t = M.col_ptr[j]; t < M.col_ptr[j + 1]; ++t) {
      abs_sum += std::abs(M.entry[t]);
      if (t > M.col_ptr[j]) REQUIRE(M.row_idx[t] > M.row_idx[t - 1]);
    }
    CHECK(abs_sum == 3);
  }
  // single edge d=1, n=2
  core::SimplicialComplex edge = core::SimplicialComplex::from_faces(2, 1, {{0, 1}});
  linalg::SparseSignMatrix E = linalg::build_boundary_matrix(edge);
  CHECK(E.rows == 2);
  CHECK(E.cols == 1);
  REQUIRE(E.nnz() == 2);
  CHECK(E.entry[0] == -1);  // row {0} gets -1, row {1} gets +1
  CHECK(E.entry[1] == 1);
}

TEST_CASE("complex io round trip") {
  core::SimplicialComplex s = star2(5);
  std::stringstream ss;
  core::write_complex(s, ss);
  core::SimplicialComplex t = core::read_complex(ss);
  CHECK(s == t);
}

TEST_CASE("complex io errors carry line numbers") {
  {
    std::stringstream ss("dim=2 n=5\n0 1 2\n0 1 2\n");
    try {
      core::read_complex(ss);
      FAIL("expected duplicate-face error");
    } catch (const core::ParseError& e) {
      CHECK(e.line == 3);
    }
  }
  {
    std::stringstream ss("dim=2 n=5\n# comment\n\n2 1 3\n");
    try {
      core::read_complex(ss);
      FAIL("expected unsorted error");
    } catch (const core::ParseError& e) {
      CHECK(e.line == 4);
    }
  }
  {
    std::stringstream ss("dim=2\n");
    CHECK_THROWS_AS(core::read_complex(ss), core::ParseError);
  }
  {
    std::stringstream ss("dim=2 n=5\n0 1\n");
    CHECK_THROWS_AS(core::read_complex(ss), core::ParseError);
  }
  {  // empty face list is a valid complex
    std::stringstream ss("dim=2 n=5\n# nothing\n");
    core::SimplicialComplex x = core::read_complex(ss);
    CHECK(x.n == 5);
    CHECK(x.size() == 0);
  }
}

TEST_CASE("duplicate and malformed faces rejected in construction") {
  CHECK_THROWS_AS(core::SimplicialComplex::from_faces(5, 2, {{0, 1, 2}, {0, 1, 2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(core::SimplicialComplex::from_faces(5, 2, {{0, 1}}),
                  std::invalid_argument);
}
