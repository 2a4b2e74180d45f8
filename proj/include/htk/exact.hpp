#pragma once
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "htk/rank.hpp"
#include "htk/sparse.hpp"

namespace htk::linalg {

// ---------------------------------------------------------------------------
// Fraction-free (Bareiss) elimination. For boundary-matrix columns every
// intermediate entry is a minor of the input, so with small inputs an int64
// fast path is safe whenever the Hadamard bound fits.
// ---------------------------------------------------------------------------
struct BareissResult {
  std::uint64_t rank = 0;
  // last pivot = determinant of the selected rank x rank submatrix (exact);
  // |det| is a multiple of the torsion order, so |det| = 1 certifies
  // torsion-free without a Smith pass.
  mpz_class last_pivot = 1;
};

inline double log2_hadamard_bound(const SparseSignMatrix& M) {
  double lg = 0;
  for (std::uint64_t j = 0; j < M.cols; ++j) {
    double s = 0;
    for (std::uint64_t t = M.col_ptr[j]; t < M.col_ptr[j + 1]; ++t)
      s += static_cast<double>(M.entry[t]) * M.entry[t];
    if (s > 1) lg += 0.5 * std::log2(s);
  }
  return lg;
}

namespace detail {

template <class Int>
BareissResult bareiss_dense(std::vector<std::vector<Int>>& a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  BareissResult res;
  Int prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    if (piv != r) a[r].swap(a[piv]);  // sign of det irrelevant for |det|
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t k = c + 1; k < cols; ++k)
        a[i][k] = (a[r][c] * a[i][k] - a[i][c] * a[r][k]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  res.rank = r;
  if constexpr (std::is_same_v<Int, long long>)
    res.last_pivot = mpz_class(static_cast<long>(prev < 0 ? -prev : prev));
  else
    res.last_pivot = abs(prev);
  return res;
}

}  // namespace detail

inline BareissResult bareiss(const SparseSignMatrix& M) {
  // int64 path needs products of two minors to fit: 2*log2(bound) < 62
  if (log2_hadamard_bound(M) < 30.0) {
    std::vector<std::vector<long long>> a(M.rows, std::vector<long long>(M.cols, 0));
    for (std::uint64_t j = 0; j < M.cols; ++j)
      for (std::uint64_t t = M.col_ptr[j]; t < M.col_ptr[j + 1]; ++t)
        a[M.row_idx[t]][j] = M.entry[t];
    return detail::bareiss_dense(a);
  }
  std::vector<std::vector<mpz_class>> a(M.rows, std::vector<mpz_class>(M.cols, 0));
  for (std::uint64_t j = 0; j < M.cols; ++j)
    for (std::uint64_t t = M.col_ptr[j]; t < M.col_ptr[j + 1]; ++t)
      a[M.row_idx[t]][j] = static_cast<long>(M.entry[t]);
  return detail::bareiss_dense(a);
}

inline constexpr std::uint64_t kExactColumnGuard = 2000;

// exact rank over the rationals (fraction-free elimination)
inline RankReport rank_exact(const SparseSignMatrix& M, bool override_guard = false) {
  if (M.cols > kExactColumnGuard && !override_guard)
    throw std::invalid_argument(
        "rank_exact: matrix exceeds the " + std::to_string(kExactColumnGuard) +
        "-column guard (pass override to force)");
  RankReport rep;
  rep.rank = bareiss(M).rank;
  rep.method = "exact-rational";
  return rep;
}

// ---------------------------------------------------------------------------
// Smith normal form over Z (dense, big integers, smallest-pivot selection).
// Intended for the small matrices of enumeration/certification work.
// ---------------------------------------------------------------------------
struct SnfReport {
  std::vector<mpz_class> factors;  // d_1 | d_2 | ... , all positive
  mpz_class torsion_order = 1;     // product of factors > 1
  std::uint64_t rank = 0;
};

inline SnfReport smith_normal_form(const SparseSignMatrix& M) {
  const std::size_t rows = M.rows, cols = M.cols;
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols, 0));
  for (std::uint64_t j = 0; j < cols; ++j)
    for (std::uint64_t t = M.col_ptr[j]; t < M.col_ptr[j + 1]; ++t)
      a[M.row_idx[t]][j] = static_cast<long>(M.entry[t]);

  SnfReport rep;
  const std::size_t lim = std::min(rows, cols);
  for (std::size_t t = 0; t < lim; ++t) {
    // smallest-magnitude nonzero entry in the trailing block
    std::size_t pr = rows, pc = cols;
    mpz_class best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (a[i][j] == 0) continue;
        mpz_class m = abs(a[i][j]);
        if (pr == rows || m < best) {
          best = m;
          pr = i;
          pc = j;
        }
      }
    if (pr == rows) break;  // trailing block zero
    std::swap(a[t], a[pr]);
    for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pc]);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        mpz_class q = a[i][t] / a[t][t];  // truncated division
        if (q != 0)
          for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {  // remainder smaller than pivot: swap up, redo
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        mpz_class q = a[t][j] / a[t][t];
        if (q != 0)
          for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][j]);
          clean = false;
        }
      }
      if (!clean) continue;
      // pivot must divide the rest of the block; if not, fold the offending
      // row in and keep reducing
      for (std::size_t i = t + 1; i < rows && clean; ++i)
        for (std::size_t j = t + 1; j < cols && clean; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t jj = t; jj < cols; ++jj) a[t][jj] += a[i][jj];
            clean = false;
          }
    }
    if (a[t][t] < 0) a[t][t] = -a[t][t];
  }

  for (std::size_t t = 0; t < lim && a[t][t] != 0; ++t) {
    rep.factors.push_back(a[t][t]);
    if (a[t][t] > 1) rep.torsion_order *= a[t][t];
  }
  rep.rank = rep.factors.size();
  return rep;
}

}  // namespace htk::linalg
