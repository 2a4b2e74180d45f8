#pragma once
#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "htk/complex.hpp"

namespace htk::linalg {

// Column-major sparse matrix with small integer entries (boundary operators:
// entries ±1, d+1 per column, row indices strictly increasing).
struct SparseSignMatrix {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<std::uint64_t> col_ptr;  // size cols+1
  std::vector<std::uint64_t> row_idx;  // size nnz
  std::vector<std::int8_t> entry;      // size nnz

  // declares the shape; columns are appended with push_col (or col_ptr is
  // assigned wholesale for an explicit zero matrix)
  SparseSignMatrix() : col_ptr(1, 0) {}
  SparseSignMatrix(std::uint64_t r, std::uint64_t c) : rows(r), cols(c), col_ptr(1, 0) {}

  std::uint64_t nnz() const { return row_idx.size(); }

  // append column given (row, entry) pairs with increasing rows
  void push_col(std::span<const std::pair<std::uint64_t, std::int8_t>> es) {
    for (auto& [r, e] : es) {
      row_idx.push_back(r);
      entry.push_back(e);
    }
    col_ptr.push_back(row_idx.size());
  }
};

// rows: all C(n,d) (d-1)-faces in colex order; cols: X's d-faces in colex
// order; column of a face lists its facets with alternating signs.
inline SparseSignMatrix build_boundary_matrix(const core::SimplicialComplex& X) {
  SparseSignMatrix M;
  M.rows = core::choose(X.n, X.d);
  M.cols = X.faces.size();
  const int k = X.d + 1;
  M.col_ptr.assign(1, 0);
  M.row_idx.reserve(M.cols * k);
  M.entry.reserve(M.cols * k);
  std::vector<std::int32_t> face(k), sub(k - 1);
  // (row, sign) pairs per column, sorted by row
  std::vector<std::pair<std::uint64_t, std::int8_t>> col(k);
  for (std::uint64_t idx = 0; idx < M.cols; ++idx) {
    core::colex_unrank(X.faces[idx], k, face.data());
    for (int i = 0; i < k; ++i) {
      int s = 0;
      for (int j = 0; j < k; ++j)
        if (j != i) sub[s++] = face[j];
      col[i] = {core::colex_rank(std::span<const std::int32_t>(sub.data(), sub.size())),
                static_cast<std::int8_t>(i % 2 == 0 ? 1 : -1)};
    }
    // dropping a smaller vertex yields a colex-smaller facet only in part;
    // sort to keep row indices increasing
    std::sort(col.begin(), col.end());
    for (auto& [r, e] : col) {
      M.row_idx.push_back(r);
      M.entry.push_back(e);
    }
    M.col_ptr.push_back(M.row_idx.size());
  }
  return M;
}

}  // namespace htk::linalg
