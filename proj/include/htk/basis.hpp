#pragma once
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "htk/modular.hpp"

namespace htk::linalg {

// Reduced column-echelon basis over GF(p); supports the membership test that
// defines the co-shadow and the growth process.
struct IncrementalBasis {
  Mont F;
  std::uint64_t rows;
  // pivot row -> reduced column (dense, mont domain, pivot entry = 1)
  std::map<std::uint64_t, std::vector<std::uint64_t>> pivots;

  IncrementalBasis(std::uint64_t rows_, std::uint64_t p) : F(p), rows(rows_) {}

  std::uint64_t rank() const { return pivots.size(); }

  // reduce v in place against the basis; returns the pivot row of the
  // residual or `rows` when v reduces to zero
  std::uint64_t reduce(std::vector<std::uint64_t>& v) const {
    for (const auto& [pr, pc] : pivots) {
      if (v[pr] == 0) continue;
      const std::uint64_t c = v[pr];
      for (std::uint64_t i = pr; i < rows; ++i)
        if (pc[i]) v[i] = F.sub(v[i], F.mul(c, pc[i]));
    }
    for (std::uint64_t i = 0; i < rows; ++i)
      if (v[i]) return i;
    return rows;
  }

  bool in_span(std::span<const std::pair<std::uint64_t, std::int8_t>> col) const {
    std::vector<std::uint64_t> v(rows, 0);
    for (auto& [r, e] : col) v[r] = e > 0 ? F.r1 : F.p - F.r1;
    return reduce(v) == rows;
  }

  // returns true (and grows the basis) iff col is independent of the span
  bool insert(std::span<const std::pair<std::uint64_t, std::int8_t>> col) {
    std::vector<std::uint64_t> v(rows, 0);
    for (auto& [r, e] : col) v[r] = e > 0 ? F.r1 : F.p - F.r1;
    const std::uint64_t pr = reduce(v);
    if (pr == rows) return false;
    const std::uint64_t inv = F.inv(v[pr]);
    for (std::uint64_t i = pr; i < rows; ++i)
      if (v[i]) v[i] = F.mul(inv, v[i]);
    pivots.emplace(pr, std::move(v));
    return true;
  }
};

}  // namespace htk::linalg
