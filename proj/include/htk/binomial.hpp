#pragma once
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace htk::core {

namespace detail {

struct ChooseTable {
  // Pascal triangle with saturation; rows 0..n_max, cols 0..k_max.
  static constexpr int kNMax = 1200;
  static constexpr int kKMax = 16;
  std::vector<std::uint64_t> t;

  ChooseTable() : t(static_cast<std::size_t>(kNMax + 1) * (kKMax + 1), 0) {
    constexpr std::uint64_t inf = std::numeric_limits<std::uint64_t>::max();
    auto at = [&](int n, int k) -> std::uint64_t& {
      return t[static_cast<std::size_t>(n) * (kKMax + 1) + k];
    };
    for (int n = 0; n <= kNMax; ++n) {
      at(n, 0) = 1;
      for (int k = 1; k <= kKMax; ++k) {
        if (k > n) {
          at(n, k) = 0;
          continue;
        }
        std::uint64_t a = at(n - 1, k - 1), b = at(n - 1, k);
        at(n, k) = (a == inf || b == inf || a > inf - b) ? inf : a + b;
      }
    }
  }
};

inline const ChooseTable& choose_table() {
  static const ChooseTable tbl;
  return tbl;
}

}  // namespace detail

// C(n,k), saturating at UINT64_MAX. Only small k is ever needed.
inline std::uint64_t choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  assert(n <= detail::ChooseTable::kNMax && k <= detail::ChooseTable::kKMax);
  return detail::choose_table()
      .t[static_cast<std::size_t>(n) * (detail::ChooseTable::kKMax + 1) + k];
}

inline double log_choose(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// Colexicographic rank of a strictly increasing k-subset of [0,n):
// rank = sum_i C(v_i, i+1).
inline std::uint64_t colex_rank(std::span<const std::int32_t> face) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < face.size(); ++i)
    r += choose(face[i], static_cast<std::int64_t>(i) + 1);
  return r;
}

// Inverse of colex_rank; writes k strictly increasing vertices into out.
inline void colex_unrank(std::uint64_t rank, int k, std::int32_t* out) {
  for (int i = k; i >= 1; --i) {
    // largest v with C(v,i) <= rank; v >= i-1
    std::int32_t lo = i - 1, hi = i;
    while (choose(hi, i) <= rank) hi *= 2;
    while (lo + 1 < hi) {
      std::int32_t mid = lo + (hi - lo) / 2;
      if (choose(mid, i) <= rank)
        lo = mid;
      else
        hi = mid;
    }
    out[i - 1] = lo;
    rank -= choose(lo, i);
  }
}

}  // namespace htk::core
