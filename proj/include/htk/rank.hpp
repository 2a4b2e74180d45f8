#pragma once
#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "htk/modular.hpp"
#include "htk/rng.hpp"
#include "htk/sparse.hpp"

namespace htk::linalg {

struct RankReport {
  std::uint64_t rank = 0;
  std::string method;       // "prime-field" or "exact-rational"
  std::uint64_t prime = 0;  // 0 for exact
  std::uint64_t peeled = 0;
  std::uint64_t core_rows = 0, core_cols = 0;
  bool randomized = false;  // true when the core rank came from a projection
};

// ---------------------------------------------------------------------------
// Degree-1 peeling. A row contained in exactly one surviving column is
// removed together with that column; each such step adds exactly 1 to the
// rank and leaves every other entry untouched, so
//   rank(M) = #removed + rank(core).
// On boundary matrices this is precisely d-collapse (exposed (d-1)-face with
// its unique coface). Column degrees never drop below their original size
// while alive: a removed row's other columns are already dead.
// ---------------------------------------------------------------------------
struct PeelOutcome {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> removed;  // (row, col) in order
  std::vector<std::uint8_t> row_removed, col_removed;
  std::vector<std::uint64_t> free_rows;  // alive rows with no surviving column
  // core = surviving columns over surviving rows of positive degree
  std::uint64_t core_rows = 0, core_cols = 0;
};

namespace detail {
struct RowAdj {
  std::vector<std::uint64_t> ptr, col;
  std::vector<std::int8_t> sign;
};

inline RowAdj build_row_adjacency(const SparseSignMatrix& M) {
  RowAdj A;
  A.ptr.assign(M.rows + 1, 0);
  for (std::uint64_t t = 0; t < M.nnz(); ++t) ++A.ptr[M.row_idx[t] + 1];
  for (std::uint64_t r = 0; r < M.rows; ++r) A.ptr[r + 1] += A.ptr[r];
  A.col.resize(M.nnz());
  A.sign.resize(M.nnz());
  std::vector<std::uint64_t> cur(A.ptr.begin(), A.ptr.end() - 1);
  for (std::uint64_t j = 0; j < M.cols; ++j)
    for (std::uint64_t t = M.col_ptr[j]; t < M.col_ptr[j + 1]; ++t) {
      std::uint64_t r = M.row_idx[t];
      A.col[cur[r]] = j;
      A.sign[cur[r]] = M.entry[t];
      ++cur[r];
    }
  return A;
}
}  // namespace detail

// order_rng, if given, shuffles only the initial queue of exposed rows.
inline PeelOutcome peel_matrix(const SparseSignMatrix& M,
                               models::Rng* order_rng = nullptr) {
  PeelOutcome out;
  out.row_removed.assign(M.rows, 0);
  out.col_removed.assign(M.cols, 0);
  detail::RowAdj adj = detail::build_row_adjacency(M);

  std::vector<std::uint64_t> deg(M.rows);
  std::vector<std::uint64_t> init;
  for (std::uint64_t r = 0; r < M.rows; ++r) {
    deg[r] = adj.ptr[r + 1] - adj.ptr[r];
    if (deg[r] == 1) init.push_back(r);
  }
  if (order_rng) order_rng->shuffle(init);
  std::deque<std::uint64_t> queue(init.begin(), init.end());

  std::vector<std::uint64_t> col_deg(M.cols);
  for (std::uint64_t j = 0; j < M.cols; ++j)
    col_deg[j] = M.col_ptr[j + 1] - M.col_ptr[j];

  while (!queue.empty()) {
    std::uint64_t r = queue.front();
    queue.pop_front();
    if (out.row_removed[r] || deg[r] != 1) continue;
    std::uint64_t piv_col = M.cols;
    for (std::uint64_t t = adj.ptr[r]; t < adj.ptr[r + 1]; ++t)
      if (!out.col_removed[adj.col[t]]) {
        piv_col = adj.col[t];
        break;
      }
    if (piv_col == M.cols) continue;  // stale entry
    out.row_removed[r] = 1;
    out.col_removed[piv_col] = 1;
    out.removed.emplace_back(r, piv_col);
    for (std::uint64_t t = M.col_ptr[piv_col]; t < M.col_ptr[piv_col + 1]; ++t) {
      std::uint64_t r2 = M.row_idx[t];
      if (r2 == r || out.row_removed[r2]) continue;
      if (--deg[r2] == 1) queue.push_back(r2);
    }
  }

  for (std::uint64_t r = 0; r < M.rows; ++r)
    if (!out.row_removed[r]) {
      // recount against surviving columns (deg counts those exactly)
      if (deg[r] == 0)
        out.free_rows.push_back(r);
      else
        ++out.core_rows;
    }
  for (std::uint64_t j = 0; j < M.cols; ++j)
    if (!out.col_removed[j]) ++out.core_cols;
  return out;
}

// Extracted core with compact indices.
struct CoreView {
  std::uint64_t m = 0, k = 0;               // rows, cols
  std::vector<std::uint64_t> col_ptr, row;  // CSC
  std::vector<std::int8_t> sign;
  std::vector<std::uint64_t> row_of_core;  // core row -> original row
  std::vector<std::uint64_t> col_of_core;  // core col -> original col
};

inline CoreView extract_core(const SparseSignMatrix& M, const PeelOutcome& peel) {
  CoreView cv;
  std::vector<std::uint64_t> row_map(M.rows, M.rows);
  // recompute per-row surviving degree to separate free rows
  std::vector<std::uint64_t> deg(M.rows, 0);
  for (std::uint64_t j = 0; j < M.cols; ++j) {
    if (peel.col_removed[j]) continue;
    for (std::uint64_t t = M.col_ptr[j]; t < M.col_ptr[j + 1]; ++t)
      if (!peel.row_removed[M.row_idx[t]]) ++deg[M.row_idx[t]];
  }
  for (std::uint64_t r = 0; r < M.rows; ++r)
    if (!peel.row_removed[r] && deg[r] > 0) {
      row_map[r] = cv.row_of_core.size();
      cv.row_of_core.push_back(r);
    }
  cv.m = cv.row_of_core.size();
  cv.col_ptr.push_back(0);
  for (std::uint64_t j = 0; j < M.cols; ++j) {
    if (peel.col_removed[j]) continue;
    for (std::uint64_t t = M.col_ptr[j]; t < M.col_ptr[j + 1]; ++t) {
      std::uint64_t r = M.row_idx[t];
      if (peel.row_removed[r]) continue;
      cv.row.push_back(row_map[r]);
      cv.sign.push_back(M.entry[t]);
    }
    cv.col_ptr.push_back(cv.row.size());
    cv.col_of_core.push_back(j);
  }
  cv.k = cv.col_of_core.size();
  return cv;
}

// ---------------------------------------------------------------------------
// Dense Gaussian elimination over GF(p) on the core (deterministic).
// ---------------------------------------------------------------------------
inline std::uint64_t dense_rank_core(const CoreView& A, const Mont& F) {
  const std::uint64_t m = A.m;
  // reduced pivot columns, indexed by pivot row
  std::vector<std::vector<std::uint64_t>> piv_col(m);
  std::vector<std::uint8_t> has_piv(m, 0);
  std::uint64_t rank = 0;
  std::vector<std::uint64_t> v(m);
  for (std::uint64_t j = 0; j < A.k; ++j) {
    std::fill(v.begin(), v.end(), 0);
    for (std::uint64_t t = A.col_ptr[j]; t < A.col_ptr[j + 1]; ++t)
      v[A.row[t]] = A.sign[t] > 0 ? F.r1 : F.p - F.r1;
    for (std::uint64_t r = 0; r < m; ++r) {
      if (v[r] == 0) continue;
      if (has_piv[r]) {
        const std::uint64_t c = v[r];
        const auto& pc = piv_col[r];
        v[r] = 0;
        for (std::uint64_t i = r + 1; i < m; ++i)
          if (pc[i]) v[i] = F.sub(v[i], F.mul(c, pc[i]));
      } else {
        const std::uint64_t inv = F.inv(v[r]);
        std::vector<std::uint64_t> pc(m, 0);
        pc[r] = F.r1;
        for (std::uint64_t i = r + 1; i < m; ++i)
          if (v[i]) pc[i] = F.mul(inv, v[i]);
        piv_col[r] = std::move(pc);
        has_piv[r] = 1;
        ++rank;
        break;
      }
    }
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Randomized core rank (and kernel sampling) for large cores.
// With random diagonal preconditioners the minimal polynomial of
//   E = A · D_out · Aᵀ · D_in        (acting on the row space)
// is x·g(x) with deg g = rank(A) with high probability, and
// ker E = D_in⁻¹ · leftnull(A). The degree after stripping the x-factor is
// never above the true rank, so failures only under-report — the same
// one-sidedness as rank mod p. The two sparse passes per column are fused so
// each column's entries are touched while cached, and a single diagonal
// multiply happens on each side.
// ---------------------------------------------------------------------------
struct GramOperator {
  const Mont* F;
  std::uint64_t m = 0, k = 0;
  std::vector<std::uint64_t> col_ptr;
  std::vector<std::uint32_t> row;  // compact indices: cores are far below 2^32
  std::vector<std::int8_t> sign;
  std::vector<std::uint64_t> d_in;   // size m, mont domain, nonzero
  std::vector<std::uint64_t> d_out;  // size k, mont domain, nonzero
  mutable std::vector<std::uint64_t> tmp_m;

  GramOperator(const CoreView& a, const Mont& f, models::Rng& rng)
      : F(&f), m(a.m), k(a.k), col_ptr(a.col_ptr), sign(a.sign), tmp_m(a.m) {
    row.assign(a.row.begin(), a.row.end());
    d_in.resize(m);
    d_out.resize(k);
    for (auto& x : d_in) x = 1 + rng.below(f.p - 1);
    for (auto& x : d_out) x = 1 + rng.below(f.p - 1);
  }

  std::uint64_t dim() const { return m; }

  // out = E x; x and out may not alias
  void apply(const std::uint64_t* x, std::uint64_t* out) const {
    const Mont& f = *F;
    const std::uint64_t p = f.p;
    std::uint64_t* t = tmp_m.data();
    for (std::uint64_t r = 0; r < m; ++r) t[r] = f.mul(d_in[r], x[r]);
    std::fill(out, out + m, 0);
    const std::uint32_t* rw = row.data();
    const std::int8_t* sg = sign.data();
    for (std::uint64_t j = 0; j < k; ++j) {
      const std::uint64_t lo = col_ptr[j], hi = col_ptr[j + 1];
      std::uint64_t acc = 0;
      for (std::uint64_t e = lo; e < hi; ++e) {
        const std::uint64_t v = sg[e] > 0 ? t[rw[e]] : p - t[rw[e]];
        acc += v;
        acc -= acc >= p ? p : 0;
      }
      if (acc == 0) continue;
      const std::uint64_t val = f.mul(d_out[j], acc);
      const std::uint64_t neg = p - val;
      for (std::uint64_t e = lo; e < hi; ++e) {
        std::uint64_t o = out[rw[e]] + (sg[e] > 0 ? val : neg);
        o -= o >= p ? p : 0;
        out[rw[e]] = o;
      }
    }
  }
};

// minimal connection polynomial of seq; returns the matrix-minimal-polynomial
// candidate as monic coefficients low->high (mont domain)
inline std::vector<std::uint64_t> berlekamp_massey(
    const std::vector<std::uint64_t>& seq, const Mont& F) {
  std::vector<std::uint64_t> C{F.r1}, B{F.r1};
  std::uint64_t L = 0, shift = 1, b = F.r1;
  for (std::size_t n = 0; n < seq.size(); ++n) {
    std::uint64_t delta = seq[n];
    for (std::uint64_t i = 1; i <= L && i < C.size(); ++i)
      if (C[i]) delta = F.add(delta, F.mul(C[i], seq[n - i]));
    if (delta == 0) {
      ++shift;
    } else if (2 * L <= n) {
      std::vector<std::uint64_t> T = C;
      const std::uint64_t coef = F.mul(delta, F.inv(b));
      if (C.size() < B.size() + shift) C.resize(B.size() + shift, 0);
      for (std::size_t i = 0; i < B.size(); ++i)
        if (B[i]) C[i + shift] = F.sub(C[i + shift], F.mul(coef, B[i]));
      L = n + 1 - L;
      B = std::move(T);
      b = delta;
      shift = 1;
    } else {
      const std::uint64_t coef = F.mul(delta, F.inv(b));
      if (C.size() < B.size() + shift) C.resize(B.size() + shift, 0);
      for (std::size_t i = 0; i < B.size(); ++i)
        if (B[i]) C[i + shift] = F.sub(C[i + shift], F.mul(coef, B[i]));
      ++shift;
    }
  }
  C.resize(L + 1, 0);
  // connection polynomial -> minimal polynomial: reverse coefficients
  std::vector<std::uint64_t> mp(C.rbegin(), C.rend());
  return mp;  // mp[L] = 1 (monic)
}

struct MinpolyResult {
  std::vector<std::uint64_t> mp;  // monic, low->high, mont domain
  std::uint64_t x_multiplicity = 0;
  std::uint64_t rank_estimate = 0;
};

inline MinpolyResult wiedemann_minpoly(const GramOperator& B, models::Rng& rng) {
  const Mont& F = *B.F;
  const std::uint64_t N = B.dim();
  MinpolyResult res;
  if (N == 0) {
    res.mp = {F.r1};
    return res;
  }
  std::vector<std::uint64_t> u(N), x(N), y(N);
  for (auto& t : u) t = rng.below(F.p);
  for (auto& t : x) t = rng.below(F.p);
  // deg mp <= rank+2 <= min(m,k)+2, and BM needs twice that many terms
  const std::uint64_t half = std::min(B.m, B.k) + 2;
  std::vector<std::uint64_t> seq(2 * half);
  for (std::uint64_t i = 0; i < seq.size(); ++i) {
    std::uint64_t acc = 0;
    for (std::uint64_t r = 0; r < N; ++r)
      if (u[r] && x[r]) acc = F.add(acc, F.mul(u[r], x[r]));
    seq[i] = acc;
    if (i + 1 < seq.size()) {
      B.apply(x.data(), y.data());
      std::swap(x, y);
    }
  }
  res.mp = berlekamp_massey(seq, F);
  while (res.x_multiplicity < res.mp.size() && res.mp[res.x_multiplicity] == 0)
    ++res.x_multiplicity;
  res.rank_estimate = res.mp.size() - 1 - res.x_multiplicity;
  return res;
}

inline std::uint64_t wiedemann_rank(const CoreView& A, const Mont& F,
                                    models::Rng rng) {
  GramOperator B(A, F, rng);
  return wiedemann_minpoly(B, rng).rank_estimate;
}

inline constexpr std::uint64_t kDenseCoreCutoff = 512;

// rank of M over GF(p): peel, then dense or projected core rank. The
// projection path is seeded from the matrix shape only, so reports are
// deterministic for a given input.
inline RankReport rank_mod_p(const SparseSignMatrix& M, std::uint64_t p) {
  const Mont F(p);
  RankReport rep;
  rep.method = "prime-field";
  rep.prime = p;
  PeelOutcome peel = peel_matrix(M);
  rep.peeled = peel.removed.size();
  rep.rank = rep.peeled;
  rep.core_rows = peel.core_rows;
  rep.core_cols = peel.core_cols;
  if (peel.core_cols == 0) return rep;
  CoreView core = extract_core(M, peel);
  if (core.m <= kDenseCoreCutoff && core.k <= kDenseCoreCutoff) {
    rep.rank += dense_rank_core(core, F);
  } else {
    models::Rng rng(models::Rng::mix(0x72616E6B6D6F6470ULL ^ (M.rows * 1315423911ULL) ^
                                     M.cols ^ (p << 1)));
    rep.rank += wiedemann_rank(core, F, rng);
    rep.randomized = true;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Uniform sampling from the left null space {w : wᵀ M = 0} over GF(p).
// Core part: kernel of the preconditioned Gram operator via the deflated
// minimal polynomial; free rows uniform; peeled rows by reverse
// back-substitution (each removal's pivot column determines its row value
// from rows that were still alive at that step). Every sample is verified
// against the matrix; failures trigger fresh preconditioners.
// ---------------------------------------------------------------------------
struct LeftNullSampler {
  const SparseSignMatrix* M;
  Mont F;
  PeelOutcome peel;
  CoreView core;
  std::uint64_t core_rank = 0;

  LeftNullSampler(const SparseSignMatrix& mat, std::uint64_t p, models::Rng rng)
      : M(&mat), F(p), peel(peel_matrix(mat)), core(extract_core(mat, peel)), rng_(rng) {
    rebuild();
  }

  // peeled + core rank: a high-probability-exact lower bound on rank mod p
  std::uint64_t rank() const { return peel.removed.size() + core_rank; }

  // draws one uniform left-null vector (mont domain), size M->rows
  std::vector<std::uint64_t> sample() {
    for (int attempt = 0; attempt < 12; ++attempt) {
      std::vector<std::uint64_t> w = try_sample();
      if (!w.empty()) return w;
      if (attempt % 3 == 2) rebuild();  // fresh preconditioners
    }
    throw std::runtime_error("left-null sampling failed to verify");
  }

 private:
  models::Rng rng_;
  std::unique_ptr<GramOperator> B_;
  MinpolyResult mp_;

  void rebuild() {
    if (core.k == 0 || core.m == 0) {
      core_rank = 0;
      return;
    }
    B_ = std::make_unique<GramOperator>(core, F, rng_);
    mp_ = wiedemann_minpoly(*B_, rng_);
    core_rank = mp_.rank_estimate;
  }

  // y = (mp/x^e)(B)·v for fresh random v: an element of ker(B) when the
  // deflated polynomial is correct (verified by the caller)
  std::vector<std::uint64_t> core_kernel_vector() {
    std::vector<std::uint64_t> y(core.m, 0);
    if (core.k == 0 || core.m == 0) return y;
    const std::uint64_t e = mp_.x_multiplicity;
    if (e == 0) return y;  // trivial kernel
    const std::vector<std::uint64_t> g(mp_.mp.begin() + e, mp_.mp.end());
    std::vector<std::uint64_t> v(core.m), t(core.m);
    for (auto& z : v) z = rng_.below(F.p);
    const std::size_t D = g.size() - 1;
    for (std::uint64_t r = 0; r < core.m; ++r) y[r] = g[D] ? F.mul(g[D], v[r]) : 0;
    for (std::size_t i = D; i-- > 0;) {
      B_->apply(y.data(), t.data());
      std::swap(y, t);
      if (g[i])
        for (std::uint64_t r = 0; r < core.m; ++r)
          y[r] = F.add(y[r], F.mul(g[i], v[r]));
    }
    // ker E = D_in⁻¹ · leftnull(core), so scale back
    for (std::uint64_t r = 0; r < core.m; ++r) y[r] = F.mul(B_->d_in[r], y[r]);
    return y;
  }

  std::vector<std::uint64_t> try_sample() {
    std::vector<std::uint64_t> w(M->rows, 0);
    std::vector<std::uint64_t> yc = core_kernel_vector();
    for (std::uint64_t i = 0; i < core.m; ++i) w[core.row_of_core[i]] = yc[i];
    // verify the core part: (core column)ᵀ · w = 0 for every surviving column
    for (std::uint64_t j = 0; j < core.k; ++j) {
      std::uint64_t acc = 0;
      for (std::uint64_t t = core.col_ptr[j]; t < core.col_ptr[j + 1]; ++t) {
        const std::uint64_t val = yc[core.row[t]];
        acc = core.sign[t] > 0 ? F.add(acc, val) : F.sub(acc, val);
      }
      if (acc != 0) return {};  // deflation fell short; retry
    }
    for (std::uint64_t r : peel.free_rows) w[r] = rng_.below(F.p);
    // reverse the peel: the pivot column of each removal fixes w at its row
    for (auto it = peel.removed.rbegin(); it != peel.removed.rend(); ++it) {
      const auto [r, j] = *it;
      std::uint64_t acc = 0;
      std::int8_t s_pivot = 1;
      for (std::uint64_t t = M->col_ptr[j]; t < M->col_ptr[j + 1]; ++t) {
        const std::uint64_t rr = M->row_idx[t];
        if (rr == r) {
          s_pivot = M->entry[t];
          continue;
        }
        acc = M->entry[t] > 0 ? F.add(acc, w[rr]) : F.sub(acc, w[rr]);
      }
      w[r] = s_pivot > 0 ? F.neg(acc) : acc;
    }
    return w;
  }
};

}  // namespace htk::linalg
