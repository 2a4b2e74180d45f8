#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "htk/binomial.hpp"
#include "htk/complex.hpp"
#include "htk/hypertree.hpp"
#include "htk/rank.hpp"
#include "htk/rng.hpp"
#include "htk/sparse.hpp"

namespace htk::models {

// impossible-by-construction states (e.g. a base-exchange kernel of the wrong
// dimension); tools translate this into a distinct exit status
struct InternalInvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

// --------------------------------------------------------------------------
// Linial–Meshulam models
// --------------------------------------------------------------------------

// Y_d(n,p): full (d-1)-skeleton, each d-face present independently w.p. p
inline core::SimplicialComplex sample_Y(std::int32_t n, std::int32_t d, double p,
                                        Rng rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_Y: p outside [0,1]");
  core::SimplicialComplex X(n, d);
  const std::uint64_t total = X.face_space();
  for (std::uint64_t r = 0; r < total; ++r)
    if (rng.real() < p) X.faces.push_back(r);
  return X;
}

// Y_d(n,M): a uniform M-subset of the d-faces (shuffle prefix)
inline core::SimplicialComplex sample_Y_M(std::int32_t n, std::int32_t d,
                                          std::uint64_t M, Rng rng) {
  core::SimplicialComplex X(n, d);
  const std::uint64_t total = X.face_space();
  if (M > total) throw std::invalid_argument("sample_Y_M: M exceeds face count");
  std::vector<std::uint64_t> pool(total);
  for (std::uint64_t r = 0; r < total; ++r) pool[r] = r;
  for (std::uint64_t i = 0; i < M; ++i)
    std::swap(pool[i], pool[i + rng.below(total - i)]);
  X.faces.assign(pool.begin(), pool.begin() + M);
  std::sort(X.faces.begin(), X.faces.end());
  return X;
}

// --------------------------------------------------------------------------
// Growth process: start empty, repeatedly add a uniform element of the
// current co-shadow until none remains (C(n-1,d) steps).
// --------------------------------------------------------------------------
struct GrowthTrace {
  std::int32_t n = 0, d = 0;
  std::vector<std::uint64_t> faces;  // chosen d-face ranks, in order
  std::vector<std::uint64_t> live;   // live[i] = |coshadow(T_i)|; live[0] = C(n,d+1)
  core::SimplicialComplex final_complex;
};

// Every candidate column is kept in reduced form against the pivots chosen so
// far, so the co-shadow is exactly the set of nonzero candidates and uniform
// selection is direct. (Rejection sampling would need the same reductions to
// report the per-step co-shadow sizes, so nothing is saved by it here.)
inline GrowthTrace growth_process(std::int32_t n, std::int32_t d, Rng rng) {
  core::SimplicialComplex shape(n, d);
  const std::uint64_t total = shape.face_space();
  const std::uint64_t rows = core::choose(n, d);
  if (total * rows > 60'000'000ULL)
    throw std::invalid_argument(
        "growth_process: candidate-matrix memory guard (C(n,d+1)*C(n,d) too large)");
  const linalg::Mont F(linalg::kPrime1);

  linalg::SparseSignMatrix full;  // boundary of the complete d-complex
  {
    core::SimplicialComplex all(n, d);
    all.faces.resize(total);
    for (std::uint64_t r = 0; r < total; ++r) all.faces[r] = r;
    full = linalg::build_boundary_matrix(all);
  }
  // dense candidate columns, mont domain
  std::vector<std::uint64_t> cand(total * rows, 0);
  for (std::uint64_t j = 0; j < total; ++j)
    for (std::uint64_t t = full.col_ptr[j]; t < full.col_ptr[j + 1]; ++t)
      cand[j * rows + full.row_idx[t]] = full.entry[t] > 0 ? F.r1 : F.p - F.r1;
  std::vector<std::uint8_t> live_flag(total, 1);
  std::uint64_t live_count = total;

  GrowthTrace tr;
  tr.n = n;
  tr.d = d;
  tr.live.push_back(live_count);
  const std::uint64_t steps = core::choose(n - 1, d);
  rng = rng.substream("growth", 0);
  for (std::uint64_t s = 0; s < steps; ++s) {
    if (live_count == 0) throw InternalInvariantError("growth: co-shadow died early");
    // uniform live candidate
    std::uint64_t pick = rng.below(live_count);
    std::uint64_t j = 0;
    for (;; ++j)
      if (live_flag[j] && pick-- == 0) break;
    tr.faces.push_back(j);
    std::uint64_t* pv = &cand[j * rows];
    std::uint64_t prow = 0;
    while (pv[prow] == 0) ++prow;
    const std::uint64_t inv = F.inv(pv[prow]);
    for (std::uint64_t r = prow; r < rows; ++r)
      if (pv[r]) pv[r] = F.mul(inv, pv[r]);
    live_flag[j] = 0;
    --live_count;
    // eliminate the new pivot from every other live candidate
    for (std::uint64_t q = 0; q < total; ++q) {
      if (!live_flag[q]) continue;
      std::uint64_t* u = &cand[q * rows];
      const std::uint64_t c = u[prow];
      if (c == 0) continue;
      for (std::uint64_t r = prow; r < rows; ++r)
        if (pv[r]) u[r] = F.sub(u[r], F.mul(c, pv[r]));
      // the candidate dies exactly when it entered the span
      bool nonzero = false;
      for (std::uint64_t r = 0; r < rows && !nonzero; ++r) nonzero = u[r] != 0;
      if (!nonzero) {
        live_flag[q] = 0;
        --live_count;
      }
    }
    tr.live.push_back(live_count);
  }
  if (live_count != 0) throw InternalInvariantError("growth: co-shadow not exhausted");
  tr.final_complex = core::SimplicialComplex::from_ranks(n, d, tr.faces);
  return tr;
}

// --------------------------------------------------------------------------
// 1-out models S_d(n,1) and S_d(n,1-eps)
// --------------------------------------------------------------------------
struct OneOutSample {
  core::SimplicialComplex complex;
  // per (d-1)-face rank: chosen d-face rank, or kInactive
  std::vector<std::uint64_t> selection;
  std::uint64_t duplicates = 0;  // d-faces chosen by more than one facet
  static constexpr std::uint64_t kInactive = ~0ULL;
};

inline OneOutSample sample_1out_eps(std::int32_t n, std::int32_t d, double eps,
                                    Rng rng) {
  if (n <= d + 1) throw std::invalid_argument("sample_1out: need n > d+1");
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("sample_1out: bad eps");
  const std::uint64_t selectors = core::choose(n, d);
  OneOutSample out;
  out.selection.assign(selectors, OneOutSample::kInactive);
  std::vector<std::uint64_t> chosen;
  std::vector<std::int32_t> tau(d), sigma(d + 1);
  for (std::uint64_t tr = 0; tr < selectors; ++tr) {
    if (eps > 0.0 && rng.real() < eps) continue;  // inactive facet
    core::colex_unrank(tr, d, tau.data());
    // the idx-th vertex not in tau
    std::uint64_t idx = rng.below(static_cast<std::uint64_t>(n - d));
    std::int32_t v = 0;
    for (std::size_t ti = 0;; ++v) {
      if (ti < tau.size() && tau[ti] == v) {
        ++ti;
        continue;
      }
      if (idx-- == 0) break;
    }
    std::merge(tau.begin(), tau.end(), &v, &v + 1, sigma.begin());
    const std::uint64_t sr = core::colex_rank({sigma.data(), sigma.size()});
    out.selection[tr] = sr;
    chosen.push_back(sr);
  }
  std::sort(chosen.begin(), chosen.end());
  core::SimplicialComplex X(n, d);
  for (std::size_t i = 0; i < chosen.size();) {
    std::size_t j = i;
    while (j < chosen.size() && chosen[j] == chosen[i]) ++j;
    X.faces.push_back(chosen[i]);
    if (j - i > 1) ++out.duplicates;
    i = j;
  }
  out.complex = std::move(X);
  return out;
}

inline OneOutSample sample_1out(std::int32_t n, std::int32_t d, Rng rng) {
  return sample_1out_eps(n, d, 0.0, rng);
}

// --------------------------------------------------------------------------
// Homology helpers
// --------------------------------------------------------------------------

// beta_d = |X| - rank (top homology dimension over Q, given the rank policy)
inline std::uint64_t betti_top(const core::SimplicialComplex& X) {
  const auto M = linalg::build_boundary_matrix(X);
  const auto rep = linalg::rank_mod_p(M, linalg::kPrime1);
  return X.faces.size() - rep.rank;
}

// number of (d+2)-subsets of vertices all of whose (d+2) facets lie in X
inline std::uint64_t simplex_boundary_count(const core::SimplicialComplex& X) {
  const int k = X.d + 2;
  if (X.n < k) return 0;
  std::vector<bool> present(X.face_space(), false);
  for (std::uint64_t r : X.faces) present[r] = true;
  std::vector<std::int32_t> vs(k), facet(k - 1);
  for (int i = 0; i < k; ++i) vs[i] = i;
  std::uint64_t count = 0;
  for (;;) {
    bool all = true;
    for (int drop = 0; all && drop < k; ++drop) {
      int s = 0;
      for (int i = 0; i < k; ++i)
        if (i != drop) facet[s++] = vs[i];
      all = present[core::colex_rank({facet.data(), facet.size()})];
    }
    count += all;
    // next k-subset of [n] in lexicographic order
    int i = k - 1;
    while (i >= 0 && vs[i] == X.n - k + i) --i;
    if (i < 0) break;
    ++vs[i];
    for (int j = i + 1; j < k; ++j) vs[j] = vs[j - 1] + 1;
  }
  return count;
}

// --------------------------------------------------------------------------
// Base-exchange chain on d-hypertrees
// --------------------------------------------------------------------------
struct ChainResult {
  core::SimplicialComplex state;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> log;  // (sigma, tau) per step
  std::map<std::vector<std::uint64_t>, std::uint64_t> visits;  // post-step tallies
};

namespace detail {
// kernel combination of the single dependent column among cols; throws unless
// exactly T's columns are independent and sigma's closes one cycle
inline std::vector<std::uint64_t> unique_kernel_support(
    const linalg::SparseSignMatrix& M, const linalg::Mont& F) {
  const std::uint64_t rows = M.rows, cols = M.cols;
  std::vector<std::vector<std::uint64_t>> piv_col(rows), piv_combo(rows);
  std::vector<std::uint8_t> has_piv(rows, 0);
  std::vector<std::uint64_t> v(rows), combo(cols);
  std::vector<std::uint64_t> kernel;
  for (std::uint64_t j = 0; j < cols; ++j) {
    std::fill(v.begin(), v.end(), 0);
    std::fill(combo.begin(), combo.end(), 0);
    combo[j] = F.r1;
    for (std::uint64_t t = M.col_ptr[j]; t < M.col_ptr[j + 1]; ++t)
      v[M.row_idx[t]] = M.entry[t] > 0 ? F.r1 : F.p - F.r1;
    bool dependent = true;
    for (std::uint64_t r = 0; r < rows; ++r) {
      if (v[r] == 0) continue;
      if (has_piv[r]) {
        const std::uint64_t c = v[r];
        for (std::uint64_t i = r; i < rows; ++i)
          if (piv_col[r][i]) v[i] = F.sub(v[i], F.mul(c, piv_col[r][i]));
        for (std::uint64_t i = 0; i < cols; ++i)
          if (piv_combo[r][i]) combo[i] = F.sub(combo[i], F.mul(c, piv_combo[r][i]));
      } else {
        const std::uint64_t inv = F.inv(v[r]);
        has_piv[r] = 1;
        piv_col[r] = v;
        piv_combo[r] = combo;
        for (std::uint64_t i = r; i < rows; ++i)
          if (piv_col[r][i]) piv_col[r][i] = F.mul(inv, piv_col[r][i]);
        for (std::uint64_t i = 0; i < cols; ++i)
          if (piv_combo[r][i]) piv_combo[r][i] = F.mul(inv, piv_combo[r][i]);
        dependent = false;
        break;
      }
    }
    if (dependent) {
      if (j + 1 != cols)
        throw InternalInvariantError("base-exchange: kernel dimension != 1");
      for (std::uint64_t i = 0; i < cols; ++i)
        if (combo[i]) kernel.push_back(i);
      return kernel;
    }
  }
  throw InternalInvariantError("base-exchange: no cycle closed");
}
}  // namespace detail

inline ChainResult base_exchange_chain(std::int32_t n, std::int32_t d,
                                       std::uint64_t steps, Rng rng,
                                       const core::SimplicialComplex& initial,
                                       bool certify_each = true) {
  if (initial.n != n || initial.d != d)
    throw std::invalid_argument("base_exchange_chain: initial state shape mismatch");
  if (!ops::certify(initial).is_hypertree)
    throw std::invalid_argument("base_exchange_chain: initial state is not a hypertree");
  const linalg::Mont F(linalg::kPrime1);
  const std::uint64_t total = initial.face_space();
  ChainResult res;
  res.state = initial;
  rng = rng.substream("base-exchange", 0);
  for (std::uint64_t s = 0; s < steps; ++s) {
    // uniform absent face by rejection
    std::uint64_t sigma;
    do sigma = rng.below(total);
    while (res.state.has(sigma));
    // unique cycle of T + sigma: kernel support of the extended matrix
    // (columns follow the stored face order, so sigma sits last)
    core::SimplicialComplex ext = res.state;
    ext.faces.push_back(sigma);
    auto M = linalg::build_boundary_matrix(ext);
    const auto support = detail::unique_kernel_support(M, F);
    const std::uint64_t pick = support[rng.below(support.size())];
    const std::uint64_t tau = ext.faces[pick];
    if (tau != sigma) {
      auto& fs = res.state.faces;
      fs.erase(std::find(fs.begin(), fs.end(), tau));
      fs.insert(std::lower_bound(fs.begin(), fs.end(), sigma), sigma);
      if (certify_each && !ops::certify(res.state).is_hypertree)
        throw InternalInvariantError("base-exchange: left the hypertree set");
    }
    res.log.emplace_back(sigma, tau);
    ++res.visits[res.state.faces];
  }
  return res;
}

// --------------------------------------------------------------------------
// Greedy collapsible process
// --------------------------------------------------------------------------
struct GreedyResult {
  core::SimplicialComplex complex;
  std::uint64_t face_count = 0;
};

inline GreedyResult greedy_collapsible_process(std::int32_t n, std::int32_t d, Rng rng) {
  core::SimplicialComplex T(n, d);
  const std::uint64_t total = T.face_space();
  if (total > 2'000'000ULL)
    throw std::invalid_argument("greedy_collapsible_process: face space too large");
  rng = rng.substream("greedy", 0);
  auto try_add = [&](std::uint64_t r) {
    auto& fs = T.faces;
    fs.insert(std::lower_bound(fs.begin(), fs.end(), r), r);
    if (ops::peel_collapse(T).collapsible) return true;
    fs.erase(std::find(fs.begin(), fs.end(), r));
    return false;
  };
  std::uint64_t consecutive = 0;
  while (T.faces.size() < total) {
    std::uint64_t r;
    do r = rng.below(total);
    while (T.has(r));
    if (try_add(r)) {
      consecutive = 0;
      continue;
    }
    if (++consecutive < total) continue;
    // stall: sweep every absent face once; halt if none fits
    bool added = false;
    for (std::uint64_t q = 0; q < total && !added; ++q)
      if (!T.has(q)) added = try_add(q);
    if (!added) break;
    consecutive = 0;
  }
  return GreedyResult{T, T.faces.size()};
}

// --------------------------------------------------------------------------
// Hypertree probability under the uniform C(n-1,d)-subset model
// --------------------------------------------------------------------------
struct HypertreeProbability {
  std::uint64_t trials = 0, successes = 0;
  double estimate = 0, lo = 0, hi = 0;  // Wilson 95% interval
};

inline HypertreeProbability hypertree_probability(std::int32_t n, std::int32_t d,
                                                  std::uint64_t trials, Rng rng) {
  if (trials < 1) throw std::invalid_argument("hypertree_probability: trials >= 1");
  core::SimplicialComplex shape(n, d);
  const std::uint64_t total = shape.face_space();
  const std::uint64_t k = core::choose(n - 1, d);
  HypertreeProbability out;
  out.trials = trials;
  std::vector<std::uint64_t> pool(total);
  rng = rng.substream("ht-prob", 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (std::uint64_t r = 0; r < total; ++r) pool[r] = r;
    for (std::uint64_t i = 0; i < k; ++i)
      std::swap(pool[i], pool[i + rng.below(total - i)]);
    std::vector<std::uint64_t> subset(pool.begin(), pool.begin() + k);
    auto X = core::SimplicialComplex::from_ranks(n, d, std::move(subset));
    out.successes += ops::certify(X).is_hypertree;
  }
  const double z = 1.959963984540054;  // 95%
  const double nn = static_cast<double>(trials);
  const double ph = static_cast<double>(out.successes) / nn;
  const double denom = 1.0 + z * z / nn;
  const double center = (ph + z * z / (2 * nn)) / denom;
  const double half =
      z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn)) / denom;
  out.estimate = ph;
  out.lo = std::max(0.0, center - half);
  out.hi = std::min(1.0, center + half);
  return out;
}

// --------------------------------------------------------------------------
// Rank / co-shadow-density sweep over Y_d(n, c/n)
// --------------------------------------------------------------------------
struct CurveCell {
  double c = 0;
  std::uint64_t trials = 0;
  double mean_rank_norm = 0, stderr_rank = 0;
  double mean_density = 0, stderr_density = 0;
};

// co-shadow analog for (possibly) non-acyclic Y: fraction of d-faces whose
// boundary column lies outside the span of Y's columns, tested against one
// verified uniform left-null sample (per-face failure odds 1/p ~ 1e-19)
inline std::vector<CurveCell> curve_experiment(std::int32_t n, std::int32_t d,
                                               const std::vector<double>& c_values,
                                               std::uint64_t trials, Rng rng) {
  core::SimplicialComplex shape(n, d);
  const std::uint64_t total = shape.face_space();
  const double denom_rank = static_cast<double>(core::choose(n - 1, d));
  const linalg::Mont F(linalg::kPrime1);
  std::vector<CurveCell> out;
  std::uint64_t stream = 0;
  for (double c : c_values) {
    if (!(c >= 0.0 && c <= n)) throw std::invalid_argument("curve_experiment: bad c");
    CurveCell cell;
    cell.c = c;
    cell.trials = trials;
    double s1r = 0, s2r = 0, s1d = 0, s2d = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      Rng sub = rng.substream("curve-exp", stream++);
      auto Y = sample_Y(n, d, c / n, sub.substream("sample", 0));
      auto M = linalg::build_boundary_matrix(Y);
      linalg::LeftNullSampler sampler(M, linalg::kPrime1, sub.substream("null", 0));
      const double rnorm = static_cast<double>(sampler.rank()) / denom_rank;
      const auto w = sampler.sample();
      std::uint64_t outside = 0;
      std::vector<std::int32_t> face(d + 1), sub_face(d);
      for (std::uint64_t r = 0; r < total; ++r) {
        core::colex_unrank(r, d + 1, face.data());
        std::uint64_t acc = 0;
        for (int i = 0; i <= d; ++i) {
          int s = 0;
          for (int j = 0; j <= d; ++j)
            if (j != i) sub_face[s++] = face[j];
          const std::uint64_t rr = core::colex_rank({sub_face.data(), sub_face.size()});
          acc = (i % 2 == 0) ? F.add(acc, w[rr]) : F.sub(acc, w[rr]);
        }
        outside += acc != 0;
      }
      const double dens = static_cast<double>(outside) / static_cast<double>(total);
      s1r += rnorm;
      s2r += rnorm * rnorm;
      s1d += dens;
      s2d += dens * dens;
    }
    const double tn = static_cast<double>(trials);
    cell.mean_rank_norm = s1r / tn;
    cell.mean_density = s1d / tn;
    if (trials > 1) {
      cell.stderr_rank =
          std::sqrt(std::max(0.0, (s2r - s1r * s1r / tn) / (tn - 1)) / tn);
      cell.stderr_density =
          std::sqrt(std::max(0.0, (s2d - s1d * s1d / tn) / (tn - 1)) / tn);
    }
    out.push_back(cell);
  }
  return out;
}

}  // namespace htk::models
