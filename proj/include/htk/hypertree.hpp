#pragma once
#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "htk/basis.hpp"
#include "htk/chain.hpp"
#include "htk/complex.hpp"
#include "htk/exact.hpp"
#include "htk/rank.hpp"
#include "htk/sparse.hpp"

namespace htk::ops {

using core::SimplicialComplex;

struct HypertreeCertificate {
  bool is_hypertree = false;
  std::uint64_t face_count = 0;
  std::uint64_t rank = 0;
  std::uint64_t beta_top = 0;     // |X| - rank
  std::uint64_t beta_codim1 = 0;  // C(n-1,d) - rank
  std::uint64_t prime = 0;
  bool second_prime_checked = false;
};

// A complex with full (d-1)-skeleton is a d-hypertree iff |X| = C(n-1,d) and
// the boundary matrix has full column rank (any two of {count, beta_top = 0,
// beta_codim1 = 0} force the third). Full rank mod p implies full rank over
// the rationals, so positive verdicts are sound; negative verdicts are
// re-checked with a second prime.
inline HypertreeCertificate certify(const SimplicialComplex& X) {
  HypertreeCertificate cert;
  cert.face_count = X.faces.size();
  const std::uint64_t target = core::choose(X.n - 1, X.d);
  linalg::SparseSignMatrix M = linalg::build_boundary_matrix(X);
  linalg::RankReport rr = linalg::rank_mod_p(M, linalg::kPrime1);
  cert.prime = linalg::kPrime1;
  if (rr.rank < cert.face_count) {
    linalg::RankReport rr2 = linalg::rank_mod_p(M, linalg::kPrime2);
    cert.second_prime_checked = true;
    if (rr2.rank > rr.rank) rr = rr2;
  }
  cert.rank = rr.rank;
  cert.beta_top = cert.face_count - cert.rank;
  cert.beta_codim1 = target - std::min(cert.rank, target);
  cert.is_hypertree = (cert.face_count == target) && (cert.beta_top == 0);
  return cert;
}

// exact ceiling of C(n,d+1) * (1 - m/C(n-1,d))
inline std::uint64_t coshadow_lower_bound(std::int32_t n, std::int32_t d,
                                          std::uint64_t m) {
  const std::uint64_t total = core::choose(n, d + 1);
  const std::uint64_t denom = core::choose(n - 1, d);
  if (m > denom) throw std::invalid_argument("face count exceeds C(n-1,d)");
  mpz_class num = mpz_class(static_cast<unsigned long>(total)) *
                  static_cast<unsigned long>(denom - m);
  mpz_class q, r;
  mpz_cdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(),
              mpz_class(static_cast<unsigned long>(denom)).get_mpz_t());
  return static_cast<std::uint64_t>(q.get_ui());
}

// the d-faces whose column falls outside the span of X's columns; defined
// for acyclic X only (rank = |X|)
inline std::vector<std::uint64_t> coshadow(const SimplicialComplex& X) {
  linalg::SparseSignMatrix M = linalg::build_boundary_matrix(X);
  linalg::IncrementalBasis basis(M.rows, linalg::kPrime1);
  std::vector<std::pair<std::uint64_t, std::int8_t>> col;
  for (std::uint64_t j = 0; j < M.cols; ++j) {
    col.clear();
    for (std::uint64_t t = M.col_ptr[j]; t < M.col_ptr[j + 1]; ++t)
      col.emplace_back(M.row_idx[t], M.entry[t]);
    if (!basis.insert(col))
      throw std::invalid_argument("coshadow requires an acyclic complex");
  }
  std::vector<std::uint64_t> result;
  const std::uint64_t total = X.face_space();
  const int k = X.d + 1;
  std::vector<std::int32_t> face(k), sub(k - 1);
  for (std::uint64_t r = 0; r < total; ++r) {
    if (X.has(r)) continue;
    core::colex_unrank(r, k, face.data());
    col.clear();
    for (int i = 0; i < k; ++i) {
      int s = 0;
      for (int j = 0; j < k; ++j)
        if (j != i) sub[s++] = face[j];
      col.emplace_back(core::colex_rank({sub.data(), sub.size()}),
                       static_cast<std::int8_t>(i % 2 == 0 ? 1 : -1));
    }
    std::sort(col.begin(), col.end());
    if (!basis.in_span(col)) result.push_back(r);
  }
  return result;
}

struct PeelResult {
  bool collapsible = false;
  // (exposed (d-1)-face rank, unique d-coface rank) in removal order
  std::vector<std::pair<std::uint64_t, std::uint64_t>> removals;
  std::vector<std::uint64_t> core;  // residual d-faces, sorted
};

// greedy d-collapse; the optional seed shuffles only the initial queue of
// exposed (d-1)-faces (the residual core is order-independent)
inline PeelResult peel_collapse(const SimplicialComplex& X,
                                std::uint64_t order_seed = 0,
                                bool use_seed = false) {
  linalg::SparseSignMatrix M = linalg::build_boundary_matrix(X);
  models::Rng rng = models::Rng(order_seed).substream("peel-order");
  linalg::PeelOutcome peel = linalg::peel_matrix(M, use_seed ? &rng : nullptr);
  PeelResult res;
  res.removals.reserve(peel.removed.size());
  for (auto& [row, colj] : peel.removed)
    res.removals.emplace_back(row, X.faces[colj]);
  for (std::uint64_t j = 0; j < M.cols; ++j)
    if (!peel.col_removed[j]) res.core.push_back(X.faces[j]);
  res.collapsible = res.core.empty();
  return res;
}

struct EnumerationSummary {
  std::int32_t n = 0, d = 0;
  std::uint64_t subsets_checked = 0;
  std::uint64_t hypertree_count = 0;
  std::map<std::string, std::uint64_t> torsion_histogram;  // order -> count
  mpz_class kalai_sum = 0;
  mpz_class expected = 0;  // n^C(n-2,d)
  bool with_torsion = true;
};

// exhaustive scan of all C(n-1,d)-subsets of d-faces; exact integer rank
// (fraction-free), Smith form only where a nontrivial torsion is possible
inline EnumerationSummary enumerate_hypertrees(std::int32_t n, std::int32_t d,
                                               bool with_torsion = true) {
  const std::uint64_t total = core::choose(n, d + 1);
  const std::uint64_t k = core::choose(n - 1, d);
  if (core::log_choose(static_cast<double>(total), static_cast<double>(k)) >
      std::log(1e7))
    throw std::invalid_argument("enumeration guard exceeded: C(C(n,d+1), C(n-1,d)) > 1e7");

  EnumerationSummary sum;
  sum.n = n;
  sum.d = d;
  sum.with_torsion = with_torsion;
  mpz_ui_pow_ui(sum.expected.get_mpz_t(), static_cast<unsigned long>(n),
                static_cast<unsigned long>(core::choose(n - 2, d)));

  // iterate k-subsets of [0, total) in colex order
  std::vector<std::uint64_t> pick(k);
  for (std::uint64_t i = 0; i < k; ++i) pick[i] = i;
  bool done = (k == 0 || k > total);
  while (!done) {
    ++sum.subsets_checked;
    SimplicialComplex X(n, d);
    X.faces.assign(pick.begin(), pick.end());
    linalg::SparseSignMatrix M = linalg::build_boundary_matrix(X);
    linalg::BareissResult br = linalg::bareiss(M);
    if (br.rank == k) {
      ++sum.hypertree_count;
      mpz_class torsion = 1;
      if (with_torsion && br.last_pivot != 1) {
        // |last pivot| > 1 only says torsion *may* be nontrivial
        torsion = linalg::smith_normal_form(M).torsion_order;
      }
      sum.kalai_sum += torsion * torsion;
      ++sum.torsion_histogram[torsion.get_str()];
    }
    // next colex subset
    std::uint64_t i = 0;
    while (i + 1 < k && pick[i] + 1 == pick[i + 1]) ++i;
    if (pick[i] + 1 >= total && i + 1 >= k) {
      done = true;
    } else {
      ++pick[i];
      for (std::uint64_t j = 0; j < i; ++j) pick[j] = j;
      if (pick[k - 1] >= total) done = true;
    }
  }
  return sum;
}

// T a d-hypertree on [0,n), S a (d-1)-hypertree on [0,n): the union
// T ∪ {n·τ : τ ∈ S} on n+1 vertices. Certification of the inputs is the
// caller's contract; colex ranks are stable under the vertex extension.
inline SimplicialComplex cone_extend(const SimplicialComplex& T,
                                     const SimplicialComplex& S) {
  if (S.n != T.n || S.d != T.d - 1)
    throw std::invalid_argument("cone_extend: S must be a (d-1)-complex on the same vertex set");
  SimplicialComplex out(T.n + 1, T.d);
  out.faces = T.faces;  // ranks unchanged: colex is stable in n
  std::vector<std::int32_t> tau(static_cast<std::size_t>(S.d) + 1);
  for (std::uint64_t r : S.faces) {
    core::colex_unrank(r, S.d + 1, tau.data());
    core::FaceKey f(tau.begin(), tau.end());
    f.push_back(T.n);  // n is larger than every vertex of tau
    out.faces.push_back(core::colex_rank({f.data(), f.size()}));
  }
  std::sort(out.faces.begin(), out.faces.end());
  if (std::adjacent_find(out.faces.begin(), out.faces.end()) != out.faces.end())
    throw std::invalid_argument("cone_extend: overlapping faces");
  return out;
}

// the standard recursive cone construction: a collapsible d-hypertree on
// [0,n). Base cases: d=0 is the single vertex {0}; n=d+1 is the full simplex.
inline SimplicialComplex cone_hypertree(std::int32_t n, std::int32_t d) {
  if (d < 1 || n <= d) throw std::invalid_argument("cone_hypertree: need n > d >= 1");
  if (n == d + 1) {
    SimplicialComplex x(n, d);
    x.faces.push_back(0);  // the unique full simplex
    return x;
  }
  // T on [0,n-1) coned with S on [0,n-1): build S recursively in dim d-1;
  // for d=1 S degenerates to the single vertex {0}, giving the star/path mix
  SimplicialComplex T = cone_hypertree(n - 1, d);
  SimplicialComplex out(n, d);
  out.faces = T.faces;
  if (d == 1) {
    core::FaceKey f{0, static_cast<std::int32_t>(n - 1)};
    out.faces.push_back(core::colex_rank({f.data(), f.size()}));
  } else {
    SimplicialComplex S = cone_hypertree(n - 1, d - 1);
    std::vector<std::int32_t> tau(static_cast<std::size_t>(S.d) + 1);
    for (std::uint64_t r : S.faces) {
      core::colex_unrank(r, S.d + 1, tau.data());
      core::FaceKey f(tau.begin(), tau.end());
      f.push_back(n - 1);
      out.faces.push_back(core::colex_rank({f.data(), f.size()}));
    }
  }
  std::sort(out.faces.begin(), out.faces.end());
  return out;
}

struct BoundValues {
  // NaN marks a bound that needs alpha_d when none was supplied
  double log_lower_cnd = 0;        // C(n-2,d) * (ln n - sum_{k=2}^d 1/k)
  double log_lower_thm = std::numeric_limits<double>::quiet_NaN();
  double log_upper_kalai = 0;      // C(n-1,d) * (ln n + 1 - ln(d+1))
  double log_lower_corollary = 0;  // C(n-1,d) * (ln n - ln(d+1))
  double cnd_base = 0;             // e^{-sum_{k=2}^d 1/k}: per-face factor / n
  double thm_base = std::numeric_limits<double>::quiet_NaN();
};

inline BoundValues bound_evaluators(std::int32_t n, std::int32_t d,
                                    double alpha_d = std::nan("")) {
  BoundValues b;
  double harm = 0;  // sum_{k=2}^d 1/k
  for (int k = 2; k <= d; ++k) harm += 1.0 / k;
  const double ln_n = std::log(static_cast<double>(n));
  const double cnm2 = static_cast<double>(core::choose(n - 2, d));
  const double cnm1 = static_cast<double>(core::choose(n - 1, d));
  b.cnd_base = std::exp(-harm);
  b.log_lower_cnd = cnm2 * (ln_n - harm);
  b.log_upper_kalai = cnm1 * (ln_n + 1 - std::log(d + 1.0));
  b.log_lower_corollary = cnm1 * (ln_n - std::log(d + 1.0));
  if (!std::isnan(alpha_d)) {
    b.thm_base = std::exp(1 + alpha_d) / (d + 1);
    b.log_lower_thm = cnm1 * (ln_n + 1 + alpha_d - std::log(d + 1.0));
  }
  return b;
}

}  // namespace htk::ops
