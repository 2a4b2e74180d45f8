#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "htk/binomial.hpp"
#include "htk/complex.hpp"
#include "htk/rng.hpp"

namespace htk::local_limit {

// ---------------------------------------------------------------------------
// The limiting d-tree
// ---------------------------------------------------------------------------
//
// Nodes alternate between facets ((d-1)-faces) and cells (d-faces).  The root
// is a type-A facet.  A type-A facet has one type-A cell child plus Poi(d)
// type-B cell children; a type-B facet has Poi(d) type-B cell children.  Every
// cell has exactly d facet children: all type A for an A-cell, one type B and
// d-1 type A for a B-cell.

enum class TypeTag : std::uint8_t { A, B };

struct DTreeNode {
  bool is_cell = false;
  TypeTag type = TypeTag::A;
  std::vector<DTreeNode> children;
};

namespace detail {

// depth counts remaining facet generations below this facet
inline DTreeNode grow_facet(std::int32_t d, TypeTag type, std::uint64_t depth,
                            models::Rng& rng) {
  DTreeNode f;
  f.is_cell = false;
  f.type = type;
  if (depth == 0) return f;
  const std::uint64_t extra = rng.poisson(static_cast<double>(d));
  const std::uint64_t cells = (type == TypeTag::A ? 1 : 0) + extra;
  for (std::uint64_t c = 0; c < cells; ++c) {
    DTreeNode cell;
    cell.is_cell = true;
    cell.type = (type == TypeTag::A && c == 0) ? TypeTag::A : TypeTag::B;
    for (std::int32_t i = 0; i < d; ++i) {
      // a B-cell hands the B line to exactly one facet child
      const TypeTag ft =
          (cell.type == TypeTag::B && i == 0) ? TypeTag::B : TypeTag::A;
      cell.children.push_back(grow_facet(d, ft, depth - 1, rng));
    }
    f.children.push_back(std::move(cell));
  }
  return f;
}

}  // namespace detail

// Sample the limit tree truncated after `depth` facet generations.
inline DTreeNode sample_Bd(std::int32_t d, std::uint64_t depth, models::Rng rng) {
  if (d < 1) throw std::invalid_argument("sample_Bd: d must be >= 1");
  return detail::grow_facet(d, TypeTag::A, depth, rng);
}

// ---------------------------------------------------------------------------
// Neighborhood census
// ---------------------------------------------------------------------------
//
// Rooted isomorphism types of the depth-k ball in the face-inclusion graph,
// canonicalized by a degree-sequence-labeled tree code: a facet with remaining
// generations encodes as "[" + sorted cell codes + "]", a leaf facet as "f",
// and a cell as "(" + sorted facet codes + ")".  Facet degrees are capped at
// kCensusDegreeCap children; re-encountered cells are dropped (BFS tree), so
// the code is exact whenever the ball is a tree, which at k <= 2 fails only on
// O(1/n)-probability second-layer collisions.

constexpr std::uint64_t kCensusDegreeCap = 64;

namespace detail {

inline std::string encode_cells(std::vector<std::string>& codes) {
  std::sort(codes.begin(), codes.end());
  std::string out = "[";
  for (auto& c : codes) out += c;
  out += "]";
  return out;
}

inline std::string encode_tree_facet(const DTreeNode& f, std::uint64_t gen,
                                     std::uint64_t k) {
  if (gen == k) return "f";
  std::vector<std::string> cells;
  for (const auto& cell : f.children) {
    if (cells.size() == kCensusDegreeCap) break;
    std::string code = "(";
    std::vector<std::string> sub;
    for (const auto& child : cell.children)
      sub.push_back(encode_tree_facet(child, gen + 1, k));
    std::sort(sub.begin(), sub.end());
    for (auto& s : sub) code += s;
    code += ")";
    cells.push_back(std::move(code));
  }
  return encode_cells(cells);
}

inline std::string encode_ball_facet(const core::SimplicialComplex& X,
                                     std::uint64_t facet_rank, std::uint64_t parent_cell,
                                     bool has_parent, std::set<std::uint64_t>& seen_cells,
                                     std::uint64_t gen, std::uint64_t k) {
  if (gen == k) return "f";
  std::vector<std::string> cells;
  const auto tau_key = core::face_unrank(facet_rank, X.d, X.n);
  for (const auto& sigma : core::cofaces(tau_key, X.n)) {
    const std::uint64_t cr = core::face_rank(sigma, X.n);
    if (!X.has(cr)) continue;
    if (has_parent && cr == parent_cell) continue;
    if (!seen_cells.insert(cr).second) continue;
    if (cells.size() == kCensusDegreeCap) break;
    std::string code = "(";
    std::vector<std::string> sub;
    std::vector<std::int32_t> tau(sigma.size() - 1);
    for (std::size_t drop = 0; drop < sigma.size(); ++drop) {
      std::size_t w = 0;
      for (std::size_t i = 0; i < sigma.size(); ++i)
        if (i != drop) tau[w++] = sigma[i];
      const std::uint64_t fr = core::face_rank(tau, X.n);
      if (fr == facet_rank) continue;
      sub.push_back(encode_ball_facet(X, fr, cr, true, seen_cells, gen + 1, k));
    }
    std::sort(sub.begin(), sub.end());
    for (auto& s : sub) code += s;
    code += ")";
    cells.push_back(std::move(code));
  }
  return encode_cells(cells);
}

}  // namespace detail

inline std::string encode_tree(const DTreeNode& root, std::uint64_t k) {
  return detail::encode_tree_facet(root, 0, k);
}

inline std::string encode_ball(const core::SimplicialComplex& X, std::uint64_t root_rank,
                               std::uint64_t k) {
  std::set<std::uint64_t> seen;
  return detail::encode_ball_facet(X, root_rank, 0, false, seen, 0, k);
}

struct CensusRow {
  std::string code;
  double empirical = 0;
  double limit = 0;
};

struct CensusReport {
  std::int32_t d = 0;
  std::uint64_t radius = 0;
  std::uint64_t trials = 0;
  std::uint64_t limit_trials = 0;
  std::vector<CensusRow> rows;  // sorted by code
  double tv = 0;                // total variation distance
};

inline CensusReport neighborhood_census(const core::SimplicialComplex& X,
                                        std::uint64_t radius, std::uint64_t trials,
                                        models::Rng rng,
                                        std::uint64_t limit_trials = 100000) {
  if (radius > 2) throw std::invalid_argument("neighborhood_census: radius must be <= 2");
  if (trials == 0 || limit_trials == 0)
    throw std::invalid_argument("neighborhood_census: trials must be positive");
  CensusReport rep;
  rep.d = X.d;
  rep.radius = radius;
  rep.trials = trials;
  rep.limit_trials = limit_trials;

  const std::uint64_t roots = core::choose(X.n, X.d);
  std::map<std::string, std::uint64_t> emp, lim;
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto r = rng.substream("census-root", t);
    ++emp[encode_ball(X, r.below(roots), radius)];
  }
  for (std::uint64_t t = 0; t < limit_trials; ++t) {
    auto tree = sample_Bd(X.d, radius, rng.substream("census-limit", t));
    ++lim[encode_tree(tree, radius)];
  }

  std::set<std::string> codes;
  for (auto& [c, _] : emp) codes.insert(c);
  for (auto& [c, _] : lim) codes.insert(c);
  for (const auto& c : codes) {
    CensusRow row;
    row.code = c;
    if (auto it = emp.find(c); it != emp.end())
      row.empirical = static_cast<double>(it->second) / static_cast<double>(trials);
    if (auto it = lim.find(c); it != lim.end())
      row.limit = static_cast<double>(it->second) / static_cast<double>(limit_trials);
    rep.tv += std::fabs(row.empirical - row.limit);
    rep.rows.push_back(std::move(row));
  }
  rep.tv /= 2;
  return rep;
}

// ---------------------------------------------------------------------------
// Scalar fixed points
// ---------------------------------------------------------------------------
//
// a = (1 - (1-a)^d) b  and  b = exp(-d (1-b) (1-a)^(d-1)), the fixed-point
// equations for the probabilities a = P[X > 0], b = P[Y > 0] of the spectral
// recursion below.

struct FixedPointAB {
  double a = 0;
  double b = 0;
  std::string branch;  // "trivial" or "nontrivial"
  double resid_a = 0;  // a - (1-(1-a)^d) b
  double resid_b = 0;  // b - exp(-d (1-b) (1-a)^(d-1))
};

// E[X] = a - b(1-(1-a)^d) - (1-b)(1-(1-a)^d - d a (1-a)^(d-1)); at any fixed
// point the first two terms cancel and the value is <= 0.
inline double expected_X_formula(double a, double b, std::int32_t d) {
  if (!(a >= 0 && a <= 1 && b >= 0 && b <= 1))
    throw std::invalid_argument("expected_X_formula: a, b must lie in [0,1]");
  const double q = std::pow(1.0 - a, d - 1);
  const double hit = 1.0 - q * (1.0 - a);  // 1 - (1-a)^d
  return a - b * hit - (1.0 - b) * (hit - d * a * q);
}

namespace detail {

inline double bisect01(double lo, double hi, double flo, auto&& f) {
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline std::vector<FixedPointAB> solve_ab(std::int32_t d) {
  if (d < 2) throw std::invalid_argument("solve_ab: d must be >= 2");
  std::vector<FixedPointAB> out;
  const auto resid = [d](FixedPointAB& fp) {
    const double q = std::pow(1.0 - fp.a, d - 1);
    fp.resid_a = fp.a - (1.0 - q * (1.0 - fp.a)) * fp.b;
    fp.resid_b = fp.b - std::exp(-d * (1.0 - fp.b) * q);
  };

  // trivial branch: a = 0, b the root of b = exp(-d(1-b)) below 1
  const auto g = [d](double b) { return b - std::exp(-d * (1.0 - b)); };
  FixedPointAB triv;
  triv.a = 0;
  triv.b = detail::bisect01(0.0, 0.99, g(0.0), g);
  triv.branch = "trivial";
  resid(triv);
  out.push_back(triv);

  // nontrivial branch: substitute b = a / (1-(1-a)^d) and scan for roots of
  // the remaining exponential equation over a in (0,1)
  const auto h = [d](double a) {
    const double q = std::pow(1.0 - a, d - 1);
    const double b = a / (1.0 - q * (1.0 - a));
    return b - std::exp(-d * (1.0 - b) * q);
  };
  const int grid = 4000;
  double prev_a = 1e-9, prev_h = h(prev_a);
  for (int i = 1; i <= grid; ++i) {
    const double cur_a = 1e-9 + (1.0 - 2e-9) * i / grid;
    const double cur_h = h(cur_a);
    if ((prev_h < 0) != (cur_h < 0)) {
      FixedPointAB fp;
      fp.a = detail::bisect01(prev_a, cur_a, prev_h, h);
      const double q = std::pow(1.0 - fp.a, d - 1);
      fp.b = fp.a / (1.0 - q * (1.0 - fp.a));
      fp.branch = "nontrivial";
      resid(fp);
      if (fp.a < 1.0 - 1e-7) out.push_back(fp);
    }
    prev_a = cur_a;
    prev_h = cur_h;
  }

  // (1,1) solves both equations exactly
  FixedPointAB one;
  one.a = 1;
  one.b = 1;
  one.branch = "nontrivial";
  resid(one);
  out.push_back(one);
  return out;
}

// ---------------------------------------------------------------------------
// Population dynamics
// ---------------------------------------------------------------------------
//
// Distributional recursion for the spectral atoms:
//   type A:  1/X = 1 + 1/(X_1+..+X_d) + sum_{j<=m} 1/(Y_j + X_{j,1}+..+X_{j,d-1})
//   type B:  1/Y = 1 + sum_{j<=m} 1/(Y_j + X_{j,1}+..+X_{j,d-1}),   m ~ Poi(d)
// with the zero rule applied on exact 0.0: a term whose denominator is exactly
// zero forces the sample to 0.  Synchronous sweeps: both pools are resampled
// from the previous generation.

struct PopulationState {
  std::vector<double> pool_X;
  std::vector<double> pool_Y;
  std::uint64_t sweeps_done = 0;
};

struct PopulationReport {
  std::int32_t d = 0;
  std::uint64_t pool = 0;
  std::uint64_t sweeps = 0;
  double E_X = 0;
  double stderr_X = 0;
  double Pr_X_positive = 0;
  double E_Y = 0;
  std::vector<double> history;  // E[X] after each sweep
  bool converged = true;
  PopulationState state;
};

namespace detail {

struct TermAccum {
  double inv_sum = 0;  // accumulated 1/denominator terms
  bool zero = false;   // a denominator was exactly 0
  void add_inverse(double denom) {
    if (denom == 0.0)
      zero = true;
    else
      inv_sum += 1.0 / denom;
  }
};

inline double draw_X(std::int32_t d, const std::vector<double>& X,
                     const std::vector<double>& Y, models::Rng& rng) {
  TermAccum acc;
  double p = 0;
  for (std::int32_t i = 0; i < d; ++i) p += X[rng.below(X.size())];
  acc.add_inverse(p);
  const std::uint64_t m = rng.poisson(static_cast<double>(d));
  for (std::uint64_t j = 0; j < m; ++j) {
    double q = Y[rng.below(Y.size())];
    for (std::int32_t i = 0; i + 1 < d; ++i) q += X[rng.below(X.size())];
    acc.add_inverse(q);
  }
  if (acc.zero) return 0.0;
  return 1.0 / (1.0 + acc.inv_sum);
}

inline double draw_Y(std::int32_t d, const std::vector<double>& X,
                     const std::vector<double>& Y, models::Rng& rng) {
  TermAccum acc;
  const std::uint64_t m = rng.poisson(static_cast<double>(d));
  for (std::uint64_t j = 0; j < m; ++j) {
    double q = Y[rng.below(Y.size())];
    for (std::int32_t i = 0; i + 1 < d; ++i) q += X[rng.below(X.size())];
    acc.add_inverse(q);
  }
  if (acc.zero) return 0.0;
  return 1.0 / (1.0 + acc.inv_sum);
}

}  // namespace detail

inline PopulationReport population_dynamics(std::int32_t d, std::uint64_t pool_size,
                                            std::uint64_t sweeps, models::Rng rng,
                                            double init = 1.0) {
  if (d < 2) throw std::invalid_argument("population_dynamics: d must be >= 2");
  if (pool_size == 0) throw std::invalid_argument("population_dynamics: empty pool");
  if (!(init >= 0.0 && init <= 1.0))
    throw std::invalid_argument("population_dynamics: init must lie in [0,1]");
  PopulationReport rep;
  rep.d = d;
  rep.pool = pool_size;
  rep.sweeps = sweeps;

  std::vector<double> X(pool_size, init), Y(pool_size, init);
  std::vector<double> nX(pool_size), nY(pool_size);
  for (std::uint64_t s = 0; s < sweeps; ++s) {
    for (std::uint64_t i = 0; i < pool_size; ++i) {
      auto r = rng.substream("pop-X", s * pool_size + i);
      nX[i] = detail::draw_X(d, X, Y, r);
    }
    for (std::uint64_t i = 0; i < pool_size; ++i) {
      auto r = rng.substream("pop-Y", s * pool_size + i);
      nY[i] = detail::draw_Y(d, X, Y, r);
    }
    X.swap(nX);
    Y.swap(nY);
    double mean = 0;
    for (double x : X) mean += x;
    rep.history.push_back(mean / static_cast<double>(pool_size));
  }

  double s1 = 0, s2 = 0, pos = 0, sy = 0;
  for (double x : X) {
    s1 += x;
    s2 += x * x;
    pos += x > 0.0;
  }
  for (double y : Y) sy += y;
  const double n = static_cast<double>(pool_size);
  rep.E_X = s1 / n;
  rep.stderr_X =
      pool_size > 1 ? std::sqrt((s2 - s1 * s1 / n) / (n - 1) / n) : 0.0;
  rep.Pr_X_positive = pos / n;
  rep.E_Y = sy / n;
  if (rep.history.size() >= 2) {
    const double drift =
        std::fabs(rep.history.back() - rep.history[rep.history.size() - 2]);
    rep.converged = drift <= 3 * rep.stderr_X;
  }
  rep.state.pool_X = std::move(X);
  rep.state.pool_Y = std::move(Y);
  rep.state.sweeps_done = sweeps;
  return rep;
}

}  // namespace htk::local_limit
