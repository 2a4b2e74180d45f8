#pragma once
#include <cstdint>
#include <map>
#include <vector>

#include "htk/complex.hpp"

namespace htk::core {

// Formal integer combination of (d-1)-faces; zero coefficients never stored.
struct SignedChain {
  std::map<FaceKey, std::int64_t> terms;

  void add(const FaceKey& f, std::int64_t coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms.emplace(f, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms.erase(it);
    }
  }

  bool zero() const { return terms.empty(); }
};

// boundary of an oriented simplex (increasing vertex order):
// sum_i (-1)^i (face minus vertex i). Boundary of a vertex is zero.
inline SignedChain boundary_chain(const FaceKey& face) {
  SignedChain out;
  if (face.size() <= 1) return out;
  for (std::size_t i = 0; i < face.size(); ++i) {
    FaceKey sub;
    sub.reserve(face.size() - 1);
    for (std::size_t j = 0; j < face.size(); ++j)
      if (j != i) sub.push_back(face[j]);
    out.add(sub, (i % 2 == 0) ? 1 : -1);
  }
  return out;
}

inline SignedChain boundary_chain(const SignedChain& c) {
  SignedChain out;
  for (const auto& [f, coeff] : c.terms) {
    SignedChain b = boundary_chain(f);
    for (const auto& [g, w] : b.terms) out.add(g, w * coeff);
  }
  return out;
}

}  // namespace htk::core
