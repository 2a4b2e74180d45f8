#pragma once
#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "htk/binomial.hpp"

namespace htk::core {

// A face is its strictly increasing vertex list.
using FaceKey = std::vector<std::int32_t>;

inline void validate_face(std::span<const std::int32_t> face, std::int32_t n) {
  if (face.empty()) throw std::invalid_argument("empty face");
  for (std::size_t i = 0; i < face.size(); ++i) {
    if (face[i] < 0 || face[i] >= n)
      throw std::invalid_argument("vertex out of range: " + std::to_string(face[i]));
    if (i > 0 && face[i] <= face[i - 1])
      throw std::invalid_argument("face vertices must be strictly increasing");
  }
}

inline std::uint64_t face_rank(std::span<const std::int32_t> face, std::int32_t n) {
  validate_face(face, n);
  return colex_rank(face);
}

inline FaceKey face_unrank(std::uint64_t rank, int k, std::int32_t n) {
  if (rank >= choose(n, k)) throw std::invalid_argument("face rank out of range");
  FaceKey f(static_cast<std::size_t>(k));
  colex_unrank(rank, k, f.data());
  return f;
}

// the n-d cofaces v·tau of a (d-1)-face tau, in increasing v order
inline std::vector<FaceKey> cofaces(const FaceKey& tau, std::int32_t n) {
  std::vector<FaceKey> out;
  out.reserve(static_cast<std::size_t>(n) - tau.size());
  for (std::int32_t v = 0; v < n; ++v) {
    if (std::binary_search(tau.begin(), tau.end(), v)) continue;
    FaceKey f = tau;
    f.insert(std::lower_bound(f.begin(), f.end(), v), v);
    out.push_back(std::move(f));
  }
  return out;
}

// d-complex with (implicitly) full (d-1)-skeleton; only d-faces are stored,
// as sorted colex ranks.
struct SimplicialComplex {
  std::int32_t n = 0;
  std::int32_t d = 0;
  std::vector<std::uint64_t> faces;  // sorted, distinct

  SimplicialComplex() = default;
  SimplicialComplex(std::int32_t n_, std::int32_t d_) : n(n_), d(d_) {
    if (d < 1 || n <= d) throw std::invalid_argument("need n > d >= 1");
  }

  std::uint64_t face_space() const { return choose(n, d + 1); }
  std::size_t size() const { return faces.size(); }

  bool has(std::uint64_t rank) const {
    return std::binary_search(faces.begin(), faces.end(), rank);
  }

  // bulk constructor from keys; rejects duplicates
  static SimplicialComplex from_faces(std::int32_t n, std::int32_t d,
                                      const std::vector<FaceKey>& keys) {
    SimplicialComplex x(n, d);
    x.faces.reserve(keys.size());
    for (const auto& f : keys) {
      if (static_cast<std::int32_t>(f.size()) != d + 1)
        throw std::invalid_argument("face has wrong dimension");
      x.faces.push_back(face_rank(f, n));
    }
    std::sort(x.faces.begin(), x.faces.end());
    if (std::adjacent_find(x.faces.begin(), x.faces.end()) != x.faces.end())
      throw std::invalid_argument("duplicate face");
    return x;
  }

  static SimplicialComplex from_ranks(std::int32_t n, std::int32_t d,
                                      std::vector<std::uint64_t> ranks) {
    SimplicialComplex x(n, d);
    std::sort(ranks.begin(), ranks.end());
    if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end())
      throw std::invalid_argument("duplicate face");
    if (!ranks.empty() && ranks.back() >= x.face_space())
      throw std::invalid_argument("face rank out of range");
    x.faces = std::move(ranks);
    return x;
  }

  FaceKey face_key(std::size_t i) const { return face_unrank(faces[i], d + 1, n); }

  bool operator==(const SimplicialComplex& o) const {
    return n == o.n && d == o.d && faces == o.faces;
  }
};

}  // namespace htk::core
