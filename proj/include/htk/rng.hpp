#pragma once
#include <cassert>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace htk::models {

// Counter-based 64-bit generator (SplitMix64 output function over a keyed
// counter). Substreams are derived from (master seed, purpose tag, index),
// so trial-parallel execution reproduces the sequential results bit-for-bit.
// Distribution sampling is implemented here rather than via <random> because
// the standard distributions are not bit-stable across library versions.
struct Rng {
  std::uint64_t key;
  std::uint64_t ctr = 0;

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  static constexpr std::uint64_t tag(std::string_view purpose) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (char c : purpose) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return h;
  }

  explicit Rng(std::uint64_t seed) : key(seed) {}

  Rng substream(std::uint64_t purpose_tag, std::uint64_t index = 0) const {
    std::uint64_t k = mix(key ^ (purpose_tag * 0xD1342543DE82EF95ULL));
    k = mix(k ^ (index * 0xAF251AF3B0F025B5ULL));
    return Rng(k);
  }

  Rng substream(std::string_view purpose, std::uint64_t index = 0) const {
    return substream(tag(purpose), index);
  }

  std::uint64_t next() { return mix(key + (++ctr) * kGamma); }

  // uniform in [0, bound) via Lemire rejection; bound > 0
  std::uint64_t below(std::uint64_t bound) {
    assert(bound > 0);
    while (true) {
      std::uint64_t x = next();
      unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
      std::uint64_t lo = static_cast<std::uint64_t>(m);
      if (lo >= bound || lo >= static_cast<std::uint64_t>(-bound) % bound)
        return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // uniform double in [0,1) with 53 random bits
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) { return real() < prob; }

  // Poisson by CDF inversion; fine for the small means used here (<= ~32)
  std::uint64_t poisson(double lambda) {
    assert(lambda >= 0 && lambda <= 64);
    double u = real();
    double pk = std::exp(-lambda), cdf = pk;
    std::uint64_t k = 0;
    while (u >= cdf && k < 4096) {
      ++k;
      pk *= lambda / static_cast<double>(k);
      cdf += pk;
    }
    return k;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }
};

}  // namespace htk::models
