#pragma once
#include <cassert>
#include <cstdint>

namespace htk::linalg {

// Default certification primes: fixed primes just below 2^62 so one-word
// Montgomery arithmetic never overflows and 4p fits in 64 bits (lets us defer
// reductions in additive inner loops).
inline constexpr std::uint64_t kPrime1 = 4611686018427387847ULL;  // 2^62 - 57
inline constexpr std::uint64_t kPrime2 = 4611686018427387817ULL;  // 2^62 - 87

// Montgomery context for an odd modulus p < 2^62. Values live in [0,p);
// "mont domain" values represent x*2^64 mod p.
struct Mont {
  std::uint64_t p;     // modulus
  std::uint64_t np;    // -p^{-1} mod 2^64
  std::uint64_t r1;    // 2^64 mod p  (= to(1))
  std::uint64_t r2;    // 2^128 mod p

  explicit Mont(std::uint64_t modulus) : p(modulus) {
    assert(p % 2 == 1 && p > 2 && (p >> 62) == 0);
    std::uint64_t inv = p;  // Newton: inv *= 2 - p*inv, doubles correct bits
    for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
    np = ~inv + 1;  // = -inv
    r1 = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) % p);
    r2 = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r1) << 64) % p);
  }

  std::uint64_t redc(unsigned __int128 t) const {
    std::uint64_t m = static_cast<std::uint64_t>(t) * np;
    unsigned __int128 s = t + static_cast<unsigned __int128>(m) * p;
    std::uint64_t r = static_cast<std::uint64_t>(s >> 64);
    return r >= p ? r - p : r;
  }

  // product of two mont-domain values, result in mont domain
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return redc(static_cast<unsigned __int128>(a) * b);
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
  }

  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + p - b;
  }

  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p - a; }

  std::uint64_t to(std::uint64_t x) const { return mul(x % p, r2); }
  std::uint64_t from(std::uint64_t a) const { return redc(a); }

  // signed small entry (e.g. boundary coefficients) into mont domain
  std::uint64_t to_signed(long long x) const {
    if (x >= 0) return to(static_cast<std::uint64_t>(x));
    return neg(to(static_cast<std::uint64_t>(-x)));
  }

  std::uint64_t pow(std::uint64_t base_mont, std::uint64_t e) const {
    std::uint64_t acc = r1, b = base_mont;
    while (e) {
      if (e & 1) acc = mul(acc, b);
      b = mul(b, b);
      e >>= 1;
    }
    return acc;
  }

  // inverse in mont domain (p prime)
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p - 2); }
};

}  // namespace htk::linalg
