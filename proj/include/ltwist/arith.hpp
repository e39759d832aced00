#pragma once

// Integer and modular arithmetic primitives: prime sieves, factor tables,
// twist admissibility, modular exponentiation, and the binary-quadratic-form
// representations a^2+3b^2=4p and a^2+b^2=p that drive the CM trace formulas.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "ltwist/errors.hpp"

namespace ltwist {

using u8 = uint8_t;
using u32 = uint32_t;
using u64 = uint64_t;
using i32 = int32_t;
using i64 = int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

enum class TwistFamily : u32 {
  Cubic27 = 0,   // x^3 + y^3 = m, cubefree m
  Quartic32 = 1  // y^2 = x^3 + m x, fourth-power-free m with 4 not dividing m
};

inline const char* family_name(TwistFamily f) {
  return f == TwistFamily::Cubic27 ? "cubic27" : "quartic32";
}

// ---------------------------------------------------------------------------
// Basic integer helpers
// ---------------------------------------------------------------------------

inline u64 isqrt(u64 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_perfect_square(u64 n, u64* root = nullptr) {
  u64 r = isqrt(n);
  if (root) *root = r;
  return r * r == n;
}

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

/// base^exponent mod modulus via binary exponentiation, O(log exponent)
/// multiplications with 128-bit intermediates.
inline u64 mod_pow(u64 base, u64 exponent, u64 modulus) {
  if (modulus == 1) return 0;
  u64 result = 1;
  base %= modulus;
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, modulus);
    base = mul_mod(base, base, modulus);
    exponent >>= 1;
  }
  return result;
}

// Montgomery-form exponentiation for odd moduli. Same contract as mod_pow
// but ~4x faster; used in the coefficient hot path where one m^((p-1)/3)
// is needed per table prime.
struct Montgomery {
  u64 n = 0;       // odd modulus
  u64 ninv = 0;    // -n^{-1} mod 2^64
  u64 r2 = 0;      // 2^128 mod n

  explicit Montgomery(u64 modulus) : n(modulus) {
    u64 inv = modulus;  // Newton: inv *= 2 - n*inv, five rounds for 64 bits
    for (int i = 0; i < 5; ++i) inv *= 2 - modulus * inv;
    ninv = ~inv + 1;
    u64 r = static_cast<u64>((static_cast<u128>(1) << 64) % modulus);  // 2^64 mod n
    r2 = static_cast<u64>((static_cast<u128>(r) * r) % modulus);       // 2^128 mod n
  }

  u64 redc(u128 t) const {
    u64 mfac = static_cast<u64>(t) * ninv;
    u128 s = t + static_cast<u128>(mfac) * n;
    u64 r = static_cast<u64>(s >> 64);
    return r >= n ? r - n : r;
  }
  u64 to_mont(u64 x) const { return redc(static_cast<u128>(x % n) * r2); }
  u64 from_mont(u64 x) const { return redc(x); }
  u64 mul(u64 a, u64 b) const { return redc(static_cast<u128>(a) * b); }

  u64 pow(u64 base, u64 exponent) const {
    u64 x = to_mont(base);
    u64 acc = to_mont(1);
    while (exponent > 0) {
      if (exponent & 1) acc = mul(acc, x);
      x = mul(x, x);
      exponent >>= 1;
    }
    return from_mont(acc);
  }
};

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) d >>= 1, ++r;
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sieves
// ---------------------------------------------------------------------------

// Memory budgets: a sieve allocates bound bytes, a factor table 4 bytes per
// entry. Both are capped so a typo in a CLI flag fails fast instead of
// swapping the machine.
inline constexpr u64 kMaxSieveBound = u64(1) << 32;
inline constexpr u64 kMaxFactorTableSpan = u64(1) << 28;

/// All primes <= bound, ascending.
inline std::vector<u64> sieve_primes(u64 bound) {
  if (bound < 2) throw std::domain_error("sieve_primes: bound must be >= 2");
  if (bound > kMaxSieveBound)
    throw capacity_error("sieve_primes: bound " + std::to_string(bound) +
                         " exceeds budget " + std::to_string(kMaxSieveBound));
  std::vector<u8> composite(bound + 1, 0);
  std::vector<u64> primes;
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= bound; j += i) composite[j] = 1;
  }
  return primes;
}

/// Dense table n -> smallest prime factor for lo <= n <= hi.
/// Repeated division by entries fully factors any n in range.
class SmallestFactorTable {
 public:
  SmallestFactorTable(u64 lo, u64 hi) : lo_(lo), hi_(hi) {
    if (lo < 2 || lo > hi) throw std::domain_error("smallest_factor_table: need 2 <= lo <= hi");
    if (hi - lo + 1 > kMaxFactorTableSpan)
      throw capacity_error("smallest_factor_table: span " + std::to_string(hi - lo + 1) +
                           " exceeds budget " + std::to_string(kMaxFactorTableSpan));
    spf_.assign(hi - lo + 1, 0);
    u64 root = isqrt(hi);
    std::vector<u64> small = sieve_primes(std::max<u64>(root, 2));
    for (u64 p : small) {
      u64 start = std::max(p * p, ((lo + p - 1) / p) * p);
      for (u64 n = start; n <= hi; n += p) {
        if (spf_[n - lo] == 0) spf_[n - lo] = static_cast<u32>(p);
      }
    }
    // remaining zeros are primes (or n < p^2 with no small factor)
    for (u64 n = lo; n <= hi; ++n) {
      if (spf_[n - lo] == 0) spf_[n - lo] = n <= 0xFFFFFFFFull ? static_cast<u32>(n) : 0;
    }
  }

  u64 lo() const { return lo_; }
  u64 hi() const { return hi_; }

  u64 smallest_factor(u64 n) const {
    if (n < lo_ || n > hi_) throw std::domain_error("smallest_factor_table: n out of range");
    u64 f = spf_[n - lo_];
    return f != 0 ? f : n;  // 0 marks a prime that overflowed u32
  }

 private:
  u64 lo_, hi_;
  std::vector<u32> spf_;
};

// ---------------------------------------------------------------------------
// Factorization and twist admissibility
// ---------------------------------------------------------------------------

struct FactoredInteger {
  u64 n = 1;
  std::vector<std::pair<u64, u32>> factors;  // (prime, exponent), primes ascending

  u32 omega() const { return static_cast<u32>(factors.size()); }
  u32 exponent_of(u64 p) const {
    for (const auto& [q, e] : factors)
      if (q == p) return e;
    return 0;
  }
};

/// Trial division; fine for the supported twist ranges (m <= 1e9).
inline FactoredInteger factorize(u64 n) {
  if (n == 0) throw std::domain_error("factorize: n must be positive");
  FactoredInteger f;
  f.n = n;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    u32 e = 0;
    while (n % p == 0) n /= p, ++e;
    f.factors.emplace_back(p, e);
  }
  if (n > 1) f.factors.emplace_back(n, 1);
  return f;
}

struct TwistClass {
  TwistFamily family = TwistFamily::Cubic27;
  bool admissible = false;
  u32 omega = 0;  // number of distinct prime factors
};

inline bool twist_admissible(TwistFamily family, const FactoredInteger& f) {
  for (const auto& [p, e] : f.factors) {
    if (family == TwistFamily::Cubic27) {
      if (e >= 3) return false;
    } else {
      if (e >= 4) return false;
      if (p == 2 && e >= 2) return false;  // 4 does not divide m
    }
  }
  return true;
}

inline std::pair<TwistClass, FactoredInteger> classify_twist(TwistFamily family, u64 m) {
  FactoredInteger f = factorize(m);
  TwistClass c;
  c.family = family;
  c.admissible = twist_admissible(family, f);
  c.omega = f.omega();
  return {c, f};
}

// ---------------------------------------------------------------------------
// Square roots mod p and quadratic-form representations
// ---------------------------------------------------------------------------

/// Tonelli-Shanks: square root of a mod odd prime p. Returns false when a is
/// a non-residue.
inline bool mod_sqrt(u64 a, u64 p, u64* root) {
  a %= p;
  if (a == 0) { *root = 0; return true; }
  if (p == 2) { *root = a; return true; }
  if (mod_pow(a, (p - 1) / 2, p) != 1) return false;
  if (p % 4 == 3) { *root = mod_pow(a, (p + 1) / 4, p); return true; }
  // p = 1 mod 4: full Tonelli-Shanks
  u64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) q >>= 1, ++s;
  u64 z = 2;
  while (mod_pow(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 c = mod_pow(z, q, p);
  u64 x = mod_pow(a, (q + 1) / 2, p);
  u64 t = mod_pow(a, q, p);
  int m = s;
  while (t != 1) {
    u64 tt = t;
    int i = 0;
    while (tt != 1) { tt = mul_mod(tt, tt, p); ++i; }
    u64 b = c;
    for (int j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
    x = mul_mod(x, b, p);
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    m = i;
  }
  *root = x;
  return true;
}

using QuadFormPair = std::pair<i64, i64>;  // (a, b)

namespace detail {

// Cornacchia: primitive solution of x^2 + d*y^2 = p, for prime p with -d a
// residue. Returns false when no solution exists.
inline bool cornacchia(u64 d, u64 p, u64* x_out, u64* y_out) {
  u64 r;
  if (!mod_sqrt(p - (d % p), p, &r)) return false;
  if (r < p - r) r = p - r;  // start Euclid from the larger root
  u64 a = p, b = r;
  u64 limit = isqrt(p);
  while (b > limit) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  u64 rem = p - b * b;
  if (rem % d != 0) return false;
  u64 y2 = rem / d;
  u64 y = isqrt(y2);
  if (y * y != y2) return false;
  *x_out = b;
  *y_out = y;
  return true;
}

inline void push_signed(std::set<QuadFormPair>& out, i64 a, i64 b) {
  if (b < 0) b = -b;
  if (b == 0) return;
  out.insert({a, b});
  out.insert({-a, b});
}

}  // namespace detail

// Threshold below which represent_4p uses the direct bounded search; the
// search path doubles as the oracle for the Cornacchia path.
inline constexpr u64 kRepresentSearchLimit = 1000000;

/// All (a,b) with b > 0 and a^2 + 3b^2 = 4p, by search over b <= 2*sqrt(p/3).
inline std::vector<QuadFormPair> represent_4p_search(u64 p) {
  std::set<QuadFormPair> out;
  u64 fourp = 4 * p;
  for (u64 b = 1; 3 * b * b <= fourp; ++b) {
    u64 rest = fourp - 3 * b * b;
    u64 a;
    if (is_perfect_square(rest, &a)) detail::push_signed(out, static_cast<i64>(a), static_cast<i64>(b));
  }
  return {out.begin(), out.end()};
}

/// All (a,b), b > 0, with a^2 + 3b^2 = 4p for a prime p = 1 mod 3.
/// Bounded search for small p, Cornacchia descent above; the two paths agree
/// on their overlap (tested).
inline std::vector<QuadFormPair> represent_4p(u64 p) {
  if (p % 3 != 1)
    throw std::domain_error("represent_4p: p = " + std::to_string(p) + " is not 1 mod 3");
  if (p <= kRepresentSearchLimit) return represent_4p_search(p);
  u64 u, v;
  if (!detail::cornacchia(3, p, &u, &v))
    throw internal_error("represent_4p: Cornacchia failed for p = " + std::to_string(p));
  // p = u^2 + 3v^2 expands to the three b>0 solution families of 4p.
  std::set<QuadFormPair> out;
  i64 su = static_cast<i64>(u), sv = static_cast<i64>(v);
  detail::push_signed(out, 2 * su, 2 * sv);
  detail::push_signed(out, su + 3 * sv, su - sv);
  detail::push_signed(out, su - 3 * sv, su + sv);
  return {out.begin(), out.end()};
}

/// The (a,b) with a^2 + b^2 = p, a odd, b even, both positive, p = 1 mod 4.
inline QuadFormPair two_squares(u64 p) {
  if (p % 4 != 1)
    throw std::domain_error("two_squares: p = " + std::to_string(p) + " is not 1 mod 4");
  u64 x, y;
  if (!detail::cornacchia(1, p, &x, &y))
    throw internal_error("two_squares: Cornacchia failed for p = " + std::to_string(p));
  if (x % 2 == 0) std::swap(x, y);
  return {static_cast<i64>(x), static_cast<i64>(y)};
}

}  // namespace ltwist
