#pragma once

// Local reduction data of an integral Weierstrass model at a prime p:
// Kodaira type, conductor exponent, Tamagawa number. Follows Tate's
// algorithm; the input model need not be minimal at p (the algorithm
// rescales and reports the scaling it applied).
//
// For p >= 5 the classification goes through the (v(c4), v(Delta)) table
// plus residue tests; for p in {2,3} the full step-by-step algorithm runs,
// with translations found by exhaustive search mod p (p is tiny there).
// Type I_n* at p >= 5 is not reachable for the curve families in this
// project and is reported as an error rather than half-implemented.

#include <array>
#include <cstdlib>
#include <string>

#include "ltwist/arith.hpp"
#include "ltwist/errors.hpp"

namespace ltwist {

enum class Kodaira { I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar };

inline std::string kodaira_name(Kodaira k, int n = 0) {
  switch (k) {
    case Kodaira::I0: return "I0";
    case Kodaira::In: return "I" + std::to_string(n);
    case Kodaira::II: return "II";
    case Kodaira::III: return "III";
    case Kodaira::IV: return "IV";
    case Kodaira::I0star: return "I0*";
    case Kodaira::Instar: return "I" + std::to_string(n) + "*";
    case Kodaira::IVstar: return "IV*";
    case Kodaira::IIIstar: return "III*";
    case Kodaira::IIstar: return "II*";
  }
  return "?";
}

struct EModel {
  i128 a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;

  i128 b2() const { return a1 * a1 + 4 * a2; }
  i128 b4() const { return 2 * a4 + a1 * a3; }
  i128 b6() const { return a3 * a3 + 4 * a6; }
  i128 b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
  i128 c4() const { return b2() * b2() - 24 * b4(); }
  i128 c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
  i128 disc() const {
    i128 B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
  }

  // x -> x + r, y -> y + s*x + t (u = 1)
  EModel translated(i128 r, i128 s, i128 t) const {
    EModel e;
    e.a1 = a1 + 2 * s;
    e.a2 = a2 - s * a1 + 3 * r - s * s;
    e.a3 = a3 + r * a1 + 2 * t;
    e.a4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
    e.a6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    return e;
  }

  // (x,y) -> (x/p^2, y/p^3); valid when all resulting coefficients are integral
  EModel rescaled_down(i128 p) const {
    EModel e;
    e.a1 = a1 / p;
    e.a2 = a2 / (p * p);
    e.a3 = a3 / (p * p * p);
    e.a4 = a4 / (p * p * p * p);
    e.a6 = a6 / (p * p * p * p * p * p);
    return e;
  }
};

struct LocalReduction {
  Kodaira type = Kodaira::I0;
  int n = 0;       // index for In / In*
  u32 f = 0;       // conductor exponent at p
  u64 c = 1;       // Tamagawa number at p
  u32 vdisc = 0;   // valuation of the minimal discriminant
  u64 scale = 1;   // u such that the input was the minimal model scaled up by u
};

namespace tate_detail {

inline u32 vp(i128 x, i128 p) {
  if (x == 0) return 10000;  // effectively infinite
  u32 v = 0;
  while (x % p == 0) x /= p, ++v;
  return v;
}

inline u64 umod(i128 x, i128 p) {
  i128 r = x % p;
  if (r < 0) r += p;
  return static_cast<u64>(r);
}

inline bool is_qr(u64 a, u64 p) {  // p odd prime, a != 0 mod p
  return mod_pow(a % p, (p - 1) / 2, p) == 1;
}

// Number of roots of T^3 + A T^2 + B T + C over F_p (counted without
// multiplicity), via gcd(T^p - T, P). Only correct counts 0/1/2/3 are needed.
inline int cubic_root_count(u64 A, u64 B, u64 C, u64 p) {
  if (p <= 257) {  // scan
    int cnt = 0;
    for (u64 t = 0; t < p; ++t) {
      u64 val = (mul_mod(mul_mod(t, t, p), t, p) + mul_mod(A, mul_mod(t, t, p), p) +
                 mul_mod(B, t, p) + C) % p;
      if (val == 0) ++cnt;
    }
    return cnt;
  }
  // poly arithmetic mod P, coefficients mod p, degree < 3
  using Poly = std::array<u64, 3>;
  auto mulmodP = [&](const Poly& f, const Poly& g) {
    u64 prod[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        prod[i + j] = (prod[i + j] + mul_mod(f[i], g[j], p)) % p;
    // reduce T^3 = -(A T^2 + B T + C), then T^4
    for (int d = 4; d >= 3; --d) {
      u64 lead = prod[d];
      if (!lead) continue;
      prod[d] = 0;
      prod[d - 1] = (prod[d - 1] + mul_mod(lead, p - A % p, p)) % p;
      prod[d - 2] = (prod[d - 2] + mul_mod(lead, p - B % p, p)) % p;
      prod[d - 3] = (prod[d - 3] + mul_mod(lead, p - C % p, p)) % p;
    }
    return Poly{prod[0], prod[1], prod[2]};
  };
  // T^p mod P
  Poly result{1, 0, 0}, base{0, 1, 0};
  u64 e = p;
  while (e) {
    if (e & 1) result = mulmodP(result, base);
    base = mulmodP(base, base);
    e >>= 1;
  }
  // gcd(T^p - T, P): first operand has degree < 3
  result[1] = (result[1] + p - 1) % p;
  // Euclid on polynomials r0 = P (deg 3), r1 = result
  std::array<u64, 4> r0{C % p, B % p, A % p, 1};
  std::array<u64, 4> r1{result[0], result[1], result[2], 0};
  auto deg = [&](const std::array<u64, 4>& f) {
    for (int d = 3; d >= 0; --d)
      if (f[d]) return d;
    return -1;
  };
  while (true) {
    int d1 = deg(r1);
    if (d1 < 0) return deg(r0) < 0 ? 3 : deg(r0);  // r1 == 0 -> gcd = r0
    // r0 mod r1
    int d0 = deg(r0);
    while (d0 >= d1) {
      u64 q = mul_mod(r0[d0], mod_pow(r1[d1], p - 2, p), p);
      for (int i = 0; i <= d1; ++i)
        r0[d0 - d1 + i] = (r0[d0 - d1 + i] + p - mul_mod(q, r1[i], p)) % p;
      while (d0 >= 0 && r0[d0] == 0) --d0;
      if (d0 < 0) break;
    }
    std::swap(r0, r1);
  }
}

// Does Y^2 + bY - c have a root mod p?
inline bool quad_y_splits(i128 b, i128 c, u64 p) {
  if (p == 2) {
    for (u64 y = 0; y < 2; ++y)
      if ((umod(y * y + umod(b, 2) * y, 2) + umod(-c, 2)) % 2 == 0) return true;
    return false;
  }
  u64 d = umod(b * b + 4 * c, p);
  return d == 0 || is_qr(d, p);
}

// Does aX^2 + bX + c (a a unit) have a root mod p?
inline bool quad_x_splits(i128 a, i128 b, i128 c, u64 p) {
  if (p == 2) {
    for (u64 x = 0; x < 2; ++x)
      if (umod(a * x * x + b * x + c, 2) == 0) return true;
    return false;
  }
  u64 d = umod(b * b - 4 * a * c, p);
  return d == 0 || is_qr(d, p);
}

}  // namespace tate_detail

inline LocalReduction tate_local(EModel e, u64 prime) {
  using namespace tate_detail;
  const i128 p = prime;
  LocalReduction out;
  u64 scale = 1;

restart:
  i128 disc = e.disc();
  if (disc == 0) throw std::domain_error("tate_local: singular curve (disc = 0)");
  u32 n = vp(disc, p);
  out.vdisc = n;
  out.scale = scale;
  if (n == 0) {
    out.type = Kodaira::I0;
    out.f = 0;
    out.c = 1;
    return out;
  }

  if (prime >= 5) {
    u32 vc4 = vp(e.c4(), p);
    if (vc4 == 0) {
      // multiplicative: split iff -c6 is a square mod p
      out.type = Kodaira::In;
      out.n = static_cast<int>(n);
      out.f = 1;
      bool split = is_qr(umod(-e.c6(), p), prime);
      out.c = split ? n : (n % 2 == 0 ? 2 : 1);
      return out;
    }
    if (vc4 >= 4 && n >= 12) {  // not minimal at p
      e = e.rescaled_down(p);
      scale *= prime;
      goto restart;
    }
    // additive, tame: f = 2; type from (v(c4), v(disc))
    out.f = 2;
    // local short model: y^2 = x^3 + A x + B with A = -c4/48, B = -c6/864
    const u64 inv48 = mod_pow(48 % prime, prime - 2, prime);
    const u64 inv864 = mod_pow(864 % prime, prime - 2, prime);
    auto Ared = [&](u32 k) {  // (A / p^k) mod p
      i128 q = e.c4();
      for (u32 i = 0; i < k; ++i) q /= p;
      return mul_mod(umod(-q, p), inv48, prime);
    };
    auto Bred = [&](u32 k) {  // (B / p^k) mod p
      i128 q = e.c6();
      for (u32 i = 0; i < k; ++i) q /= p;
      return mul_mod(umod(-q, p), inv864, prime);
    };
    if (vc4 == 2 && n >= 7) {
      // I_{n-6}* — does not arise for the twist families this project
      // evaluates; refuse rather than guess the component group.
      throw internal_error("tate_local: I_n* at p >= 5 not supported (p = " +
                           std::to_string(prime) + ")");
    }
    switch (n) {
      case 2: out.type = Kodaira::II; out.c = 1; return out;
      case 3: out.type = Kodaira::III; out.c = 2; return out;
      case 4: {
        out.type = Kodaira::IV;
        out.c = is_qr(Bred(2), prime) ? 3 : 1;
        return out;
      }
      case 6: {
        out.type = Kodaira::I0star;
        u64 A2 = vc4 >= 3 ? 0 : Ared(2);
        u64 B3 = vp(e.c6(), p) >= 4 ? 0 : Bred(3);
        out.c = 1 + cubic_root_count(0, A2, B3, prime);
        return out;
      }
      case 8: {
        out.type = Kodaira::IVstar;
        out.c = is_qr(Bred(4), prime) ? 3 : 1;
        return out;
      }
      case 9: out.type = Kodaira::IIIstar; out.c = 2; return out;
      case 10: out.type = Kodaira::IIstar; out.c = 1; return out;
      default:
        throw internal_error("tate_local: unclassified reduction at p = " + std::to_string(prime));
    }
  }

  // ----- p = 2 or 3: full algorithm with searched translations -----

  // move the singular point to (0,0)
  {
    bool moved = false;
    for (u64 r = 0; r < prime && !moved; ++r) {
      for (u64 t = 0; t < prime && !moved; ++t) {
        EModel cand = e.translated(static_cast<i128>(r), 0, static_cast<i128>(t));
        if (umod(cand.a3, p) == 0 && umod(cand.a4, p) == 0 && umod(cand.a6, p) == 0) {
          e = cand;
          moved = true;
        }
      }
    }
    if (!moved) throw internal_error("tate_local: singular point not found mod p");
  }

  if (umod(e.b2(), p) != 0) {
    // multiplicative: tangent cone Y^2 + a1 XY - a2 X^2
    out.type = Kodaira::In;
    out.n = static_cast<int>(n);
    out.f = 1;
    bool split = false;
    for (u64 t = 0; t < prime && !split; ++t)
      if (umod(static_cast<i128>(t) * t + e.a1 * t - e.a2, p) == 0) split = true;
    out.c = split ? n : (n % 2 == 0 ? 2 : 1);
    return out;
  }

  if (vp(e.a6, p) < 2) {
    out.type = Kodaira::II;
    out.f = n;
    out.c = 1;
    return out;
  }
  if (vp(e.b8(), p) < 3) {
    out.type = Kodaira::III;
    out.f = n - 1;
    out.c = 2;
    return out;
  }
  if (vp(e.b6(), p) < 3) {
    out.type = Kodaira::IV;
    out.f = n - 2;
    out.c = quad_y_splits(e.a3 / p, e.a6 / (p * p), prime) ? 3 : 1;
    return out;
  }

  // normalize to v(a1) >= 1, v(a2) >= 1, v(a3) >= 2, v(a4) >= 2, v(a6) >= 3
  {
    bool ok = false;
    for (u64 s = 0; s < prime && !ok; ++s) {
      for (u64 t = 0; t < prime * prime && !ok; ++t) {
        EModel cand = e.translated(0, static_cast<i128>(s), static_cast<i128>(t));
        if (vp(cand.a1, p) >= 1 && vp(cand.a2, p) >= 1 && vp(cand.a3, p) >= 2 &&
            vp(cand.a4, p) >= 2 && vp(cand.a6, p) >= 3) {
          e = cand;
          ok = true;
        }
      }
    }
    if (!ok) throw internal_error("tate_local: step-7 normalization failed");
  }

  // P(T) = T^3 + (a2/p) T^2 + (a4/p^2) T + (a6/p^3) mod p
  {
    const i128 A = e.a2 / p, B = e.a4 / (p * p), C = e.a6 / (p * p * p);
    auto Pval = [&](u64 t) {
      return umod(static_cast<i128>(t) * t * t + A * t * t + B * t + C, p);
    };
    auto Pderiv = [&](u64 t) { return umod(3 * static_cast<i128>(t) * t + 2 * A * t + B, p); };
    u64 dbl_root = prime;  // sentinel: none
    int simple_roots = 0;
    bool triple = false;
    for (u64 t = 0; t < prime; ++t) {
      if (Pval(t) != 0) continue;
      if (Pderiv(t) != 0) {
        ++simple_roots;
      } else {
        dbl_root = t;
        // triple iff P(T) == (T - t)^3, i.e. A == -3t mod p as well
        triple = umod(A + 3 * static_cast<i128>(t), p) == 0;
      }
    }

    if (dbl_root == prime) {
      out.type = Kodaira::I0star;
      out.f = n - 4;
      out.c = 1 + simple_roots;
      return out;
    }

    if (!triple) {
      // I_m* loop, m >= 1: alternate Y- and X-quadratic tests, deepening the
      // valuations until one has distinct roots.
      e = e.translated(static_cast<i128>(dbl_root) * p, 0, 0);
      i128 mx = p * p, my = p * p;
      int m = 1;
      auto exact_div = [](i128 x, i128 d) {
        if (x % d != 0) throw internal_error("tate_local: inexact division in I_n* loop");
        return x / d;
      };
      while (true) {
        i128 a3t = exact_div(e.a3, my);
        i128 a6t = exact_div(e.a6, mx * my);
        if (umod(a3t * a3t + 4 * a6t, p) != 0) {
          out.type = Kodaira::Instar;
          out.n = m;
          out.f = n - 4 - m;
          out.c = quad_y_splits(a3t, a6t, prime) ? 4 : 2;
          return out;
        }
        {  // double root: shift y by my * r0
          u64 r0 = prime == 2 ? umod(a6t, 2) : umod(-a3t * ((prime + 1) / 2), p);
          e = e.translated(0, 0, my * static_cast<i128>(r0));
          ++m;
          my *= p;
        }
        i128 a2t = exact_div(e.a2, p);
        i128 a4t = exact_div(e.a4, p * mx);
        a6t = exact_div(e.a6, mx * my);
        if (umod(a4t * a4t - 4 * a2t * a6t, p) != 0) {
          out.type = Kodaira::Instar;
          out.n = m;
          out.f = n - 4 - m;
          out.c = quad_x_splits(a2t, a4t, a6t, prime) ? 4 : 2;
          return out;
        }
        {  // double root of a2t X^2 + a4t X + a6t: shift x by mx * r0
          u64 r0;
          if (prime == 2) {
            r0 = umod(a6t, 2);  // a2t is a unit, root = sqrt(a6t/a2t)
          } else {
            u64 inv = mod_pow(umod(2 * a2t, p), prime - 2, prime);
            r0 = mul_mod(umod(-a4t, p), inv, prime);
          }
          e = e.translated(mx * static_cast<i128>(r0), 0, 0);
          ++m;
          mx *= p;
        }
      }
    }

    // triple root: translate it to 0
    e = e.translated(static_cast<i128>(dbl_root) * p, 0, 0);
  }

  // now v(a2) >= 2, v(a4) >= 3, v(a6) >= 4
  {
    i128 a3t = e.a3 / (p * p);
    i128 a6t = e.a6 / (p * p * p * p);
    if (umod(a3t * a3t + 4 * a6t, p) != 0) {
      out.type = Kodaira::IVstar;
      out.f = n - 6;
      out.c = quad_y_splits(a3t, a6t, prime) ? 3 : 1;
      return out;
    }
    u64 r0 = prime == 2 ? umod(a6t, 2) : umod(-a3t * ((prime + 1) / 2), p);
    e = e.translated(0, 0, p * p * static_cast<i128>(r0));
  }

  if (vp(e.a4, p) < 4) {
    out.type = Kodaira::IIIstar;
    out.f = n - 7;
    out.c = 2;
    return out;
  }
  if (vp(e.a6, p) < 6) {
    out.type = Kodaira::IIstar;
    out.f = n - 8;
    out.c = 1;
    return out;
  }

  e = e.rescaled_down(p);
  scale *= prime;
  goto restart;
}

}  // namespace ltwist
