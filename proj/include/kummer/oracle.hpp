// Reference-grade helpers for tests: naive scalar multiplication over any
// affine addition law, quadratic-character utilities, random point sampling,
// and toy-curve searches that return a base point of known odd prime order.
// Nothing here is constant-time or counted; it exists to check the library.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>

#include "kummer/ecurve.hpp"
#include "kummer/fastkummer.hpp"
#include "kummer/field.hpp"
#include "kummer/genus2.hpp"
#include "kummer/scalar.hpp"

namespace kummer::oracle {

template <class Add, class Pt>
Pt naive_mul(const Add& add, const Pt& id, const Pt& P, const bigint& m) {
  if (m == 0) return id;
  Pt acc = id;
  for (int i = (int)bit_length(m) - 1; i >= 0; --i) {
    acc = add(acc, acc);
    if (bit_test(m, (unsigned)i)) acc = add(acc, P);
  }
  return acc;
}

inline bool is_square(const Field& F, fe x) {
  if (x == 0) return true;
  return F.pow_raw(x, (F.q() - 1) / 2) == 1;
}

inline bool is_small_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline fe random_fe(const Field& F, std::mt19937_64& rng) {
  u128 v = ((u128)rng() << 64) | rng();
  return F.from_u128(v);
}

inline bigint random_scalar(int bits, std::mt19937_64& rng, bool force_top = true) {
  bigint v = 0;
  for (int i = 0; i < bits; i += 32) v = (v << 32) | (std::uint32_t)rng();
  v &= (bigint(1) << bits) - 1;
  if (force_top) bit_set(v, (unsigned)(bits - 1));
  return v;
}

// ---------------------------------------------------------------------------
// Random points over large fields (correctness fodder; y from a square rhs).

inline AffinePoint mont_random_point(const Field& F, const MontgomeryCurve& cv,
                                     std::mt19937_64& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    fe x = random_fe(F, rng);
    fe rhs = F.mul_raw(
        x, F.add(nullptr, F.mul_raw(x, F.add(nullptr, x, cv.A)), (fe)1));
    rhs = F.mul_raw(rhs, F.inv(nullptr, cv.B));
    if (rhs == 0) continue;
    auto y = F.sqrt(nullptr, rhs);
    if (y) return {x, *y, false};
  }
  throw std::runtime_error("no Montgomery point found");
}

inline AffinePoint weier_random_point(const Field& F, const WeierstrassCurve& cv,
                                      std::mt19937_64& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    fe x = random_fe(F, rng);
    fe rhs = F.add(nullptr, F.mul_raw(F.mul_raw(x, x), x),
                   F.add(nullptr, F.mul_raw(cv.a, x), cv.b));
    if (rhs == 0) continue;
    auto y = F.sqrt(nullptr, rhs);
    if (y) return {x, *y, false};
  }
  throw std::runtime_error("no Weierstrass point found");
}

inline AffinePoint edwards_random_point(const Field& F, const EdwardsCurve& cv,
                                        std::mt19937_64& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    fe y = random_fe(F, rng);
    fe num = F.sub(nullptr, (fe)1, F.mul_raw(y, y));
    fe den = F.sub(nullptr, (fe)1, F.mul_raw(cv.d, F.mul_raw(y, y)));
    if (den == 0) continue;
    fe xx = F.mul_raw(num, F.inv(nullptr, den));
    if (xx == 0) continue;
    auto x = F.sqrt(nullptr, xx);
    if (x) return {*x, y, false};
  }
  throw std::runtime_error("no Edwards point found");
}

// ---------------------------------------------------------------------------
// Toy subgroups: search a small field for a curve whose point count is
// 2^v * r with r an odd prime, and hand back a generator of the r-part.

template <class Curve>
struct ToySubgroup {
  Curve curve;
  AffinePoint base;       // order exactly r
  std::uint64_t order;    // r
  std::uint64_t cofactor;  // 2^v
};

namespace detail {

inline std::uint64_t split_odd(std::uint64_t n, std::uint64_t& cof) {
  cof = 1;
  while (n % 2 == 0) { n /= 2; cof *= 2; }
  return n;
}

}  // namespace detail

inline ToySubgroup<MontgomeryCurve> toy_montgomery(const Field& F,
                                                   std::uint64_t min_order,
                                                   std::mt19937_64& rng) {
  std::uint64_t p = (std::uint64_t)F.q();
  for (int tries = 0; tries < 20000; ++tries) {
    fe A = random_fe(F, rng), B = random_fe(F, rng);
    if (B == 0) continue;
    fe a24den = F.sub(nullptr, F.mul_raw(A, A), F.from_u64(4));
    if (a24den == 0) continue;
    MontgomeryCurve cv(F, A, B);
    fe invB = F.inv(nullptr, B);
    std::uint64_t count = 1;  // infinity
    for (std::uint64_t xi = 0; xi < p; ++xi) {
      fe x = (fe)xi;
      fe rhs = F.mul_raw(
          x, F.add(nullptr, F.mul_raw(x, F.add(nullptr, x, A)), (fe)1));
      rhs = F.mul_raw(rhs, invB);
      if (rhs == 0) count += 1;
      else if (is_square(F, rhs)) count += 2;
    }
    std::uint64_t cof;
    std::uint64_t r = detail::split_odd(count, cof);
    if (r < min_order || !is_small_prime(r)) continue;
    MontgomeryBackend bk(F, cv);
    auto add = [&](const AffinePoint& a, const AffinePoint& b) {
      return bk.add_affine(a, b);
    };
    AffinePoint id{0, 0, true};
    for (int pt = 0; pt < 50; ++pt) {
      AffinePoint G = mont_random_point(F, cv, rng);
      AffinePoint P = naive_mul(add, id, G, bigint(cof));
      if (P.inf) continue;
      if (!naive_mul(add, id, P, bigint(r)).inf) continue;
      return {cv, P, r, cof};
    }
  }
  throw std::runtime_error("no toy Montgomery subgroup found");
}

inline ToySubgroup<WeierstrassCurve> toy_weierstrass(const Field& F,
                                                     std::uint64_t min_order,
                                                     std::mt19937_64& rng) {
  std::uint64_t p = (std::uint64_t)F.q();
  for (int tries = 0; tries < 20000; ++tries) {
    fe a = random_fe(F, rng), b = random_fe(F, rng);
    fe a3 = F.mul_raw(F.mul_raw(a, a), a);
    fe disc = F.add(nullptr, F.mul_raw(a3, F.from_u64(4)),
                    F.mul_raw(F.mul_raw(b, b), F.from_u64(27)));
    if (disc == 0) continue;
    WeierstrassCurve cv(F, a, b);
    std::uint64_t count = 1;
    for (std::uint64_t xi = 0; xi < p; ++xi) {
      fe x = (fe)xi;
      fe rhs = F.add(nullptr, F.mul_raw(F.mul_raw(x, x), x),
                     F.add(nullptr, F.mul_raw(a, x), b));
      if (rhs == 0) count += 1;
      else if (is_square(F, rhs)) count += 2;
    }
    std::uint64_t cof;
    std::uint64_t r = detail::split_odd(count, cof);
    if (r < min_order || !is_small_prime(r)) continue;
    WeierstrassBackend bk(F, cv);
    auto add = [&](const AffinePoint& x, const AffinePoint& y) {
      return bk.add_affine(x, y);
    };
    AffinePoint id{0, 0, true};
    for (int pt = 0; pt < 50; ++pt) {
      AffinePoint G = weier_random_point(F, cv, rng);
      AffinePoint P = naive_mul(add, id, G, bigint(cof));
      if (P.inf) continue;
      if (!naive_mul(add, id, P, bigint(r)).inf) continue;
      return {cv, P, r, cof};
    }
  }
  throw std::runtime_error("no toy Weierstrass subgroup found");
}

inline ToySubgroup<EdwardsCurve> toy_edwards(const Field& F,
                                             std::uint64_t min_order,
                                             std::mt19937_64& rng) {
  std::uint64_t p = (std::uint64_t)F.q();
  for (int tries = 0; tries < 20000; ++tries) {
    fe r0 = random_fe(F, rng);
    if (r0 == 0) continue;
    fe d = F.mul_raw(r0, r0);
    if (d == 0 || d == 1) continue;
    EdwardsCurve cv(F, r0);
    // affine solutions of x^2 + y^2 = 1 + d x^2 y^2, plus the four points at
    // infinity the square-d closure acquires (all of 2-power order)
    std::uint64_t count = 4;
    for (std::uint64_t yi = 0; yi < p; ++yi) {
      fe y = (fe)yi;
      fe num = F.sub(nullptr, (fe)1, F.mul_raw(y, y));
      fe den = F.sub(nullptr, (fe)1, F.mul_raw(d, F.mul_raw(y, y)));
      if (den == 0) continue;
      fe xx = F.mul_raw(num, F.inv(nullptr, den));
      if (xx == 0) count += 1;
      else if (is_square(F, xx)) count += 2;
    }
    std::uint64_t cof;
    std::uint64_t r = detail::split_odd(count, cof);
    if (r < min_order || !is_small_prime(r)) continue;
    EdwardsBackend bk(F, cv);
    auto add = [&](const AffinePoint& x, const AffinePoint& y) {
      return bk.add(nullptr, x, y);
    };
    AffinePoint id{0, 1, false};
    for (int pt = 0; pt < 50; ++pt) {
      try {
        AffinePoint G = edwards_random_point(F, cv, rng);
        AffinePoint P = naive_mul(add, id, G, bigint(cof));
        if (P == id) continue;
        if (!(naive_mul(add, id, P, bigint(r)) == id)) continue;
        return {cv, P, r, cof};
      } catch (const ECurveError&) {
        continue;  // exceptional case of the incomplete law; try another point
      }
    }
  }
  throw std::runtime_error("no toy Edwards subgroup found");
}

// ---------------------------------------------------------------------------
// Genus-2 helpers built on the Cantor oracle.

inline MumfordPoint jac_naive_mul(const Genus2Curve& C, const MumfordPoint& P,
                                  const bigint& m) {
  auto add = [&](const MumfordPoint& A, const MumfordPoint& B) {
    return cantor_add(C, A, B);
  };
  return naive_mul(add, MumfordPoint::identity(), P, m);
}

// A point (x, y) on y^2 = f(x), sampled by rejection.
inline std::pair<fe, fe> g2_curve_point(const Genus2Curve& C, std::mt19937_64& rng) {
  const Field& F = C.field();
  auto f = C.poly();
  for (int tries = 0; tries < 100000; ++tries) {
    fe x = random_fe(F, rng);
    fe rhs = g2poly::eval(F, f, x);
    auto y = F.sqrt(nullptr, rhs);
    if (!y) continue;
    fe yy = (rng() & 1) ? F.neg(nullptr, *y) : *y;
    if (yy == 0) continue;  // avoid two-torsion support
    return {x, yy};
  }
  throw std::runtime_error("no affine curve point found");
}

// A generic Jacobian point: the divisor class of two affine curve points.
// Composing random such classes under Cantor covers irreducible-u classes too.
inline MumfordPoint g2_random_point(const Genus2Curve& C, std::mt19937_64& rng) {
  const Field& F = C.field();
  for (int tries = 0; tries < 10000; ++tries) {
    auto [x1, y1] = g2_curve_point(C, rng);
    auto [x2, y2] = g2_curve_point(C, rng);
    if (x1 == x2) continue;
    // u = (x - x1)(x - x2), b the interpolating line
    fe a1 = F.neg(nullptr, F.add(nullptr, x1, x2));
    fe a0 = F.mul(nullptr, x1, x2);
    fe slope = F.mul(nullptr, F.sub(nullptr, y2, y1),
                     F.inv(nullptr, F.sub(nullptr, x2, x1)));
    fe b0 = F.sub(nullptr, y1, F.mul(nullptr, slope, x1));
    MumfordPoint P = MumfordPoint::generic(a1, a0, slope, b0);
    if ((rng() & 3) == 0) {
      MumfordPoint R = cantor_add(C, P, g2_random_point(C, rng));
      if (R.tag != MumfordPoint::kGeneric) continue;
      P = R;
    }
    return P;
  }
  throw std::runtime_error("no generic Jacobian point found");
}

// A toy Rosenhain curve y^2 = x(x-1)(x-l)(x-m)(x-n) over a small prime.
inline Genus2Curve toy_rosenhain(const Field& F, std::mt19937_64& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    fe l = random_fe(F, rng), m = random_fe(F, rng), n = random_fe(F, rng);
    std::array<fe, 5> roots{0, 1, l, m, n};
    bool distinct = true;
    for (int i = 0; i < 5 && distinct; ++i)
      for (int j = i + 1; j < 5; ++j)
        if (roots[i] == roots[j]) { distinct = false; break; }
    if (!distinct) continue;
    g2poly::Poly f{1};
    for (fe r : roots) f = g2poly::mul(F, f, g2poly::Poly{F.neg(nullptr, r), 1});
    std::array<fe, 7> coeffs{};
    for (std::size_t k = 0; k < f.size(); ++k) coeffs[k] = f[k];
    return Genus2Curve(F, coeffs);
  }
  throw std::runtime_error("no toy Rosenhain curve found");
}

// Toy fast-Kummer parameters over a small prime: random theta constants with
// a square CD/(AB), e/f derived from a root, and distinct Rosenhain roots.
inline FastKummerParams toy_fast_kummer(const Field& F, std::mt19937_64& rng) {
  for (int tries = 0; tries < 100000; ++tries) {
    fe a = random_fe(F, rng), b = random_fe(F, rng);
    fe c = random_fe(F, rng), d = random_fe(F, rng);
    if (a == 0 || b == 0 || c == 0 || d == 0) continue;
    fe A = F.add(nullptr, F.add(nullptr, a, b), F.add(nullptr, c, d));
    fe B = F.sub(nullptr, F.add(nullptr, a, b), F.add(nullptr, c, d));
    fe C = F.sub(nullptr, F.add(nullptr, a, c), F.add(nullptr, b, d));
    fe D = F.sub(nullptr, F.add(nullptr, a, d), F.add(nullptr, b, c));
    if (A == 0 || B == 0 || C == 0 || D == 0) continue;
    fe s = F.mul_raw(F.mul_raw(C, D),
                     F.inv(nullptr, F.mul_raw(A, B)));
    auto alpha = F.sqrt(nullptr, s);
    if (!alpha || *alpha == 1 || F.add(nullptr, *alpha, (fe)1) == 0) continue;
    fe al = (rng() & 1) ? F.neg(nullptr, *alpha) : *alpha;
    fe e = F.add(nullptr, (fe)1, al);
    fe f = F.sub(nullptr, (fe)1, al);
    if (e == 0 || f == 0) continue;
    try {
      return build_params(F, a, b, c, d, e, f);
    } catch (const FastKummerError&) {
      continue;
    }
  }
  throw std::runtime_error("no toy fast Kummer parameters found");
}

// A toy squarefree sextic curve (general shape, f6 != 0).
inline Genus2Curve toy_sextic(const Field& F, std::mt19937_64& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    std::array<fe, 7> coeffs;
    for (auto& c : coeffs) c = random_fe(F, rng);
    if (coeffs[6] == 0 || coeffs[0] == 0) continue;
    try {
      return Genus2Curve(F, coeffs);
    } catch (const Genus2Error&) {
      continue;
    }
  }
  throw std::runtime_error("no toy sextic curve found");
}

}  // namespace kummer::oracle
