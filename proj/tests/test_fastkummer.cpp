#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kummer/chain.hpp"
#include "kummer/fastkummer.hpp"
#include "kummer/oracle.hpp"

using namespace kummer;

namespace {

MumfordPoint naive_mul(const Genus2Curve& C, const MumfordPoint& P,
                       const bigint& m) {
  return oracle::naive_mul(
      [&](const MumfordPoint& x, const MumfordPoint& y) {
        return cantor_add(C, x, y);
      },
      MumfordPoint::identity(), P, m);
}

MumfordPoint random_generic(const Genus2Curve& C, std::mt19937_64& rng) {
  for (;;) {
    MumfordPoint P = oracle::g2_random_point(C, rng);
    if (P.tag == MumfordPoint::kGeneric) return P;
  }
}

bool proportional(const Field& F, const std::array<fe, 4>& x,
                  const std::array<fe, 4>& y) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (F.mul_raw(x[i], y[j]) != F.mul_raw(x[j], y[i])) return false;
  return true;
}

FastKummerPoint rescaled(const Field& F, FastKummerPoint P,
                         std::mt19937_64& rng) {
  fe s = 0;
  while (s == 0) s = oracle::random_fe(F, rng);
  for (auto& x : P.v) x = F.mul_raw(x, s);
  return P;
}

// P, Q generic with Q+P and Q-P generic too
struct PairFixture {
  MumfordPoint P, Q, QP, QmP;
};

PairFixture pair_fixture(const Genus2Curve& C, std::mt19937_64& rng) {
  const Field& F = C.field();
  for (;;) {
    MumfordPoint P = random_generic(C, rng);
    MumfordPoint Q = random_generic(C, rng);
    MumfordPoint QP = cantor_add(C, Q, P);
    MumfordPoint QmP = cantor_add(C, Q, jac_neg(F, P));
    if (QP.tag != MumfordPoint::kGeneric || QmP.tag != MumfordPoint::kGeneric)
      continue;
    return {P, Q, QP, QmP};
  }
}

bool has_zero(const FastKummerPoint& x) {
  for (fe v : x.v)
    if (v == 0) return true;
  return false;
}

std::array<fe, 4> diff_ratios(const FastKummerParams& p,
                              const FastKummerPoint& x) {
  const Field& F = p.field();
  return {1, F.mul_raw(x.v[0], F.inv(nullptr, x.v[1])),
          F.mul_raw(x.v[0], F.inv(nullptr, x.v[2])),
          F.mul_raw(x.v[0], F.inv(nullptr, x.v[3]))};
}

}  // namespace

TEST_CASE("build_params validates its preconditions") {
  Field F(1009);
  std::mt19937_64 rng(7);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);

  // lambda, mu, nu match the defining theta ratios
  auto ratio = [&](fe n, fe d) { return F.mul_raw(n, F.inv(nullptr, d)); };
  REQUIRE(p.lam == ratio(F.mul_raw(p.a, p.c), F.mul_raw(p.b, p.d)));
  REQUIRE(p.mu == ratio(F.mul_raw(p.c, p.e), F.mul_raw(p.d, p.f)));
  REQUIRE(p.nu == ratio(F.mul_raw(p.a, p.e), F.mul_raw(p.b, p.f)));
  REQUIRE(F.mul_raw(F.sqr(nullptr, p.alpha), F.mul_raw(p.A, p.B)) ==
          F.mul_raw(p.C, p.D));

  // a perturbed e breaks the alpha consistency check
  REQUIRE_THROWS_AS(
      build_params(F, p.a, p.b, p.c, p.d, F.add(nullptr, p.e, 1), p.f),
      FastKummerError);
  // zero theta constant
  REQUIRE_THROWS_AS(build_params(F, 0, p.b, p.c, p.d, p.e, p.f),
                    FastKummerError);
  // a = b collapses the dual constant D = a - b - c + d only when c = d;
  // use a quadruple with A = 0 instead: a+b+c+d = 0
  fe a = 1, b = 2, c = 3, d = F.q() - 6;
  REQUIRE_THROWS_AS(build_params(F, a, b, c, d, p.e, p.f), FastKummerError);
}

TEST_CASE("Project: identity image, surface residual, counter") {
  Field F(1009);
  std::mt19937_64 rng(11);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);
  const Genus2Curve& C = p.curve;

  REQUIRE(fk_project(p, nullptr, MumfordPoint::identity()).v == p.id_image);

  for (int t = 0; t < 200; ++t) {
    MumfordPoint P = random_generic(C, rng);
    CountCtx c;
    FastKummerPoint x = fk_project(p, &c, P);
    REQUIRE(fast_kummer_residual(p, x) == 0);
    REQUIRE(x.v[0] == 1);
    REQUIRE(c.ops == make_count(11, 1, 3, 12, 1));
  }
}

TEST_CASE("Project: special points via the two-torsion translation") {
  Field F(1009);
  std::mt19937_64 rng(13);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);
  const Genus2Curve& C = p.curve;

  // <x - lam, 0> is two-torsion: its image must be fixed by doubling
  MumfordPoint T2 = MumfordPoint::special(F, p.lam, 0);
  FastKummerPoint xT = fk_project(p, nullptr, T2);
  REQUIRE(fast_kummer_residual(p, xT) == 0);
  REQUIRE(proportional(F, fk_xdbl(p, nullptr, xT).v, p.id_image));

  // generic-path-composed-with-Cantor agreement: project(R + T2) equals the
  // translation applied to project(R)
  int checked = 0;
  while (checked < 25) {
    MumfordPoint R = random_generic(C, rng);
    MumfordPoint RT = cantor_add(C, R, T2);
    if (RT.tag != MumfordPoint::kGeneric) continue;
    ++checked;
    auto lhs = fk_project(p, nullptr, RT);
    auto rhs = translate_by_lambda(p, nullptr, fk_project(p, nullptr, R));
    REQUIRE(proportional(F, lhs.v, rhs.v));
  }

  // the special-point path itself, cross-checked through doubling
  int specials = 0;
  for (fe r = 0; r < F.q() && specials < 10; ++r) {
    fe fr = g2poly::eval(F, g2poly::Poly(C.f.begin(), C.f.end()), r);
    auto y = F.sqrt(nullptr, fr);
    if (!y || *y == 0) continue;
    ++specials;
    MumfordPoint S = MumfordPoint::special(F, r, *y);
    FastKummerPoint xS = fk_project(p, nullptr, S);
    REQUIRE(fast_kummer_residual(p, xS) == 0);
    MumfordPoint S2 = cantor_add(C, S, S);
    if (S2.tag == MumfordPoint::kGeneric)
      REQUIRE(proportional(F, fk_xdbl(p, nullptr, xS).v,
                           fk_project(p, nullptr, S2).v));
  }
  REQUIRE(specials == 10);

  // off-curve special input
  MumfordPoint bad = MumfordPoint::special(F, p.lam, 1);
  REQUIRE_THROWS_AS(fk_project(p, nullptr, bad), FastKummerError);
}

TEST_CASE("xDBL: counter, oracle lift, rescaling invariance") {
  Field F(1009);
  std::mt19937_64 rng(17);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);
  const Genus2Curve& C = p.curve;

  for (int t = 0; t < 50; ++t) {
    MumfordPoint P = random_generic(C, rng);
    MumfordPoint P2 = cantor_add(C, P, P);
    FastKummerPoint xP = fk_project(p, nullptr, P);
    CountCtx c;
    FastKummerPoint d = fk_xdbl(p, &c, xP);
    REQUIRE(c.ops == make_count(0, 8, 6, 16, 0));
    REQUIRE(fast_kummer_residual(p, d) == 0);
    REQUIRE(proportional(F, d.v, fk_project(p, nullptr, P2).v));
    // projective well-definedness
    FastKummerPoint d2 = fk_xdbl(p, nullptr, rescaled(F, xP, rng));
    REQUIRE(proportional(F, d.v, d2.v));
  }
}

TEST_CASE("xADD: fixed and generic difference counters, oracle lift") {
  Field F(1009);
  std::mt19937_64 rng(19);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);
  const Genus2Curve& C = p.curve;

  int done = 0;
  while (done < 50) {
    PairFixture fx = pair_fixture(C, rng);
    FastKummerPoint xP, xQ, xD;
    try {
      xP = fk_project(p, nullptr, fx.P);
      xQ = fk_project(p, nullptr, fx.Q);
      xD = fk_project(p, nullptr, fx.QmP);
    } catch (const std::runtime_error&) {
      continue;  // excluded degenerate configuration
    }
    if (has_zero(xD)) continue;  // not usable as a cached difference
    ++done;

    CountCtx cg;
    FastKummerPoint s1 = fk_xadd(p, &cg, xQ, xP, xD);
    REQUIRE(cg.ops == make_count(14, 4, 3, 24, 0));
    REQUIRE(fast_kummer_residual(p, s1) == 0);
    REQUIRE(proportional(F, s1.v, fk_project(p, nullptr, fx.QP).v));

    CountCtx cf;
    FastKummerPoint s2 = fk_xadd_fixed(p, &cf, xQ, xP, diff_ratios(p, xD));
    REQUIRE(cf.ops == make_count(7, 4, 3, 24, 0));
    REQUIRE(proportional(F, s1.v, s2.v));
  }
}

TEST_CASE("xDBLADD: counter and agreement with its two halves") {
  Field F(1009);
  std::mt19937_64 rng(23);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);
  const Genus2Curve& C = p.curve;

  int done = 0;
  while (done < 50) {
    PairFixture fx = pair_fixture(C, rng);
    FastKummerPoint xP, xQ, xD;
    try {
      xP = fk_project(p, nullptr, fx.P);
      xQ = fk_project(p, nullptr, fx.Q);
      xD = fk_project(p, nullptr, fx.QmP);
    } catch (const std::runtime_error&) {
      continue;  // excluded degenerate configuration
    }
    if (has_zero(xD)) continue;  // not usable as a cached difference
    ++done;
    auto dr = diff_ratios(p, xD);

    CountCtx c;
    auto [dbl, sum] = fk_xdbladd(p, &c, xQ, xP, dr);
    REQUIRE(c.ops == make_count(10, 9, 6, 32, 0));
    REQUIRE(proportional(F, dbl.v, fk_xdbl(p, nullptr, xQ).v));
    REQUIRE(proportional(F, sum.v, fk_xadd_fixed(p, nullptr, xQ, xP, dr).v));
    REQUIRE(fast_kummer_residual(p, dbl) == 0);
    REQUIRE(fast_kummer_residual(p, sum) == 0);

    // scaling invariance in both arguments
    auto [dbl2, sum2] =
        fk_xdbladd(p, nullptr, rescaled(F, xQ, rng), rescaled(F, xP, rng), dr);
    REQUIRE(proportional(F, dbl.v, dbl2.v));
    REQUIRE(proportional(F, sum.v, sum2.v));
  }
}

TEST_CASE("tau: round trip, cross-Project consistency, counters") {
  Field F(1009);
  std::mt19937_64 rng(29);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);
  const Genus2Curve& C = p.curve;

  for (int t = 0; t < 100; ++t) {
    MumfordPoint P = random_generic(C, rng);
    GeneralKummerPoint xi = jac_project(C, nullptr, P);
    CountCtx cf;
    FastKummerPoint x = tau(p, &cf, xi);
    REQUIRE(cf.ops == make_count(15, 0, 0, 12, 0));
    REQUIRE(proportional(F, x.v, fk_project(p, nullptr, P).v));

    CountCtx cb;
    GeneralKummerPoint back = tau_inverse(p, &cb, x, true);
    REQUIRE(cb.ops == make_count(15, 0, 0, 12, 0));
    REQUIRE(proportional(F, back.xi, xi.xi));

    CountCtx ct;
    GeneralKummerPoint trunc = tau_inverse(p, &ct, x, false);
    REQUIRE(ct.ops == make_count(11, 0, 0, 9, 0));
    for (int i = 0; i < 3; ++i) REQUIRE(trunc.xi[i] == back.xi[i]);
  }
}

TEST_CASE("Recover: counter row and round trips") {
  Field F(1009);
  std::mt19937_64 rng(31);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);
  const Genus2Curve& C = p.curve;

  // recover(P, x(P), x(2P)) -> P
  for (int t = 0; t < 10; ++t) {
    MumfordPoint P = random_generic(C, rng);
    FastKummerPoint xP = fk_project(p, nullptr, P);
    MumfordPoint P2 = cantor_add(C, P, P);
    if (P2.tag != MumfordPoint::kGeneric) continue;
    FastKummerPoint x2P = fk_project(p, nullptr, P2);
    REQUIRE(fk_recover(p, nullptr, P, xP, x2P) == P);
  }

  int done = 0;
  while (done < 50) {
    PairFixture fx = pair_fixture(C, rng);
    FastKummerPoint xQ = rescaled(F, fk_project(p, nullptr, fx.Q), rng);
    FastKummerPoint xQP = rescaled(F, fk_project(p, nullptr, fx.QP), rng);
    CountCtx c;
    MumfordPoint got;
    try {
      got = fk_recover(p, &c, fx.P, xQ, xQP);
    } catch (const FastKummerError&) {
      continue;  // excluded degenerate configuration
    } catch (const Genus2Error&) {
      continue;
    }
    ++done;
    REQUIRE(got == fx.Q);
    REQUIRE(c.ops == make_count(133, 12, 7, 97, 1));
  }
}

TEST_CASE("Theorem 5 totals and ladder correctness on a toy curve") {
  Field F(65521);
  std::mt19937_64 rng(3);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);
  const Genus2Curve& C = p.curve;
  FastKummerBackend bk(p);

  std::mt19937_64 r2(42);
  for (int beta : {64, 128, 252}) {
    bigint m = 0, n = 0;
    for (int i = 0; i < beta; ++i) {
      if (r2() & 1) bit_set(m, i);
      if (r2() & 1) bit_set(n, i);
    }
    bit_set(m, beta - 1);
    bit_set(n, beta - 1);
    MumfordPoint P = random_generic(C, r2);
    MumfordPoint Q = random_generic(C, r2);

    CountCtx c1;
    MumfordPoint R1 = ladder_mul(bk, &c1, P, ScalarBits::from_bigint(m, beta));
    REQUIRE(R1 == naive_mul(C, P, m));
    REQUIRE(c1.ops == make_count(10 * beta + 134, 9 * beta + 12, 6 * beta + 10,
                                 32 * beta + 93, 2));

    CountCtx c2;
    MumfordPoint R2 = two_dim_mul(bk, &c2, P, Q, ScalarBits::from_bigint(m, beta),
                                  ScalarBits::from_bigint(n, beta));
    REQUIRE(R2 == cantor_add(C, naive_mul(C, P, m), naive_mul(C, Q, n)));
    REQUIRE(c2.ops == make_count(17 * beta + 194, 13 * beta + 17,
                                 9 * beta + 16, 56 * beta + 160, 2));
  }
}

TEST_CASE("general-Kummer backend matches the oracle") {
  Field F(65521);
  std::mt19937_64 rng(3);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);
  const Genus2Curve& C = p.curve;
  GeneralKummerBackend bk(p);

  std::mt19937_64 r2(5);
  MumfordPoint P = random_generic(C, r2);
  MumfordPoint Q = random_generic(C, r2);
  for (int t = 0; t < 10; ++t) {
    bigint m = (bigint(r2()) << 64) | r2();
    bigint n = (bigint(r2()) << 64) | r2();
    bit_set(m, 127);
    bit_set(n, 127);
    REQUIRE(ladder_mul(bk, nullptr, P, ScalarBits::from_bigint(m, 128)) ==
            naive_mul(C, P, m));
    REQUIRE(two_dim_mul(bk, nullptr, P, Q, ScalarBits::from_bigint(m, 128),
                        ScalarBits::from_bigint(n, 128)) ==
            cantor_add(C, naive_mul(C, P, m), naive_mul(C, Q, n)));
  }
}

TEST_CASE("Gaudry-Schost parameters: alpha root and group order") {
  Field F = Field::mersenne127();
  FastKummerParams p = gaudry_schost_params(F);
  REQUIRE(Field::sign_bit(p.alpha) == 0);
  REQUIRE(F.mul_raw(F.from_u64(363), F.sqr(nullptr, p.alpha)) ==
          F.neg(nullptr, F.from_u64(833)));

  bigint N = (bigint(1) << 250) -
             bigint("0x334D69820C75294D2C27FC9F9A154FF47730B4B840C05BD");
  std::mt19937_64 rng(1);
  for (int t = 0; t < 3; ++t) {
    MumfordPoint P = oracle::g2_random_point(p.curve, rng);
    REQUIRE(naive_mul(p.curve, P, 16 * N).tag == MumfordPoint::kIdentity);
  }

  // full ladder round trip with 252-bit scalars
  FastKummerBackend bk(p);
  std::mt19937_64 r2(2);
  for (int t = 0; t < 5; ++t) {
    MumfordPoint P = random_generic(p.curve, r2);
    bigint m = 0;
    for (int i = 0; i < 252; ++i)
      if (r2() & 1) bit_set(m, i);
    bit_set(m, 251);
    REQUIRE(ladder_mul(bk, nullptr, P, ScalarBits::from_bigint(m, 252)) ==
            naive_mul(p.curve, P, m));
  }
}
