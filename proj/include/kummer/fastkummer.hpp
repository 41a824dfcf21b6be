// Fast Kummer surfaces: parameter construction from theta constants, Project
// with its special-point translation, the Hadamard-transform pseudo-arithmetic
// (xDBL, xADD, xDBLADD), the linear change of model to the general Kummer, and
// Recover through the general-Kummer evaluation. The chain backend at the
// bottom drives the uniform multiplication templates; a correctness-only
// general-Kummer backend is obtained by conjugating it through the model map.
//
// Every costed routine here is an exact straight-line program whose tally
// matches the published row; the fixed-difference caches and the base-point
// re-projection inside Recover are the only untallied computations, per the
// accounting conventions shared with the other backends.

#pragma once

#include <array>
#include <stdexcept>

#include "kummer/field.hpp"
#include "kummer/genus2.hpp"

namespace kummer {

struct FastKummerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (X : Y : Z : T) on the quartic surface
struct FastKummerPoint {
  std::array<fe, 4> v{};
};

struct FastKummerParams {
  const Field* F;
  fe a, b, c, d, e, f;
  fe A, B, C, D;
  fe alpha;
  fe lam, mu, nu;
  fe surf_E, surf_F, surf_G, surf_H;

  // projective scaling vectors: the identity image (a:b:c:d), the inner
  // Hadamard scale (1:A/B:A/C:A/D) and the outer doubling scale (1:a/b:a/c:a/d)
  std::array<fe, 4> id_image;
  std::array<fe, 4> dual_scale;   // (1, A/B, A/C, A/D)
  std::array<fe, 4> theta_scale;  // (1, a/b, a/c, a/d)

  // Project caches: products and sums of the Rosenhain roots, and the output
  // ratios (b/a, c/a, d/a) that normalize X = 1
  fe nu_lam, mu_lam;
  fe lam_p_nu, one_p_mu, lam_p_mu, one_p_nu;
  fe ba, ca, da;

  // model-change matrices, each scaled so the pivot entry of row 0 is 1
  std::array<std::array<fe, 4>, 4> to_fast, to_general;
  int to_fast_pivot, to_general_pivot;

  // translation by <x - lambda, 0> acts on the dual coordinates as the swap
  // (0 2)(1 3) followed by these scalings; the map squares to B*D times the
  // identity, so it is an involution on the surface
  std::array<fe, 4> sigma_scale;

  Genus2Curve curve;

  const Field& field() const { return *F; }
};

namespace fkdetail {

inline fe ratio(const Field& F, fe num, fe den) {
  return F.mul_raw(num, F.inv(nullptr, den));
}

// scale a matrix so the first nonzero entry of row 0 becomes 1; returns its column
inline int normalize_matrix(const Field& F, std::array<std::array<fe, 4>, 4>& m) {
  int pivot = -1;
  for (int j = 0; j < 4 && pivot < 0; ++j)
    if (m[0][j] != 0) pivot = j;
  if (pivot < 0) throw FastKummerError("model-change matrix has a zero row");
  fe s = F.inv(nullptr, m[0][pivot]);
  for (auto& row : m)
    for (auto& x : row) x = F.mul_raw(x, s);
  return pivot;
}

// 4x4 inverse by Gauss-Jordan elimination, oracle-grade
inline std::array<std::array<fe, 4>, 4> invert_matrix(
    const Field& F, std::array<std::array<fe, 4>, 4> m) {
  std::array<std::array<fe, 4>, 4> inv{};
  for (int i = 0; i < 4; ++i) inv[i][i] = 1;
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4 && piv < 0; ++r)
      if (m[r][col] != 0) piv = r;
    if (piv < 0) throw FastKummerError("model-change matrix is singular");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    fe s = F.inv(nullptr, m[col][col]);
    for (int j = 0; j < 4; ++j) {
      m[col][j] = F.mul_raw(m[col][j], s);
      inv[col][j] = F.mul_raw(inv[col][j], s);
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col || m[r][col] == 0) continue;
      fe t = m[r][col];
      for (int j = 0; j < 4; ++j) {
        m[r][j] = F.sub(nullptr, m[r][j], F.mul_raw(t, m[col][j]));
        inv[r][j] = F.sub(nullptr, inv[r][j], F.mul_raw(t, inv[col][j]));
      }
    }
  }
  return inv;
}

// row-by-row application of a cached matrix; the unit pivot entry of row 0 is
// added directly, so nrows = 4 costs 15M + 12a and nrows = 3 costs 11M + 9a
inline std::array<fe, 4> apply_rows(const Field& F, CountCtx* c,
                                    const std::array<std::array<fe, 4>, 4>& m,
                                    int pivot, const std::array<fe, 4>& x,
                                    int nrows) {
  std::array<fe, 4> out{};
  for (int r = 0; r < nrows; ++r) {
    fe acc = 0;
    bool first = true;
    for (int j = 0; j < 4; ++j) {
      fe term = (r == 0 && j == pivot) ? x[j] : F.mul(c, m[r][j], x[j]);
      acc = first ? term : F.add(c, acc, term);
      first = false;
    }
    out[r] = acc;
  }
  return out;
}

}  // namespace fkdetail

// Parameter construction from the six theta-derived constants. Every
// precondition failure names its constraint.
inline FastKummerParams build_params(const Field& F, fe a, fe b, fe c, fe d,
                                     fe e, fe f) {
  auto M = [&](fe x, fe y) { return F.mul_raw(x, y); };
  auto Ad = [&](fe x, fe y) { return F.add(nullptr, x, y); };
  auto Sb = [&](fe x, fe y) { return F.sub(nullptr, x, y); };

  if (a == 0 || b == 0 || c == 0 || d == 0 || e == 0 || f == 0)
    throw FastKummerError("theta constants a..f must be nonzero");
  fe A = Ad(Ad(a, b), Ad(c, d));
  fe B = Sb(Ad(a, b), Ad(c, d));
  fe C = Sb(Ad(a, c), Ad(b, d));
  fe D = Sb(Ad(a, d), Ad(b, c));
  if (A == 0 || B == 0 || C == 0 || D == 0)
    throw FastKummerError("dual constants A..D must be nonzero");
  fe adbc = Sb(M(a, d), M(b, c));
  fe acbd = Sb(M(a, c), M(b, d));
  fe abcd = Sb(M(a, b), M(c, d));
  if (adbc == 0 || acbd == 0 || abcd == 0)
    throw FastKummerError("(ad-bc)(ac-bd)(ab-cd) must be nonzero");
  if (Ad(e, f) == 0) throw FastKummerError("e + f must be nonzero");
  // e/f = (1+alpha)/(1-alpha) forces alpha = (e-f)/(e+f)
  fe alpha = fkdetail::ratio(F, Sb(e, f), Ad(e, f));
  if (M(F.sqr(nullptr, alpha), M(A, B)) != M(C, D))
    throw FastKummerError("e/f must satisfy alpha^2 = CD/(AB)");

  fe lam = fkdetail::ratio(F, M(a, c), M(b, d));
  fe mu = fkdetail::ratio(F, M(c, e), M(d, f));
  fe nu = fkdetail::ratio(F, M(a, e), M(b, f));
  std::array<fe, 5> roots{0, 1, lam, mu, nu};
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (roots[i] == roots[j])
        throw FastKummerError("Rosenhain roots 0,1,lambda,mu,nu must be distinct");

  g2poly::Poly fp{1};
  for (fe r : roots) fp = g2poly::mul(F, fp, g2poly::Poly{F.neg(nullptr, r), 1});
  std::array<fe, 7> coeffs{};
  for (std::size_t k = 0; k < fp.size(); ++k) coeffs[k] = fp[k];

  FastKummerParams p{.F = &F,
                     .a = a, .b = b, .c = c, .d = d, .e = e, .f = f,
                     .A = A, .B = B, .C = C, .D = D,
                     .alpha = alpha,
                     .lam = lam, .mu = mu, .nu = nu,
                     .surf_E = 0, .surf_F = 0, .surf_G = 0, .surf_H = 0,
                     .id_image = {a, b, c, d},
                     .dual_scale = {},
                     .theta_scale = {},
                     .nu_lam = M(nu, lam), .mu_lam = M(mu, lam),
                     .lam_p_nu = Ad(lam, nu), .one_p_mu = Ad(1, mu),
                     .lam_p_mu = Ad(lam, mu), .one_p_nu = Ad(1, nu),
                     .ba = fkdetail::ratio(F, b, a),
                     .ca = fkdetail::ratio(F, c, a),
                     .da = fkdetail::ratio(F, d, a),
                     .to_fast = {}, .to_general = {},
                     .to_fast_pivot = 0, .to_general_pivot = 0,
                     .sigma_scale = {},
                     .curve = Genus2Curve(F, coeffs)};

  p.dual_scale = {1, fkdetail::ratio(F, A, B), fkdetail::ratio(F, A, C),
                  fkdetail::ratio(F, A, D)};
  p.theta_scale = {1, fkdetail::ratio(F, a, b), fkdetail::ratio(F, a, c),
                   fkdetail::ratio(F, a, d)};

  fe sq = [&] {
    fe r = fkdetail::ratio(F, M(M(A, B), M(C, D)), M(adbc, M(acbd, abcd)));
    return F.sqr(nullptr, r);
  }();
  p.surf_E = M(M(F.from_u64(4), M(M(a, b), M(c, d))), sq);
  fe sa = F.sqr(nullptr, a), sb2 = F.sqr(nullptr, b);
  fe sc = F.sqr(nullptr, c), sd = F.sqr(nullptr, d);
  p.surf_F = fkdetail::ratio(F, Sb(Ad(sa, sd), Ad(sb2, sc)), adbc);
  p.surf_G = fkdetail::ratio(F, Sb(Ad(sa, sc), Ad(sb2, sd)), acbd);
  p.surf_H = fkdetail::ratio(F, Sb(Ad(sa, sb2), Ad(sc, sd)), abcd);

  // model change to the fast surface: coordinate j of the image is the theta
  // constant theta_j times a fixed Rosenhain combination of xi1..xi4, chosen
  // so the identity (0:0:0:1) lands on (a:b:c:d) and both Project paths agree
  auto tau_row = [&](fe th, fe quad, fe lin, fe aff) {
    return std::array<fe, 4>{M(th, quad), F.neg(nullptr, M(th, lin)),
                             M(th, aff), F.neg(nullptr, th)};
  };
  std::array<std::array<fe, 4>, 4> m{{
      tau_row(a, M(mu, p.lam_p_nu), mu, p.one_p_mu),
      tau_row(b, M(p.nu_lam, p.one_p_mu), p.nu_lam, p.lam_p_nu),
      tau_row(c, M(nu, p.lam_p_mu), nu, p.one_p_nu),
      tau_row(d, M(p.mu_lam, p.one_p_nu), p.mu_lam, p.lam_p_mu),
  }};
  p.to_fast = m;
  p.to_general = fkdetail::invert_matrix(F, m);
  p.to_fast_pivot = fkdetail::normalize_matrix(F, p.to_fast);
  p.to_general_pivot = fkdetail::normalize_matrix(F, p.to_general);

  // sigma_scale = (AD, -alpha AB, CD, -alpha AD); the Hadamard inverse scale
  // 1/4 is absorbed projectively
  fe nalpha = F.neg(nullptr, alpha);
  p.sigma_scale = {M(A, D), M(nalpha, M(A, B)), M(C, D), M(nalpha, M(A, D))};
  return p;
}

// surface-equation residual; zero iff the point lies on the fast Kummer
inline fe fast_kummer_residual(const FastKummerParams& p, const FastKummerPoint& P) {
  const Field& F = p.field();
  auto M = [&](fe x, fe y) { return F.mul_raw(x, y); };
  fe X = P.v[0], Y = P.v[1], Z = P.v[2], T = P.v[3];
  fe s = F.add(nullptr, F.add(nullptr, F.sqr(nullptr, X), F.sqr(nullptr, Y)),
               F.add(nullptr, F.sqr(nullptr, Z), F.sqr(nullptr, T)));
  s = F.sub(nullptr, s, M(p.surf_F, F.add(nullptr, M(X, T), M(Y, Z))));
  s = F.sub(nullptr, s, M(p.surf_G, F.add(nullptr, M(X, Z), M(Y, T))));
  s = F.sub(nullptr, s, M(p.surf_H, F.add(nullptr, M(X, Y), M(Z, T))));
  fe rhs = M(p.surf_E, M(M(X, Y), M(Z, T)));
  return F.sub(nullptr, F.sqr(nullptr, s), rhs);
}

// τ and its inverse: the linear change of model between the general and fast
// Kummers of the same curve. Full evaluation costs 15M + 12a thanks to the
// unit pivot; omitting the fourth output coordinate costs 11M + 9a.
inline FastKummerPoint tau(const FastKummerParams& p, CountCtx* c,
                           const GeneralKummerPoint& x) {
  auto out = fkdetail::apply_rows(p.field(), c, p.to_fast, p.to_fast_pivot,
                                  x.xi, 4);
  return {out};
}

inline GeneralKummerPoint tau_inverse(const FastKummerParams& p, CountCtx* c,
                                      const FastKummerPoint& x, bool full) {
  auto out = fkdetail::apply_rows(p.field(), c, p.to_general,
                                  p.to_general_pivot, x.v, full ? 4 : 3);
  return {out};
}

namespace fkdetail {

// numerators of the Project image before normalization: a..d times these give
// (X:Y:Z:T); 8M + 1S + 12a
inline std::array<fe, 4> project_numerators(const FastKummerParams& p,
                                            CountCtx* c, const MumfordPoint& P) {
  const Field& F = p.field();
  fe sb0 = F.sqr(c, P.b0);
  std::array<fe, 4> t{F.sub(c, p.mu, P.a0), F.sub(c, p.nu_lam, P.a0),
                      F.sub(c, p.nu, P.a0), F.sub(c, p.mu_lam, P.a0)};
  std::array<fe, 4> u{F.add(c, P.a1, p.lam_p_nu), F.add(c, P.a1, p.one_p_mu),
                      F.add(c, P.a1, p.lam_p_mu), F.add(c, P.a1, p.one_p_nu)};
  std::array<fe, 4> n;
  for (int i = 0; i < 4; ++i) {
    fe w = F.mul(c, P.a0, t[i]);
    n[i] = F.sub(c, F.mul(c, w, u[i]), sb0);
  }
  return n;
}

// finish normalizing with a precomputed inverse of the X numerator: 3M + 3mc
inline FastKummerPoint project_finish(const FastKummerParams& p, CountCtx* c,
                                      const std::array<fe, 4>& n, fe inv_n0) {
  const Field& F = p.field();
  FastKummerPoint out;
  out.v[0] = 1;
  out.v[1] = F.mul_const(c, F.mul(c, n[1], inv_n0), p.ba, kMcCurve);
  out.v[2] = F.mul_const(c, F.mul(c, n[2], inv_n0), p.ca, kMcCurve);
  out.v[3] = F.mul_const(c, F.mul(c, n[3], inv_n0), p.da, kMcCurve);
  return out;
}

inline std::array<fe, 4> hadamard(const Field& F, CountCtx* c,
                                  const std::array<fe, 4>& x) {
  fe u1 = F.add(c, x[0], x[1]);
  fe u2 = F.add(c, x[2], x[3]);
  fe u3 = F.sub(c, x[0], x[1]);
  fe u4 = F.sub(c, x[2], x[3]);
  return {F.add(c, u1, u2), F.sub(c, u1, u2), F.add(c, u3, u4), F.sub(c, u3, u4)};
}

// shared first stage of xADD: scaled products of the two Hadamard images,
// 4M + 3mc + 16a
inline std::array<fe, 4> xadd_inner(const FastKummerParams& p, CountCtx* c,
                                    const FastKummerPoint& xP,
                                    const FastKummerPoint& xQ) {
  const Field& F = p.field();
  auto hp = hadamard(F, c, xP.v);
  auto hq = hadamard(F, c, xQ.v);
  std::array<fe, 4> e;
  e[0] = F.mul(c, hp[0], hq[0]);
  for (int i = 1; i < 4; ++i)
    e[i] = F.mul_const(c, F.mul(c, hp[i], hq[i]), p.dual_scale[i], kMcCurve);
  return e;
}

inline bool proportional(const Field& F, const std::array<fe, 4>& x,
                         const std::array<fe, 4>& y) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (F.mul_raw(x[i], y[j]) != F.mul_raw(x[j], y[i])) return false;
  return true;
}

}  // namespace fkdetail

// translation by the two-torsion point <x - lambda, 0>: a permutation with
// scalings of the dual coordinates, conjugated back by the Hadamard transform
// (established against the Cantor oracle; revalidated on every parameter set)
inline FastKummerPoint translate_by_lambda(const FastKummerParams& p,
                                           CountCtx* c,
                                           const FastKummerPoint& x) {
  const Field& F = p.field();
  auto h = fkdetail::hadamard(F, c, x.v);
  std::array<fe, 4> s{F.mul_const(c, h[2], p.sigma_scale[0], kMcCurve),
                      F.mul_const(c, h[3], p.sigma_scale[1], kMcCurve),
                      F.mul_const(c, h[0], p.sigma_scale[2], kMcCurve),
                      F.mul_const(c, h[1], p.sigma_scale[3], kMcCurve)};
  return {fkdetail::hadamard(F, c, s)};
}

// Project for generic points, normalized X = 1: 11M + 1S + 3mc + 12a + 1I
inline FastKummerPoint fk_project_generic(const FastKummerParams& p, CountCtx* c,
                                          const MumfordPoint& P) {
  if (P.tag != MumfordPoint::kGeneric)
    throw FastKummerError("generic Project requires a generic point");
  const Field& F = p.field();
  auto n = fkdetail::project_numerators(p, c, P);
  if (n[0] == 0) throw FastKummerError("Project hit a vanishing X coordinate");
  return fkdetail::project_finish(p, c, n, F.inv(c, n[0]));
}

// Full Project: generic points use the formulas above; the identity maps to
// (a:b:c:d); special points are translated by <x - lambda, 0>, projected, and
// the translation undone by its dual-coordinate action.
inline FastKummerPoint fk_project(const FastKummerParams& p, CountCtx* c,
                                  const MumfordPoint& P) {
  const Field& F = p.field();
  switch (P.tag) {
    case MumfordPoint::kGeneric:
      return fk_project_generic(p, c, P);
    case MumfordPoint::kIdentity:
      return {p.id_image};
    default: {
      fe al = P.alpha(F);
      FastKummerPoint img;
      if (al == p.lam && P.b0 == 0) {
        img = {p.id_image};  // the point is <x - lambda, 0> itself
      } else {
        if (al == p.lam)
          throw FastKummerError("special point off the curve");
        // <x - al, b0> + <x - lambda, 0>
        //   = <x^2 - (al + lambda)x + al lambda, b0/(al - lambda) (x - lambda)>
        fe s = F.mul(c, P.b0, F.inv(c, F.sub(c, al, p.lam)));
        MumfordPoint T = MumfordPoint::generic(
            F.neg(c, F.add(c, al, p.lam)), F.mul(c, al, p.lam), s,
            F.neg(c, F.mul(c, s, p.lam)));
        img = fk_project_generic(p, c, T);
      }
      return translate_by_lambda(p, c, img);
    }
  }
}

// xADD with a fixed difference whose ratio cache (1, X/Y, X/Z, X/T) is
// precomputed: 7M + 4S + 3mc + 24a
inline FastKummerPoint fk_xadd_fixed(const FastKummerParams& p, CountCtx* c,
                                     const FastKummerPoint& xP,
                                     const FastKummerPoint& xQ,
                                     const std::array<fe, 4>& diff_ratio) {
  const Field& F = p.field();
  auto u = fkdetail::hadamard(F, c, fkdetail::xadd_inner(p, c, xP, xQ));
  FastKummerPoint out;
  out.v[0] = F.sqr(c, u[0]);
  for (int i = 1; i < 4; ++i)
    out.v[i] = F.mul(c, F.sqr(c, u[i]), diff_ratio[i]);
  return out;
}

// xADD against an arbitrary projective difference: 14M + 4S + 3mc + 24a via
// complementary triple products in place of divisions
inline FastKummerPoint fk_xadd(const FastKummerParams& p, CountCtx* c,
                               const FastKummerPoint& xP,
                               const FastKummerPoint& xQ,
                               const FastKummerPoint& diff) {
  const Field& F = p.field();
  auto u = fkdetail::hadamard(F, c, fkdetail::xadd_inner(p, c, xP, xQ));
  fe p01 = F.mul(c, diff.v[0], diff.v[1]);
  fe p23 = F.mul(c, diff.v[2], diff.v[3]);
  std::array<fe, 4> trip{F.mul(c, diff.v[1], p23), F.mul(c, diff.v[0], p23),
                         F.mul(c, diff.v[3], p01), F.mul(c, diff.v[2], p01)};
  FastKummerPoint out;
  for (int i = 0; i < 4; ++i) out.v[i] = F.mul(c, F.sqr(c, u[i]), trip[i]);
  return out;
}

// doubling: two Hadamard-square-scale rounds, 8S + 6mc + 16a
inline FastKummerPoint fk_xdbl(const FastKummerParams& p, CountCtx* c,
                               const FastKummerPoint& xP) {
  const Field& F = p.field();
  auto h = fkdetail::hadamard(F, c, xP.v);
  std::array<fe, 4> e;
  e[0] = F.sqr(c, h[0]);
  for (int i = 1; i < 4; ++i)
    e[i] = F.mul_const(c, F.sqr(c, h[i]), p.dual_scale[i], kMcCurve);
  auto u = fkdetail::hadamard(F, c, e);
  FastKummerPoint out;
  out.v[0] = F.sqr(c, u[0]);
  for (int i = 1; i < 4; ++i)
    out.v[i] = F.mul_const(c, F.sqr(c, u[i]), p.theta_scale[i], kMcCurve);
  return out;
}

// combined doubling and fixed-difference addition, sharing the scaled Hadamard
// image of the doubled operand: 10M + 9S + 6mc + 32a
inline std::pair<FastKummerPoint, FastKummerPoint> fk_xdbladd(
    const FastKummerParams& p, CountCtx* c, const FastKummerPoint& xP,
    const FastKummerPoint& xQ, const std::array<fe, 4>& diff_ratio) {
  const Field& F = p.field();
  auto h2 = fkdetail::hadamard(F, c, xP.v);
  auto h3 = fkdetail::hadamard(F, c, xQ.v);
  std::array<fe, 4> w, e2, e3;
  w[0] = h2[0];
  for (int i = 1; i < 4; ++i)
    w[i] = F.mul_const(c, h2[i], p.dual_scale[i], kMcCurve);
  e2[0] = F.sqr(c, h2[0]);
  e3[0] = F.mul(c, w[0], h3[0]);
  for (int i = 1; i < 4; ++i) {
    e2[i] = F.mul(c, w[i], h2[i]);
    e3[i] = F.mul(c, w[i], h3[i]);
  }
  auto u2 = fkdetail::hadamard(F, c, e2);
  auto u3 = fkdetail::hadamard(F, c, e3);
  FastKummerPoint dbl, add;
  dbl.v[0] = F.sqr(c, u2[0]);
  add.v[0] = F.sqr(c, u3[0]);
  for (int i = 1; i < 4; ++i) {
    dbl.v[i] = F.mul_const(c, F.sqr(c, u2[i]), p.theta_scale[i], kMcCurve);
    add.v[i] = F.mul(c, F.sqr(c, u3[i]), diff_ratio[i]);
  }
  return {dbl, add};
}

// Recover: (P, x(Q), x(Q+P)) -> Q. One xADD recomputes x(Q-P), the model map
// carries all four points to the general Kummer (in full only for x(Q)), and
// the general-Kummer evaluation produces the Mumford coordinates:
// 133M + 12S + 7mc + 97a + 1I in total. x(P) itself is recomputed without
// tallying, since its value is already in hand from the Project call.
inline MumfordPoint fk_recover(const FastKummerParams& p, CountCtx* c,
                               const MumfordPoint& P, const FastKummerPoint& xQ,
                               const FastKummerPoint& xQP) {
  const Field& F = p.field();
  if (P.tag != MumfordPoint::kGeneric)
    throw FastKummerError("Recover requires a generic base point");
  FastKummerPoint xP = fk_project_generic(p, nullptr, P);

  // Q = +-P makes x(Q-P) or x(Q+P) the identity image, outside the generic
  // evaluation's domain; resolve the sign from x(Q+P) and exit early
  if (fkdetail::proportional(F, xQ.v, xP.v)) {
    if (fkdetail::proportional(F, xQP.v, fk_xdbl(p, nullptr, xP).v)) return P;
    if (fkdetail::proportional(F, xQP.v, p.id_image)) return jac_neg(F, P);
    throw FastKummerError("recover inputs are inconsistent");
  }

  FastKummerPoint xQmP = fk_xadd(p, c, xQ, xP, xQP);
  GeneralKummerPoint gQ = tau_inverse(p, c, xQ, true);
  GeneralKummerPoint gP = tau_inverse(p, c, xP, false);
  GeneralKummerPoint gQP = tau_inverse(p, c, xQP, false);
  GeneralKummerPoint gQmP = tau_inverse(p, c, xQmP, false);
  if (!fkdetail::proportional(
          F, gP.xi, {1, F.neg(nullptr, P.a1), P.a0, gP.xi[3]}))
    throw FastKummerError("model change disagrees with the base point");
  return jac_recover_general(p.curve, c, P, gQ, gQP, gQmP);
}

// ---------------------------------------------------------------------------
// Chain backend over the fast Kummer. Group elements are Mumford points on
// the Rosenhain curve; pseudo-points are fast Kummer 4-tuples.

class FastKummerBackend {
 public:
  using Group = MumfordPoint;
  using XPoint = FastKummerPoint;
  struct Diff {
    std::array<fe, 4> r;  // (1, X/Y, X/Z, X/T) of the fixed difference
  };

  explicit FastKummerBackend(const FastKummerParams& p) : p_(p), F_(p.field()) {}

  const FastKummerParams& params() const { return p_; }

  XPoint project(CountCtx* c, const Group& P) const {
    return fk_project_generic(p_, c, P);
  }

  // the three Projects of the two-dimensional driver share one inversion:
  // 3I collapses to 6M + 1I
  std::tuple<XPoint, XPoint, XPoint> project3(CountCtx* c, const Group& p,
                                              const Group& q, const Group& s) const {
    std::array<std::array<fe, 4>, 3> n{fkdetail::project_numerators(p_, c, p),
                                       fkdetail::project_numerators(p_, c, q),
                                       fkdetail::project_numerators(p_, c, s)};
    fe xs[3] = {n[0][0], n[1][0], n[2][0]};
    if (xs[0] == 0 || xs[1] == 0 || xs[2] == 0)
      throw FastKummerError("Project hit a vanishing X coordinate");
    simultaneous_inv(F_, c, xs, 3);
    return {fkdetail::project_finish(p_, c, n[0], xs[0]),
            fkdetail::project_finish(p_, c, n[1], xs[1]),
            fkdetail::project_finish(p_, c, n[2], xs[2])};
  }

  Diff make_diff(const XPoint& x) const {
    for (fe v : x.v)
      if (v == 0)
        throw FastKummerError("fixed difference has a vanishing coordinate");
    Diff d;
    d.r[0] = 1;
    for (int i = 1; i < 4; ++i)
      d.r[i] = F_.mul_raw(x.v[0], F_.inv(nullptr, x.v[i]));
    return d;
  }

  Diff dselect(int bit, const Diff& d0, const Diff& d1) const {
    Diff d;
    for (int i = 0; i < 4; ++i) d.r[i] = Field::cselect(bit, d0.r[i], d1.r[i]);
    return d;
  }

  XPoint xdbl(CountCtx* c, const XPoint& x) const { return fk_xdbl(p_, c, x); }
  XPoint xadd(CountCtx* c, const XPoint& x, const XPoint& y,
              const XPoint& diff) const {
    return fk_xadd(p_, c, x, y, diff);
  }
  XPoint xadd_fixed(CountCtx* c, const XPoint& x, const XPoint& y,
                    const Diff& d) const {
    return fk_xadd_fixed(p_, c, x, y, d.r);
  }
  std::pair<XPoint, XPoint> xdbladd(CountCtx* c, const XPoint& x,
                                    const XPoint& y, const Diff& d) const {
    return fk_xdbladd(p_, c, x, y, d.r);
  }

  Group add(CountCtx* c, const Group& P, const Group& Q) const {
    return jac_add_explicit(p_.curve, c, P, Q);
  }
  // the driver's single ADD: its inversion is absorbed into the shared
  // simultaneous inversion of the three Projects, so only 22M+2S+27a tally
  Group add_in_two_dim(CountCtx* c, const Group& P, const Group& Q) const {
    return jac_add_explicit(p_.curve, c, P, Q, false);
  }

  Group recover(CountCtx* c, const Group& base, const XPoint& xQ,
                const XPoint& xQP) const {
    return fk_recover(p_, c, base, xQ, xQP);
  }

  static XPoint xselect(int bit, const XPoint& a, const XPoint& b) {
    XPoint r;
    for (int i = 0; i < 4; ++i) r.v[i] = Field::cselect(bit, a.v[i], b.v[i]);
    return r;
  }
  static void xswap(int bit, XPoint& a, XPoint& b) {
    for (int i = 0; i < 4; ++i) Field::cswap(bit, a.v[i], b.v[i]);
  }

 private:
  const FastKummerParams& p_;
  const Field& F_;
};

// ---------------------------------------------------------------------------
// General-Kummer backend: the fast-Kummer arithmetic conjugated through the
// model change. Correctness-only; no cost rows are pinned for it.

class GeneralKummerBackend {
 public:
  using Group = MumfordPoint;
  using XPoint = GeneralKummerPoint;
  struct Diff {
    FastKummerBackend::Diff fast;  // ratio cache of the fast-side image
  };

  explicit GeneralKummerBackend(const FastKummerParams& p)
      : p_(p), fk_(p), F_(p.field()) {}

  XPoint project(CountCtx* c, const Group& P) const {
    if (P.tag != MumfordPoint::kGeneric)
      throw FastKummerError("Project requires a generic point");
    return jac_project(p_.curve, c, P);
  }
  std::tuple<XPoint, XPoint, XPoint> project3(CountCtx* c, const Group& p,
                                              const Group& q, const Group& s) const {
    return {project(c, p), project(c, q), project(c, s)};
  }

  Diff make_diff(const XPoint& x) const {
    return {fk_.make_diff(tau(p_, nullptr, x))};
  }
  Diff dselect(int bit, const Diff& d0, const Diff& d1) const {
    return {fk_.dselect(bit, d0.fast, d1.fast)};
  }

  XPoint xdbl(CountCtx* c, const XPoint& x) const {
    return tau_inverse(p_, c, fk_xdbl(p_, c, tau(p_, c, x)), true);
  }
  XPoint xadd(CountCtx* c, const XPoint& x, const XPoint& y,
              const XPoint& diff) const {
    return tau_inverse(
        p_, c, fk_xadd(p_, c, tau(p_, c, x), tau(p_, c, y), tau(p_, c, diff)),
        true);
  }
  XPoint xadd_fixed(CountCtx* c, const XPoint& x, const XPoint& y,
                    const Diff& d) const {
    return tau_inverse(
        p_, c, fk_xadd_fixed(p_, c, tau(p_, c, x), tau(p_, c, y), d.fast.r),
        true);
  }
  std::pair<XPoint, XPoint> xdbladd(CountCtx* c, const XPoint& x,
                                    const XPoint& y, const Diff& d) const {
    auto r = fk_xdbladd(p_, c, tau(p_, c, x), tau(p_, c, y), d.fast.r);
    return {tau_inverse(p_, c, r.first, true), tau_inverse(p_, c, r.second, true)};
  }

  Group add(CountCtx* c, const Group& P, const Group& Q) const {
    return jac_add_explicit(p_.curve, c, P, Q);
  }
  Group add_in_two_dim(CountCtx* c, const Group& P, const Group& Q) const {
    return jac_add_explicit(p_.curve, c, P, Q, false);
  }

  Group recover(CountCtx* c, const Group& base, const XPoint& xQ,
                const XPoint& xQP) const {
    return fk_recover(p_, c, base, tau(p_, c, xQ), tau(p_, c, xQP));
  }

  static XPoint xselect(int bit, const XPoint& a, const XPoint& b) {
    XPoint r;
    for (int i = 0; i < 4; ++i) r.xi[i] = Field::cselect(bit, a.xi[i], b.xi[i]);
    return r;
  }
  static void xswap(int bit, XPoint& a, XPoint& b) {
    for (int i = 0; i < 4; ++i) Field::cswap(bit, a.xi[i], b.xi[i]);
  }

 private:
  const FastKummerParams& p_;
  FastKummerBackend fk_;
  const Field& F_;
};

// ---------------------------------------------------------------------------
// The production parameter set over GF(2^127 - 1). The sixth constant of the
// source listing is read as d = -3; the choice is validated by the order
// checks in the test suite ([16N] annihilates the Jacobian). The sign of
// alpha is likewise fixed by that validation.

inline FastKummerParams gaudry_schost_params(const Field& F) {
  fe a833 = F.neg(nullptr, F.from_u64(833));
  fe s = F.mul_raw(a833, F.inv(nullptr, F.from_u64(363)));
  auto root = F.sqrt(nullptr, s);  // alpha^2 = -833/363
  if (!root) throw FastKummerError("alpha is not defined over this field");
  fe alpha = *root;
  if (Field::sign_bit(alpha) != 0) alpha = F.neg(nullptr, alpha);
  fe e = F.add(nullptr, 1, alpha);
  fe f = F.sub(nullptr, 1, alpha);
  return build_params(F, F.from_u64(11), F.neg(nullptr, F.from_u64(22)),
                      F.neg(nullptr, F.from_u64(19)),
                      F.neg(nullptr, F.from_u64(3)), e, f);
}

}  // namespace kummer
