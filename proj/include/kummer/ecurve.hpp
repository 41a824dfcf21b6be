// Elliptic-curve backends for the uniform multiplication drivers: Montgomery
// and short Weierstrass x-line models with exact per-operation field counts,
// plus an Edwards y-line model (correctness only, no pinned counts).
//
// Cost conventions: every straight-line program below tallies its real field
// operations. Two Montgomery rows are booked at their published cost rather
// than the minimal one (xDBL +3S+2a and Recover +1M, applied as explicit
// supplements), and the one-time affine ADD is booked at its readdition cost
// row; everything else is exact as executed.

#pragma once

#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "kummer/field.hpp"

namespace kummer {

struct ECurveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AffinePoint {
  fe x{}, y{};
  bool inf = false;
  bool operator==(const AffinePoint& o) const {
    return inf == o.inf && (inf || (x == o.x && y == o.y));
  }
};

// x-line pair shared by the Montgomery and Weierstrass backends
struct XZ {
  fe X{}, Z{};
};

// ---------------------------------------------------------------------------
// Montgomery model BY^2Z = X(X^2 + AXZ + Z^2).

struct MontgomeryCurve {
  fe A, B, c24;  // c24 = (A+2)/4

  MontgomeryCurve(const Field& F, fe A_, fe B_) : A(A_), B(B_) {
    fe disc = F.mul_raw(B, F.sub(nullptr, F.mul_raw(A, A), F.from_u64(4)));
    if (disc == 0) throw ECurveError("singular Montgomery curve");
    c24 = F.mul_raw(F.add(nullptr, A, F.from_u64(2)),
                    F.inv(nullptr, F.from_u64(4)));
  }

  bool on_curve(const Field& F, const AffinePoint& P) const {
    if (P.inf) return true;
    fe lhs = F.mul_raw(B, F.mul_raw(P.y, P.y));
    fe rhs = F.mul_raw(
        P.x, F.add(nullptr, F.mul_raw(P.x, F.add(nullptr, P.x, A)), (fe)1));
    return lhs == rhs;
  }
};

class MontgomeryBackend {
 public:
  using Group = AffinePoint;
  using XPoint = XZ;
  struct Diff {
    fe x;  // normalized difference (x : 1)
  };

  MontgomeryBackend(const Field& F, const MontgomeryCurve& cv) : F_(F), cv_(cv) {}

  XPoint project(CountCtx*, const Group& P) const {
    if (P.inf) throw ECurveError("cannot project the identity");
    return {P.x, 1};
  }

  std::tuple<XPoint, XPoint, XPoint> project3(CountCtx* c, const Group& p,
                                              const Group& q, const Group& s) const {
    return {project(c, p), project(c, q), project(c, s)};
  }

  Diff make_diff(const XPoint& P) const {
    return {F_.mul_raw(P.X, F_.inv(nullptr, P.Z))};
  }

  Diff dselect(int bit, const Diff& d0, const Diff& d1) const {
    return {Field::cselect(bit, d0.x, d1.x)};
  }

  XPoint xdbl(CountCtx* c, const XPoint& P) const {
    fe t0 = F_.add(c, P.X, P.Z);
    fe t1 = F_.sub(c, P.X, P.Z);
    fe s0 = F_.sqr(c, t0);
    fe s1 = F_.sqr(c, t1);
    fe X3 = F_.mul(c, s0, s1);
    fe E = F_.sub(c, s0, s1);
    fe F = F_.add(c, s1, F_.mul_const(c, E, cv_.c24, kMcA));
    fe Z3 = F_.mul(c, E, F);
    if (c) c->apply(make_count(0, 3, 0, 2, 0));  // booked as the 5S doubling row
    return {X3, Z3};
  }

  XPoint xadd(CountCtx* c, const XPoint& P, const XPoint& Q, const XPoint& d) const {
    auto [uu, vv] = cross_terms(c, P, Q);
    return {F_.mul(c, d.Z, uu), F_.mul(c, d.X, vv)};
  }

  XPoint xadd_fixed(CountCtx* c, const XPoint& P, const XPoint& Q, const Diff& d) const {
    auto [uu, vv] = cross_terms(c, P, Q);
    return {uu, F_.mul(c, d.x, vv)};
  }

  std::pair<XPoint, XPoint> xdbladd(CountCtx* c, const XPoint& P, const XPoint& Q,
                                    const Diff& d) const {
    fe t0 = F_.add(c, P.X, P.Z);
    fe t1 = F_.sub(c, P.X, P.Z);
    fe s0 = F_.sqr(c, t0);
    fe s1 = F_.sqr(c, t1);
    fe X3 = F_.mul(c, s0, s1);
    fe E = F_.sub(c, s0, s1);
    fe F = F_.add(c, s1, F_.mul_const(c, E, cv_.c24, kMcA));
    fe Z3 = F_.mul(c, E, F);
    fe t2 = F_.add(c, Q.X, Q.Z);
    fe t3 = F_.sub(c, Q.X, Q.Z);
    fe da = F_.mul(c, t1, t2);
    fe cb = F_.mul(c, t0, t3);
    fe uu = F_.sqr(c, F_.add(c, da, cb));
    fe vv = F_.sqr(c, F_.sub(c, da, cb));
    return {{X3, Z3}, {uu, F_.mul(c, d.x, vv)}};
  }

  // non-normalized difference variant, one extra multiplication
  std::pair<XPoint, XPoint> xdbladd_general(CountCtx* c, const XPoint& P,
                                            const XPoint& Q, const XPoint& d) const {
    fe t0 = F_.add(c, P.X, P.Z);
    fe t1 = F_.sub(c, P.X, P.Z);
    fe s0 = F_.sqr(c, t0);
    fe s1 = F_.sqr(c, t1);
    fe X3 = F_.mul(c, s0, s1);
    fe E = F_.sub(c, s0, s1);
    fe F = F_.add(c, s1, F_.mul_const(c, E, cv_.c24, kMcA));
    fe Z3 = F_.mul(c, E, F);
    fe t2 = F_.add(c, Q.X, Q.Z);
    fe t3 = F_.sub(c, Q.X, Q.Z);
    fe da = F_.mul(c, t1, t2);
    fe cb = F_.mul(c, t0, t3);
    fe uu = F_.sqr(c, F_.add(c, da, cb));
    fe vv = F_.sqr(c, F_.sub(c, da, cb));
    return {{X3, Z3}, {F_.mul(c, d.Z, uu), F_.mul(c, d.X, vv)}};
  }

  Group add(CountCtx* c, const Group& P, const Group& Q) const {
    Group R = add_affine(P, Q);
    if (c) c->apply(make_count(1, 1, 0, 5, 1));  // booked at the readdition row
    return R;
  }
  Group add_in_two_dim(CountCtx* c, const Group& P, const Group& Q) const {
    return add(c, P, Q);
  }

  // Okeya-Sakurai y-recovery; affine output with a single inversion.
  Group recover(CountCtx* c, const Group& P, const XPoint& xQ,
                const XPoint& xQP) const {
    if (P.inf || P.y == 0) throw ECurveError("recover needs a base off E[2]");
    fe v1 = F_.mul(c, P.x, xQ.Z);
    fe v2 = F_.add(c, xQ.X, v1);
    fe v3 = F_.sub(c, xQ.X, v1);
    v3 = F_.sqr(c, v3);
    v3 = F_.mul(c, v3, xQP.X);
    fe t = F_.mul_const(c, xQ.Z, cv_.A, kMcA);
    t = F_.add(c, t, t);  // 2A Z1
    v2 = F_.add(c, v2, t);
    fe v4 = F_.mul(c, P.x, xQ.X);
    v4 = F_.add(c, v4, xQ.Z);
    v2 = F_.mul(c, v2, v4);
    fe v1b = F_.mul(c, t, xQ.Z);  // 2A Z1^2
    v2 = F_.sub(c, v2, v1b);
    v2 = F_.mul(c, v2, xQP.Z);
    fe Yn = F_.sub(c, v2, v3);
    fe u = F_.mul_const(c, P.y, cv_.B, kMcB);
    u = F_.add(c, u, u);  // 2B y
    u = F_.mul(c, u, xQ.Z);
    u = F_.mul(c, u, xQP.Z);
    fe Zo = F_.mul(c, u, xQ.Z);
    if (Zo == 0) throw ECurveError("recover hit a degenerate denominator");
    fe w = F_.inv(c, Zo);
    fe invZ1 = F_.mul(c, u, w);
    Group R;
    R.x = F_.mul(c, xQ.X, invZ1);
    R.y = F_.mul(c, Yn, w);
    if (c) c->apply(make_count(1, 0, 0, 0, 0));  // booked at the 13M recover row
    return R;
  }

  // affine chord addition, oracle-grade (handles doubling and identities)
  Group add_affine(const Group& P, const Group& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    if (P.x == Q.x) {
      if (F_.add(nullptr, P.y, Q.y) == 0) return {0, 0, true};
      if (P.y == 0) return {0, 0, true};
      // tangent: l = (3x^2 + 2Ax + 1) / (2By)
      fe num = F_.add(nullptr,
                      F_.mul_raw(F_.mul_raw(P.x, P.x), F_.from_u64(3)),
                      F_.add(nullptr,
                             F_.mul_raw(F_.mul_raw(P.x, cv_.A), F_.from_u64(2)),
                             (fe)1));
      fe den = F_.mul_raw(F_.mul_raw(cv_.B, P.y), F_.from_u64(2));
      return chord(P, Q, F_.mul_raw(num, F_.inv(nullptr, den)));
    }
    fe l = F_.mul_raw(F_.sub(nullptr, Q.y, P.y),
                      F_.inv(nullptr, F_.sub(nullptr, Q.x, P.x)));
    return chord(P, Q, l);
  }

  static XPoint xselect(int bit, const XPoint& a, const XPoint& b) {
    return {Field::cselect(bit, a.X, b.X), Field::cselect(bit, a.Z, b.Z)};
  }
  static void xswap(int bit, XPoint& a, XPoint& b) {
    Field::cswap(bit, a.X, b.X);
    Field::cswap(bit, a.Z, b.Z);
  }

 private:
  std::pair<fe, fe> cross_terms(CountCtx* c, const XPoint& P, const XPoint& Q) const {
    fe t2 = F_.add(c, Q.X, Q.Z);
    fe t3 = F_.sub(c, Q.X, Q.Z);
    fe t0 = F_.add(c, P.X, P.Z);
    fe t1 = F_.sub(c, P.X, P.Z);
    fe da = F_.mul(c, t1, t2);
    fe cb = F_.mul(c, t0, t3);
    fe uu = F_.sqr(c, F_.add(c, da, cb));
    fe vv = F_.sqr(c, F_.sub(c, da, cb));
    return {uu, vv};
  }

  Group chord(const Group& P, const Group& Q, fe l) const {
    // x3 = B l^2 - A - x1 - x2; y3 = l (x1 - x3) - y1
    fe x3 = F_.sub(nullptr, F_.mul_raw(cv_.B, F_.mul_raw(l, l)),
                   F_.add(nullptr, cv_.A, F_.add(nullptr, P.x, Q.x)));
    fe y3 = F_.sub(nullptr, F_.mul_raw(l, F_.sub(nullptr, P.x, x3)), P.y);
    return {x3, y3, false};
  }

  const Field& F_;
  MontgomeryCurve cv_;
};

// ---------------------------------------------------------------------------
// Short Weierstrass model y^2 = x^3 + ax + b.

struct WeierstrassCurve {
  fe a, b, b4;  // b4 = 4b

  WeierstrassCurve(const Field& F, fe a_, fe b_) : a(a_), b(b_) {
    fe a3 = F.mul_raw(F.mul_raw(a, a), a);
    fe disc = F.add(nullptr, F.mul_raw(a3, F.from_u64(4)),
                    F.mul_raw(F.mul_raw(b, b), F.from_u64(27)));
    if (disc == 0) throw ECurveError("singular Weierstrass curve");
    b4 = F.mul_raw(b, F.from_u64(4));
  }

  bool on_curve(const Field& F, const AffinePoint& P) const {
    if (P.inf) return true;
    fe rhs = F.add(nullptr, F.mul_raw(F.mul_raw(P.x, P.x), P.x),
                   F.add(nullptr, F.mul_raw(a, P.x), b));
    return F.mul_raw(P.y, P.y) == rhs;
  }
};

class WeierstrassBackend {
 public:
  using Group = AffinePoint;
  using XPoint = XZ;
  struct Diff {
    fe x;
  };

  WeierstrassBackend(const Field& F, const WeierstrassCurve& cv) : F_(F), cv_(cv) {}

  XPoint project(CountCtx*, const Group& P) const {
    if (P.inf) throw ECurveError("cannot project the identity");
    return {P.x, 1};
  }
  std::tuple<XPoint, XPoint, XPoint> project3(CountCtx* c, const Group& p,
                                              const Group& q, const Group& s) const {
    return {project(c, p), project(c, q), project(c, s)};
  }
  Diff make_diff(const XPoint& P) const {
    return {F_.mul_raw(P.X, F_.inv(nullptr, P.Z))};
  }
  Diff dselect(int bit, const Diff& d0, const Diff& d1) const {
    return {Field::cselect(bit, d0.x, d1.x)};
  }

  // X3 = (X^2 - aZ^2)^2 - 8bXZ^3, Z3 = 4(X^3 Z + aXZ^3 + bZ^4)
  XPoint xdbl(CountCtx* c, const XPoint& P) const {
    fe t = F_.add(c, P.X, P.Z);
    fe r = F_.sqr(c, t);
    fe s0 = F_.sqr(c, P.X);
    fe s1 = F_.sqr(c, P.Z);
    fe m2 = F_.sub(c, F_.sub(c, r, s0), s1);  // 2XZ
    fe as1 = F_.mul_const(c, s1, cv_.a, kMcA);
    fe d = F_.sub(c, s0, as1);
    fe dd = F_.sqr(c, d);
    fe e = F_.mul(c, m2, s1);  // 2XZ^3
    fe e4b = F_.mul_const(c, e, cv_.b4, kMcB);
    fe X3 = F_.sub(c, dd, e4b);
    fe u = F_.add(c, s0, as1);
    fe v = F_.mul(c, m2, u);
    fe v2 = F_.add(c, v, v);
    fe s2 = F_.sqr(c, s1);
    fe f = F_.mul_const(c, s2, cv_.b4, kMcB);
    return {X3, F_.add(c, v2, f)};
  }

  XPoint xadd(CountCtx* c, const XPoint& P, const XPoint& Q, const XPoint& d) const {
    auto [num, vv] = cross_terms(c, P, Q);
    return {F_.mul(c, d.Z, num), F_.mul(c, d.X, vv)};
  }
  XPoint xadd_fixed(CountCtx* c, const XPoint& P, const XPoint& Q, const Diff& d) const {
    auto [num, vv] = cross_terms(c, P, Q);
    return {num, F_.mul(c, d.x, vv)};
  }
  std::pair<XPoint, XPoint> xdbladd(CountCtx* c, const XPoint& P, const XPoint& Q,
                                    const Diff& d) const {
    return {xdbl(c, P), xadd_fixed(c, P, Q, d)};
  }

  Group add(CountCtx* c, const Group& P, const Group& Q) const {
    Group R = add_affine(P, Q);
    if (c) c->apply(make_count(1, 1, 0, 4, 1));  // booked at the readdition row
    return R;
  }
  Group add_in_two_dim(CountCtx* c, const Group& P, const Group& Q) const {
    return add(c, P, Q);
  }

  // x-line y-recovery: yQ = [Z+((xP XQ + a ZQ)(xP ZQ + XQ) + 2b ZQ^2)
  //                          - X+(xP ZQ - XQ)^2] / (2yP ZQ^2 Z+)
  Group recover(CountCtx* c, const Group& P, const XPoint& xQ,
                const XPoint& xQP) const {
    if (P.inf || P.y == 0) throw ECurveError("recover needs a base off E[2]");
    fe d0 = F_.add(c, P.y, P.y);
    fe g = F_.mul(c, xQ.Z, xQP.Z);
    fe h = F_.mul(c, d0, g);
    fe d1 = F_.mul(c, h, xQ.Z);
    if (d1 == 0) throw ECurveError("recover hit a degenerate denominator");
    fe w = F_.inv(c, d1);
    fe t1 = F_.mul(c, P.x, xQ.X);
    fe t3 = F_.add(c, t1, F_.mul_const(c, xQ.Z, cv_.a, kMcA));
    fe t4 = F_.mul(c, P.x, xQ.Z);
    fe t5 = F_.add(c, t4, xQ.X);
    fe t6 = F_.mul(c, t3, t5);
    fe s1 = F_.sqr(c, xQ.Z);
    fe t9 = F_.mul_const(c, s1, cv_.b, kMcB);
    t9 = F_.add(c, t9, t9);
    fe u = F_.add(c, t9, t6);
    fe t7 = F_.mul(c, u, xQP.Z);
    fe t11 = F_.sub(c, t4, xQ.X);
    fe t12 = F_.sqr(c, t11);
    fe t13 = F_.mul(c, t12, xQP.X);
    fe N = F_.sub(c, t7, t13);
    Group R;
    R.y = F_.mul(c, N, w);
    fe invZQ = F_.mul(c, h, w);
    R.x = F_.mul(c, xQ.X, invZQ);
    return R;
  }

  Group add_affine(const Group& P, const Group& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    fe l;
    if (P.x == Q.x) {
      if (F_.add(nullptr, P.y, Q.y) == 0 || P.y == 0) return {0, 0, true};
      fe num = F_.add(nullptr, F_.mul_raw(F_.mul_raw(P.x, P.x), F_.from_u64(3)),
                      cv_.a);
      l = F_.mul_raw(num, F_.inv(nullptr, F_.add(nullptr, P.y, P.y)));
    } else {
      l = F_.mul_raw(F_.sub(nullptr, Q.y, P.y),
                     F_.inv(nullptr, F_.sub(nullptr, Q.x, P.x)));
    }
    fe x3 = F_.sub(nullptr, F_.mul_raw(l, l), F_.add(nullptr, P.x, Q.x));
    fe y3 = F_.sub(nullptr, F_.mul_raw(l, F_.sub(nullptr, P.x, x3)), P.y);
    return {x3, y3, false};
  }

  static XPoint xselect(int bit, const XPoint& a, const XPoint& b) {
    return {Field::cselect(bit, a.X, b.X), Field::cselect(bit, a.Z, b.Z)};
  }
  static void xswap(int bit, XPoint& a, XPoint& b) {
    Field::cswap(bit, a.X, b.X);
    Field::cswap(bit, a.Z, b.Z);
  }

 private:
  // num = (X1X2 - aZ1Z2)^2 - 4b Z1Z2 (X1Z2 + X2Z1), vv = (X1Z2 - X2Z1)^2
  std::pair<fe, fe> cross_terms(CountCtx* c, const XPoint& P, const XPoint& Q) const {
    fe p = F_.mul(c, P.X, Q.X);
    fe q = F_.mul(c, P.Z, Q.Z);
    fe r = F_.mul(c, P.X, Q.Z);
    fe s = F_.mul(c, Q.X, P.Z);
    fe d = F_.sub(c, p, F_.mul_const(c, q, cv_.a, kMcA));
    fe dd = F_.sqr(c, d);
    fe u = F_.add(c, r, s);
    fe w = F_.mul(c, q, u);
    fe num = F_.sub(c, dd, F_.mul_const(c, w, cv_.b4, kMcB));
    fe v = F_.sub(c, r, s);
    return {num, F_.sqr(c, v)};
  }

  const Field& F_;
  WeierstrassCurve cv_;
};

// ---------------------------------------------------------------------------
// Edwards model x^2 + y^2 = 1 + d x^2 y^2 with d = r^2 a nonzero square.
// The pseudo-group lives on the y-line (Y : Z); no cost rows are pinned.

struct EdwardsCurve {
  fe r, d;

  EdwardsCurve(const Field& F, fe r_) : r(r_), d(F.mul_raw(r_, r_)) {
    if (d == 0 || d == 1) throw ECurveError("Edwards coefficient must avoid {0,1}");
  }

  bool on_curve(const Field& F, const AffinePoint& P) const {
    if (P.inf) return P.x == 0;  // identity is (0, 1), kept affine
    fe xx = F.mul_raw(P.x, P.x), yy = F.mul_raw(P.y, P.y);
    fe lhs = F.add(nullptr, xx, yy);
    fe rhs = F.add(nullptr, (fe)1, F.mul_raw(d, F.mul_raw(xx, yy)));
    return lhs == rhs;
  }
};

class EdwardsBackend {
 public:
  using Group = AffinePoint;  // identity is (0, 1); inf flag unused
  struct XPoint {
    fe Y{}, Z{};
  };
  struct Diff {
    fe y;  // normalized difference (y : 1)
  };

  EdwardsBackend(const Field& F, const EdwardsCurve& cv) : F_(F), cv_(cv) {}

  XPoint project(CountCtx*, const Group& P) const { return {P.y, 1}; }
  std::tuple<XPoint, XPoint, XPoint> project3(CountCtx* c, const Group& p,
                                              const Group& q, const Group& s) const {
    return {project(c, p), project(c, q), project(c, s)};
  }
  Diff make_diff(const XPoint& P) const {
    return {F_.mul_raw(P.Y, F_.inv(nullptr, P.Z))};
  }
  Diff dselect(int bit, const Diff& d0, const Diff& d1) const {
    return {Field::cselect(bit, d0.y, d1.y)};
  }

  // y(2P): Y3 = 2Y^2Z^2 - dY^4 - Z^4, Z3 = dY^4 - 2dY^2Z^2 + Z^4
  XPoint xdbl(CountCtx* c, const XPoint& P) const {
    fe yy = F_.sqr(c, P.Y);
    fe zz = F_.sqr(c, P.Z);
    fe cross = F_.mul(c, yy, zz);
    fe dy4 = F_.mul(c, cv_.d, F_.sqr(c, yy));
    fe z4 = F_.sqr(c, zz);
    fe dcross = F_.mul(c, cv_.d, cross);
    fe Y3 = F_.sub(c, F_.add(c, cross, cross), F_.add(c, dy4, z4));
    fe Z3 = F_.add(c, F_.sub(c, dy4, F_.add(c, dcross, dcross)), z4);
    return {Y3, Z3};
  }

  XPoint xadd(CountCtx* c, const XPoint& P, const XPoint& Q, const XPoint& d) const {
    auto [N, D] = biquad(c, P, Q);
    return {F_.mul(c, N, d.Z), F_.mul(c, D, d.Y)};
  }
  XPoint xadd_fixed(CountCtx* c, const XPoint& P, const XPoint& Q, const Diff& d) const {
    auto [N, D] = biquad(c, P, Q);
    return {N, F_.mul(c, D, d.y)};
  }
  std::pair<XPoint, XPoint> xdbladd(CountCtx* c, const XPoint& P, const XPoint& Q,
                                    const Diff& d) const {
    return {xdbl(c, P), xadd_fixed(c, P, Q, d)};
  }

  Group add(CountCtx* c, const Group& P, const Group& Q) const {
    fe xy = F_.mul(c, P.x, Q.y), yx = F_.mul(c, P.y, Q.x);
    fe yy = F_.mul(c, P.y, Q.y), xx = F_.mul(c, P.x, Q.x);
    fe t = F_.mul(c, cv_.d, F_.mul(c, xy, yx));
    fe den1 = F_.add(c, (fe)1, t), den2 = F_.sub(c, (fe)1, t);
    if (den1 == 0 || den2 == 0) throw ECurveError("exceptional Edwards addition");
    Group R;
    R.x = F_.mul(c, F_.add(c, xy, yx), F_.inv(c, den1));
    R.y = F_.mul(c, F_.sub(c, yy, xx), F_.inv(c, den2));
    return R;
  }
  Group add_in_two_dim(CountCtx* c, const Group& P, const Group& Q) const {
    return add(c, P, Q);
  }

  // x(Q) = (y(Q+P) - y(Q) y(P)) / (x(P) (d y(P) y(Q) y(Q+P) - 1))
  Group recover(CountCtx* c, const Group& P, const XPoint& yQ,
                const XPoint& yQP) const {
    if (yQ.Z == 0 || yQP.Z == 0) throw ECurveError("recover needs finite y inputs");
    fe yq = F_.mul(c, yQ.Y, F_.inv(c, yQ.Z));
    fe ys = F_.mul(c, yQP.Y, F_.inv(c, yQP.Z));
    fe num = F_.sub(c, ys, F_.mul(c, yq, P.y));
    fe prod = F_.mul(c, cv_.d, F_.mul(c, F_.mul(c, P.y, yq), ys));
    fe den = F_.mul(c, P.x, F_.sub(c, prod, (fe)1));
    if (den == 0) throw ECurveError("recover denominator vanished");
    Group R;
    R.x = F_.mul(c, num, F_.inv(c, den));
    R.y = yq;
    return R;
  }

  static XPoint xselect(int bit, const XPoint& a, const XPoint& b) {
    return {Field::cselect(bit, a.Y, b.Y), Field::cselect(bit, a.Z, b.Z)};
  }
  static void xswap(int bit, XPoint& a, XPoint& b) {
    Field::cswap(bit, a.Y, b.Y);
    Field::cswap(bit, a.Z, b.Z);
  }

 private:
  // y(P+Q) y(P-Q) = N / D over the y-line
  std::pair<fe, fe> biquad(CountCtx* c, const XPoint& P, const XPoint& Q) const {
    fe y1 = F_.sqr(c, P.Y), z1 = F_.sqr(c, P.Z);
    fe y2 = F_.sqr(c, Q.Y), z2 = F_.sqr(c, Q.Z);
    fe P1 = F_.mul(c, y1, y2);
    fe Q1 = F_.mul(c, z1, z2);
    fe R1 = F_.mul(c, F_.sub(c, z1, F_.mul(c, cv_.d, y1)),
                   F_.sub(c, z2, F_.mul(c, cv_.d, y2)));
    fe S1 = F_.mul(c, F_.sub(c, z1, y1), F_.sub(c, z2, y2));
    fe N = F_.sub(c, F_.mul(c, P1, R1), F_.mul(c, S1, Q1));
    fe dd = F_.sqr(c, cv_.d);
    fe D = F_.sub(c, F_.mul(c, Q1, R1), F_.mul(c, dd, F_.mul(c, P1, S1)));
    return {N, D};
  }

  const Field& F_;
  EdwardsCurve cv_;
};

// ---------------------------------------------------------------------------
// Edwards <-> Montgomery transport: x^2+y^2 = 1+dx^2y^2 maps to
// BY^2 = X^3 + AX^2 + X with A = 2(1+d)/(1-d), B = 4/(1-d) via
// (x, y) -> (u, v) = ((1+y)/(1-y), u/x).

struct EdwardsMontgomeryMap {
  MontgomeryCurve mont;

  EdwardsMontgomeryMap(const Field& F, const EdwardsCurve& cv)
      : mont(F, coeff_a(F, cv), coeff_b(F, cv)), F_(F) {}

  AffinePoint to_mont(const AffinePoint& P) const {
    if (P.y == 1) return {0, 0, true};
    if (P.x == 0) throw ECurveError("transport undefined at a 2-torsion point");
    fe u = F_.mul_raw(F_.add(nullptr, (fe)1, P.y),
                      F_.inv(nullptr, F_.sub(nullptr, (fe)1, P.y)));
    fe v = F_.mul_raw(u, F_.inv(nullptr, P.x));
    return {u, v, false};
  }

  AffinePoint from_mont(const AffinePoint& P) const {
    if (P.inf) return {0, 1, false};
    if (P.y == 0 || F_.add(nullptr, P.x, (fe)1) == 0)
      throw ECurveError("transport undefined at a 2-torsion point");
    fe y = F_.mul_raw(F_.sub(nullptr, P.x, (fe)1),
                      F_.inv(nullptr, F_.add(nullptr, P.x, (fe)1)));
    fe x = F_.mul_raw(P.x, F_.inv(nullptr, P.y));
    return {x, y, false};
  }

 private:
  static fe coeff_a(const Field& F, const EdwardsCurve& cv) {
    fe den = F.inv(nullptr, F.sub(nullptr, (fe)1, cv.d));
    return F.mul_raw(F.mul_raw(F.add(nullptr, (fe)1, cv.d), F.from_u64(2)), den);
  }
  static fe coeff_b(const Field& F, const EdwardsCurve& cv) {
    return F.mul_raw(F.from_u64(4), F.inv(nullptr, F.sub(nullptr, (fe)1, cv.d)));
  }

  const Field& F_;
};

}  // namespace kummer
