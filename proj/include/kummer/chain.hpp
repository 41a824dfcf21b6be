// Uniform one- and two-dimensional scalar multiplication templates.
//
// Both drivers are generic over a pseudo-arithmetic backend supplying the six
// subroutines Project, xDBL, xADD, xDBLADD, ADD and Recover. The call
// skeleton is scalar-independent: per ladder step exactly one xDBLADD, per
// two-dimensional step exactly one xADD followed by one xDBLADD, with operand
// roles routed by masked selection.
//
// Backend concept:
//   types Group, XPoint, Diff
//   XPoint project(CountCtx*, const Group&)
//   XPoint xdbl(CountCtx*, const XPoint&)
//   XPoint xadd(CountCtx*, const XPoint&, const XPoint&, const XPoint& diff)
//   XPoint xadd_fixed(CountCtx*, const XPoint&, const XPoint&, const Diff&)
//   std::pair<XPoint, XPoint> xdbladd(CountCtx*, const XPoint& dbl_arg,
//                                     const XPoint& add_arg, const Diff&)
//   Group add(CountCtx*, const Group&, const Group&)    // distinct inputs
//   Group add_in_two_dim(CountCtx*, ...)                // same, driver tally
//   Group recover(CountCtx*, const Group& base, const XPoint& xQ,
//                 const XPoint& xQ_plus_base)
//   Diff make_diff(const XPoint&)     // fixed-difference cache, untallied
//   Diff dselect(int bit, const Diff& if0, const Diff& if1)
//   static XPoint xselect(int bit, const XPoint& if0, const XPoint& if1)
//   static void xswap(int bit, XPoint&, XPoint&)

#pragma once

#include <cassert>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kummer/field.hpp"
#include "kummer/scalar.hpp"

namespace kummer {

enum CallKind : std::uint8_t {
  kCallProject = 1, kCallXDbl, kCallXAdd, kCallXDblAdd, kCallAdd, kCallRecover
};

struct ChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// One-dimensional Montgomery-style ladder.

// Core ladder loop; returns (x([m]P), x([m+1]P)). Requires the top bit of m
// to be set.
template <class B>
std::pair<typename B::XPoint, typename B::XPoint> ladder_core(
    B& bk, CountCtx* ctx, const typename B::XPoint& xP,
    const typename B::Diff& dP, const ScalarBits& m) {
  const int beta = m.beta();
  if (beta < 1 || !m.bit(beta - 1)) throw ChainError("ladder scalar must have top bit set");
  typename B::XPoint t1 = xP;
  if (ctx) ctx->note_call(kCallXDbl);
  typename B::XPoint t2 = bk.xdbl(ctx, xP);
  for (int i = beta - 2; i >= 0; --i) {
    int s = m.bit(i);
    B::xswap(s, t1, t2);
    if (ctx) ctx->note_call(kCallXDblAdd);
    auto r = bk.xdbladd(ctx, t1, t2, dP);
    t1 = r.first;
    t2 = r.second;
    B::xswap(s, t1, t2);
  }
  return {t1, t2};
}

// Full uniform ladder: Project, pseudomultiply, Recover.
template <class B>
typename B::Group ladder_mul(B& bk, CountCtx* ctx, const typename B::Group& P,
                             const ScalarBits& m) {
  if (ctx) ctx->note_call(kCallProject);
  typename B::XPoint xP = bk.project(ctx, P);
  typename B::Diff dP = bk.make_diff(xP);  // uncounted fixed-difference cache
  auto [t1, t2] = ladder_core(bk, ctx, xP, dP, m);
  if (ctx) ctx->note_call(kCallRecover);
  return bk.recover(ctx, P, t1, t2);
}

// ---------------------------------------------------------------------------
// Addition-chain encoding for the two-dimensional algorithm.

struct ChainStep {
  int mm;  // m_i ^ m_{i+1}
  int nn;  // n_i ^ n_{i+1}
  int mn;  // m_{i+1} ^ n_{i+1}
  int d;   // d_i
};

struct ChainEncoding {
  std::vector<ChainStep> steps;  // indices 0 .. beta-2
  int d_top;                     // d_{beta-1}
};

// Bit-logic recoding of the pair (m, n); beta - 1 steps plus the final d.
inline ChainEncoding chain_encode(const ScalarBits& m, const ScalarBits& n) {
  if (m.beta() != n.beta()) throw ChainError("scalar widths differ");
  const int beta = m.beta();
  if (beta < 2) throw ChainError("beta must be at least 2");
  ChainEncoding enc;
  int d = m.bit(0);
  for (int i = 0; i <= beta - 2; ++i) {
    int mm = m.bit(i) ^ m.bit(i + 1);
    int nn = n.bit(i) ^ n.bit(i + 1);
    int mn = m.bit(i + 1) ^ n.bit(i + 1);
    enc.steps.push_back({mm, nn, mn, d});
    d = ((d ^ 1) & mm) ^ (d & (nn ^ 1));
  }
  enc.d_top = d;
  return enc;
}

// ---------------------------------------------------------------------------
// Two-dimensional uniform multiscalar multiplication: [m]P + [n]Q.
//
// Preconditions: P != +-Q, neither the identity, and the top bit of m or n
// set. The per-step switch bits are, in prose order, (m_i^n_i, m_i^m_{i+1},
// n_i^n_{i+1}, d_i); the first is the XOR of the three stored step bits.
template <class B>
typename B::Group two_dim_mul(B& bk, CountCtx* ctx, const typename B::Group& P,
                              const typename B::Group& Q, const ScalarBits& m,
                              const ScalarBits& n) {
  using XPoint = typename B::XPoint;
  const int beta = m.beta();
  if (n.beta() != beta) throw ChainError("scalar widths differ");
  if (!(m.bit(beta - 1) | n.bit(beta - 1)))
    throw ChainError("two-dim scalars must have a top bit set");
  if (beta == 1) {
    // width-1 scalars leave no chain to walk; beta is public, so branching
    // on it (not on the scalar bits) stays uniform
    if (m.bit(0) & n.bit(0)) {
      if (ctx) ctx->note_call(kCallAdd);
      return bk.add_in_two_dim(ctx, P, Q);
    }
    return m.bit(0) ? P : Q;
  }

  ChainEncoding enc = chain_encode(m, n);

  if (ctx) ctx->note_call(kCallAdd);
  typename B::Group S = bk.add_in_two_dim(ctx, P, Q);
  if (ctx) { ctx->note_call(kCallProject); ctx->note_call(kCallProject); ctx->note_call(kCallProject); }
  auto [xP, xQ, xS] = bk.project3(ctx, P, Q, S);
  typename B::Diff dP = bk.make_diff(xP);
  typename B::Diff dQ = bk.make_diff(xQ);
  typename B::Diff dS = bk.make_diff(xS);
  if (ctx) ctx->note_call(kCallXAdd);
  XPoint xD = bk.xadd_fixed(ctx, xP, xQ, dS);  // x(P - Q)
  typename B::Diff dD = bk.make_diff(xD);

  // initialization on (m_{beta-1}, n_{beta-1}, d_{beta-1}):
  //  (0,1,0): M = xQ;  (E,O) = xDBLADD(xQ, xP, dD)
  //  (0,1,1): O = xS;  (E,M) = xDBLADD(xQ, xS, dP)
  //  (1,0,0): O = xS;  (E,M) = xDBLADD(xP, xS, dQ)
  //  (1,0,1): M = xP;  (E,O) = xDBLADD(xP, xQ, dD)
  //  (1,1,0): O = xS;  (E,M) = xDBLADD(xS, xP, dQ)
  //  (1,1,1): O = xS;  (E,M) = xDBLADD(xS, xQ, dP)
  int mt = m.bit(beta - 1), nt = n.bit(beta - 1), dt = enc.d_top;
  XPoint O, E, M;
  {
    int both = mt & nt;
    int use_sub = (mt ^ nt) & ~(mt ^ dt) & 1;  // cases (0,1,0), (1,0,1)
    XPoint dbl_arg = B::xselect(both, B::xselect(mt, xQ, xP), xS);
    XPoint add_arg =
        B::xselect(both | use_sub, xS, B::xselect((both & dt) | (use_sub & mt), xP, xQ));
    typename B::Diff diff = bk.dselect(use_sub, bk.dselect(dt, dQ, dP), dD);
    if (ctx) ctx->note_call(kCallXDblAdd);
    auto r = bk.xdbladd(ctx, dbl_arg, add_arg, diff);
    E = r.first;
    XPoint fixed_pt = B::xselect(use_sub, xS, B::xselect(mt, xQ, xP));
    M = B::xselect(use_sub, r.second, fixed_pt);
    O = B::xselect(use_sub, fixed_pt, r.second);
  }

  for (int i = beta - 2; i >= 0; --i) {
    const ChainStep& st = enc.steps[i];
    int t1 = st.mm, t2 = st.nn, t3 = st.d;
    if (ctx) ctx->note_call(kCallXAdd);
    // O and E carry over from the wider prefix, whose parity split is mn
    XPoint Onew = bk.xadd_fixed(ctx, O, E, bk.dselect(st.mn, dS, dD));
    // xDBLADD operand routing per the sixteen-case switch
    XPoint u = B::xselect(t1 & t2, B::xselect(t1 | t2, E, M), O);
    XPoint v = B::xselect(t1 ^ t2, M, B::xselect(t3 ^ t1, E, O));
    if (ctx) ctx->note_call(kCallXDblAdd);
    auto r = bk.xdbladd(ctx, u, v, bk.dselect(t3, dQ, dP));
    E = r.first;
    M = r.second;
    O = Onew;
  }

  int m0 = m.bit(0), n0 = n.bit(0);
  if (ctx) ctx->note_call(kCallRecover);
  if (!m0 && !n0) return bk.recover(ctx, S, E, O);
  if (!m0 && n0) return bk.recover(ctx, P, M, O);
  if (m0 && !n0) return bk.recover(ctx, P, M, E);
  return bk.recover(ctx, S, O, E);
}

// ---------------------------------------------------------------------------
// Differential chain oracle: the recursive binary chain underlying the
// two-dimensional algorithm. Returns the chain as (O, E, M) triples per level
// (top of the recursion last) preceded by the base vectors.

struct ChainPair {
  long long a, b;
  bool operator==(const ChainPair& o) const { return a == o.a && b == o.b; }
};

struct ChainTriple {
  ChainPair o_pair, e_pair, m_pair;
  int d;  // parity selector in force at this level
};

struct ChainOracle {
  std::vector<ChainPair> base;      // ((0,0),(1,0),(0,1),(1,-1))
  std::vector<ChainTriple> levels;  // bottom-up
};

inline ChainOracle chain_triples_oracle(long long A, long long B, int D) {
  ChainOracle out;
  out.base = {{0, 0}, {1, 0}, {0, 1}, {1, -1}};
  std::vector<std::tuple<long long, long long, int>> stack;
  while (!(A == 0 && B == 0)) {
    stack.push_back({A, B, D});
    long long a = A >> 1, b = B >> 1;
    int am = (int)((A ^ a) & 1), bm = (int)((B ^ b) & 1);
    int d;
    if (!am && !bm) d = D;
    else if (!am && bm) d = 0;
    else if (am && !bm) d = 1;
    else d = 1 - D;
    A = a; B = b; D = d;
  }
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    auto [cA, cB, cD] = *it;
    ChainTriple t;
    // O rounds both components up to odd, E up to even, M mixed per D:
    // M = (A + (A+D mod 2), B + (B+D+1 mod 2)).
    t.o_pair = {cA + ((cA + 1) & 1), cB + ((cB + 1) & 1)};
    t.e_pair = {cA + (cA & 1), cB + (cB & 1)};
    t.m_pair = {cA + ((cA + cD) & 1), cB + ((cB + cD + 1) & 1)};
    t.d = cD;
    out.levels.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Abstract-integer backend: the group is Z x Z with pseudo-points identified
// up to sign. Every pseudo-op asserts its differential precondition, so
// running the drivers over this backend validates the chain logic exactly.

struct IntegerModelBackend {
  struct Group {
    long long a, b;
    bool operator==(const Group& o) const { return a == o.a && b == o.b; }
  };
  struct XPoint {
    long long a, b;
    bool operator==(const XPoint& o) const { return a == o.a && b == o.b; }
  };
  using Diff = XPoint;

  static XPoint canon(long long a, long long b) {
    if (a < 0 || (a == 0 && b < 0)) { a = -a; b = -b; }
    return {a, b};
  }

  XPoint project(CountCtx*, const Group& g) { return canon(g.a, g.b); }
  XPoint xdbl(CountCtx*, const XPoint& x) { return canon(2 * x.a, 2 * x.b); }

  static XPoint diff_add(const XPoint& x, const XPoint& y, const XPoint& d) {
    // choose signs with x - y = +-d; the sum is then sign-independent
    for (int sx : {1, -1})
      for (int sy : {1, -1}) {
        long long da = sx * x.a - sy * y.a, db = sx * x.b - sy * y.b;
        if ((da == d.a && db == d.b) || (da == -d.a && db == -d.b))
          return canon(sx * x.a + sy * y.a, sx * x.b + sy * y.b);
      }
    throw ChainError("integer model: invalid differential addition");
  }

  XPoint xadd(CountCtx*, const XPoint& x, const XPoint& y, const XPoint& d) {
    return diff_add(x, y, d);
  }
  XPoint xadd_fixed(CountCtx* c, const XPoint& x, const XPoint& y, const Diff& d) {
    return xadd(c, x, y, d);
  }
  std::pair<XPoint, XPoint> xdbladd(CountCtx* c, const XPoint& x, const XPoint& y,
                                    const Diff& d) {
    return {xdbl(c, x), xadd(c, x, y, d)};
  }
  Group add(CountCtx*, const Group& g, const Group& h) {
    return {g.a + h.a, g.b + h.b};
  }
  Group add_in_two_dim(CountCtx* c, const Group& g, const Group& h) {
    return add(c, g, h);
  }
  Group recover(CountCtx*, const Group& base, const XPoint& xq, const XPoint& xqp) {
    for (int s : {1, -1}) {
      long long qa = s * xq.a, qb = s * xq.b;
      XPoint shifted = canon(qa + base.a, qb + base.b);
      if (shifted == xqp) return {qa, qb};
    }
    throw ChainError("integer model: recover relation violated");
  }
  Diff make_diff(const XPoint& x) { return x; }

  Diff dselect(int bit, const Diff& d0, const Diff& d1) const { return bit ? d1 : d0; }
  std::tuple<XPoint, XPoint, XPoint> project3(CountCtx* c, const Group& p,
                                              const Group& q, const Group& s) {
    return {project(c, p), project(c, q), project(c, s)};
  }
  static XPoint xselect(int bit, const XPoint& x, const XPoint& y) {
    return bit ? y : x;
  }
  static void xswap(int bit, XPoint& x, XPoint& y) {
    if (bit) std::swap(x, y);
  }
};

}  // namespace kummer
