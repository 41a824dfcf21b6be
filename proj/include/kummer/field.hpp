// Prime-field arithmetic with explicit operation counting.
//
// Two code paths share one interface: a fast path for q = 2^127 - 1 (the only
// field used at cryptographic size) and a generic path for small primes used
// by the test oracles. Elements are canonical representatives in [0, q) held
// in an unsigned __int128.
//
// Every arithmetic routine takes an optional CountCtx*. Passing nullptr runs
// the same code untallied; the counters are otherwise exact per-invocation
// tallies of M, S, multiplications by registered curve constants, additions
// (including subtractions and negations), inversions and square roots.

#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kummer {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using fe = u128;

// Registered constant-multiplication classes. Class kMcCurve covers generic
// curve constants (theta constants, Rosenhain values, f_i where applicable);
// kMcA and kMcB are the A/(A+2)/4 resp. B classes of the Montgomery model and
// double as the a resp. b classes of the Weierstrass model.
enum McClass : int { kMcCurve = 0, kMcA = 1, kMcB = 2 };

enum OpKind : std::uint8_t {
  kOpAdd = 1, kOpSub, kOpNeg, kOpMul, kOpSqr, kOpMulC, kOpInv, kOpSqrt
};

struct OpCount {
  u64 m = 0, s = 0, a = 0, i = 0, e = 0;
  std::array<u64, 3> mc{0, 0, 0};

  u64 mc_total() const { return mc[0] + mc[1] + mc[2]; }
  bool operator==(const OpCount& o) const {
    return m == o.m && s == o.s && a == o.a && i == o.i && e == o.e && mc == o.mc;
  }
  OpCount& operator+=(const OpCount& o) {
    m += o.m; s += o.s; a += o.a; i += o.i; e += o.e;
    for (int k = 0; k < 3; ++k) mc[k] += o.mc[k];
    return *this;
  }
  OpCount operator-(const OpCount& o) const {
    OpCount r = *this;
    r.m -= o.m; r.s -= o.s; r.a -= o.a; r.i -= o.i; r.e -= o.e;
    for (int k = 0; k < 3; ++k) r.mc[k] -= o.mc[k];
    return r;
  }
};

inline OpCount make_count(u64 m, u64 s, u64 mc0, u64 a, u64 i, u64 e = 0,
                          u64 mc1 = 0, u64 mc2 = 0) {
  OpCount c;
  c.m = m; c.s = s; c.a = a; c.i = i; c.e = e;
  c.mc = {mc0, mc1, mc2};
  return c;
}

// Counting context for one instrumented invocation. Optionally records the
// sequence of field-op kinds and backend-call kinds for uniformity tests.
struct CountCtx {
  OpCount ops;
  bool record_trace = false;
  std::vector<std::uint8_t> trace;       // field-op kinds
  std::vector<std::uint8_t> call_trace;  // backend subroutine kinds

  void note(OpKind k) {
    if (record_trace) trace.push_back(k);
  }
  void note_call(std::uint8_t k) {
    if (record_trace) call_trace.push_back(k);
  }
  // Documented accounting supplement applied at a call boundary.
  void apply(const OpCount& c) { ops += c; }
};

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Field {
 public:
  static constexpr u128 kM127 = (((u128)1) << 127) - 1;

  explicit Field(u128 q) : q_(q), mersenne_(q == kM127) {
    if (q < 3) throw FieldError("field modulus too small");
    if (!mersenne_ && q >> 63) throw FieldError("generic field path requires q < 2^63");
  }

  static Field mersenne127() { return Field(kM127); }

  u128 q() const { return q_; }
  bool is_mersenne() const { return mersenne_; }

  fe from_u64(u64 v) const { return (u128)v % q_; }
  fe from_u128(u128 v) const { return v % q_; }

  fe add(CountCtx* c, fe x, fe y) const {
    if (c) { c->ops.a++; c->note(kOpAdd); }
    u128 r = x + y;
    if (r >= q_) r -= q_;
    return r;
  }
  fe sub(CountCtx* c, fe x, fe y) const {
    if (c) { c->ops.a++; c->note(kOpSub); }
    return x >= y ? x - y : x + q_ - y;
  }
  fe neg(CountCtx* c, fe x) const {
    if (c) { c->ops.a++; c->note(kOpNeg); }
    return x ? q_ - x : 0;
  }
  fe mul(CountCtx* c, fe x, fe y) const {
    if (c) { c->ops.m++; c->note(kOpMul); }
    return mul_raw(x, y);
  }
  fe sqr(CountCtx* c, fe x) const {
    if (c) { c->ops.s++; c->note(kOpSqr); }
    return mul_raw(x, x);
  }
  // Multiplication by a registered curve constant.
  fe mul_const(CountCtx* c, fe x, fe k, McClass cls) const {
    if (c) { c->ops.mc[cls]++; c->note(kOpMulC); }
    return mul_raw(x, k);
  }
  // Branch-free inversion via exponentiation by q - 2. Tallies one I.
  fe inv(CountCtx* c, fe x) const {
    if (c) { c->ops.i++; c->note(kOpInv); }
    if (x == 0) throw FieldError("inversion of zero");
    return pow_raw(x, q_ - 2);
  }
  // Canonical square root (sign bit zero), or nullopt for non-residues.
  // Tallies one E.
  std::optional<fe> sqrt(CountCtx* c, fe x) const {
    if (c) { c->ops.e++; c->note(kOpSqrt); }
    fe r = sqrt_raw(x);
    if (mul_raw(r, r) != x) return std::nullopt;
    if (sign_bit(r)) r = r ? q_ - r : 0;
    return r;
  }
  // x^(-1/2) for nonzero squares; used by the batched inverse-sqrt trick.
  std::optional<fe> inv_sqrt(CountCtx* c, fe x) const {
    if (c) { c->ops.e++; c->note(kOpSqrt); }
    if (x == 0) return std::nullopt;
    fe r = sqrt_raw(x);
    if (mul_raw(r, r) != x) return std::nullopt;
    return pow_raw(r, q_ - 2);
  }

  // sign bit: parity of the canonical representative.
  static int sign_bit(fe x) { return (int)(x & 1); }

  // Constant-time conditional select/swap; no tallied field ops.
  static fe cselect(int bit, fe if0, fe if1) {
    u128 mask = (u128)0 - (u128)(bit & 1);
    return if0 ^ ((if0 ^ if1) & mask);
  }
  static void cswap(int bit, fe& x, fe& y) {
    u128 mask = (u128)0 - (u128)(bit & 1);
    u128 t = (x ^ y) & mask;
    x ^= t;
    y ^= t;
  }

  fe pow_raw(fe base, u128 exp) const {
    fe r = 1, b = base;
    while (exp) {
      if (exp & 1) r = mul_raw(r, b);
      b = mul_raw(b, b);
      exp >>= 1;
    }
    return r;
  }

  fe mul_raw(fe x, fe y) const {
    if (!mersenne_) return (x * y) % q_;
    u64 a0 = (u64)x, a1 = (u64)(x >> 64);
    u64 b0 = (u64)y, b1 = (u64)(y >> 64);
    u128 p00 = (u128)a0 * b0;
    u128 p01 = (u128)a0 * b1;
    u128 p10 = (u128)a1 * b0;
    u128 p11 = (u128)a1 * b1;
    u128 mid = p01 + p10;  // < 2^128 since a1, b1 < 2^63
    u128 carry = (p00 >> 64) + (u64)mid;
    u128 lo = ((carry & ~(u64)0) << 64) | (u64)p00;
    u128 hi = p11 + (mid >> 64) + (carry >> 64);
    // 256-bit hi:lo mod 2^127 - 1
    u128 r = (lo & kM127) + ((hi << 1) | (lo >> 127));
    r = (r & kM127) + (r >> 127);
    if (r >= kM127) r -= kM127;
    return r;
  }

 private:
  fe sqrt_raw(fe x) const {
    if (x == 0) return 0;
    if ((q_ & 3) == 3) return pow_raw(x, (q_ + 1) >> 2);
    return tonelli_shanks(x);
  }

  fe tonelli_shanks(fe n) const {
    u128 p = q_;
    u128 qq = p - 1;
    unsigned s = 0;
    while ((qq & 1) == 0) { qq >>= 1; ++s; }
    fe z = 2;
    while (pow_raw(z, (p - 1) >> 1) != p - 1) ++z;
    fe m = s, c = pow_raw(z, qq), t = pow_raw(n, qq), r = pow_raw(n, (qq + 1) >> 1);
    while (t != 1) {
      if (t == 0) return 0;
      u128 i = 0;
      fe t2 = t;
      while (t2 != 1 && i < m) { t2 = mul_raw(t2, t2); ++i; }
      if (i == m) return 0;  // non-residue; caller detects via r^2 != x
      fe b = c;
      for (u128 j = 0; j + 1 < m - i; ++j) b = mul_raw(b, b);
      m = i;
      c = mul_raw(b, b);
      t = mul_raw(t, c);
      r = mul_raw(r, b);
    }
    return r;
  }

  u128 q_;
  bool mersenne_;
};

// Batched inversion: 3(n-1) M + 1 I.
inline void simultaneous_inv(const Field& F, CountCtx* c, fe* xs, std::size_t n) {
  if (n == 0) return;
  std::vector<fe> acc(n);
  acc[0] = xs[0];
  for (std::size_t k = 1; k < n; ++k) acc[k] = F.mul(c, acc[k - 1], xs[k]);
  fe inv = F.inv(c, acc[n - 1]);
  for (std::size_t k = n; k-- > 1;) {
    fe t = F.mul(c, inv, acc[k - 1]);
    inv = F.mul(c, inv, xs[k]);
    xs[k] = t;
  }
  xs[0] = inv;
}

// Combined sqrt(u) and 1/v from one exponentiation:
//   w = (u v^2)^(-1/2);  sqrt(u) = (u v) w;  1/v = sqrt(u) w.
// Costs 4M + 1S + 1E. Returns nullopt if u is not a nonzero square.
struct InvSqrtResult {
  fe sqrt_u;
  fe inv_v;
};
inline std::optional<InvSqrtResult> simultaneous_inv_sqrt(const Field& F, CountCtx* c,
                                                          fe u, fe v) {
  fe v2 = F.sqr(c, v);
  fe w0 = F.mul(c, u, v2);
  auto w = F.inv_sqrt(c, w0);
  if (!w) return std::nullopt;
  fe uv = F.mul(c, u, v);
  fe su = F.mul(c, uv, *w);
  fe iv = F.mul(c, su, *w);
  if (Field::sign_bit(su)) su = su ? F.q() - su : 0;
  return InvSqrtResult{su, iv};
}

// 16-byte little-endian field element encoding; byte 15 bit 7 is always clear
// for 127-bit moduli.
inline std::array<std::uint8_t, 16> fe_to_bytes(fe x) {
  std::array<std::uint8_t, 16> out{};
  for (int k = 0; k < 16; ++k) out[k] = (std::uint8_t)(x >> (8 * k));
  return out;
}
inline std::optional<fe> fe_from_bytes(const Field& F, const std::uint8_t* p) {
  u128 v = 0;
  for (int k = 15; k >= 0; --k) v = (v << 8) | p[k];
  if (v >= F.q()) return std::nullopt;
  return v;
}

}  // namespace kummer
