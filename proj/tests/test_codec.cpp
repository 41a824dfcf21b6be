#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kummer/codec.hpp"
#include "kummer/fastkummer.hpp"
#include "kummer/oracle.hpp"

using namespace kummer;

namespace {

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

}  // namespace

TEST_CASE("general Kummer: compress/decompress round trip and counters") {
  Field F(65521);
  std::mt19937_64 rng(5);
  Genus2Curve C = oracle::toy_rosenhain(F, rng);

  int done = 0;
  while (done < 100) {
    MumfordPoint P = random_generic(C, rng);
    GeneralKummerPoint x = jac_project(C, nullptr, P);
    CountCtx cc;
    CompressedKummer comp;
    try {
      comp = gk_compress(C, &cc, x);
    } catch (const CodecError&) {
      continue;  // K2 = 0 is excluded by contract
    }
    ++done;
    REQUIRE(cc.ops == make_count(10, 2, 0, 11, 1));

    CountCtx cd;
    GeneralKummerPoint y = gk_decompress(C, &cd, comp);
    REQUIRE(cd.ops == make_count(25, 4, 0, 24, 0, 1));
    REQUIRE(kummer_residual(C, y) == 0);
    REQUIRE(proportional(F, x.xi, y.xi));
  }
}

TEST_CASE("general Kummer: the two xi4 preimages carry distinct bits") {
  Field F(65521);
  std::mt19937_64 rng(7);
  Genus2Curve C = oracle::toy_rosenhain(F, rng);

  int done = 0;
  while (done < 50) {
    MumfordPoint P = random_generic(C, rng);
    GeneralKummerPoint x = jac_project(C, nullptr, P);
    CompressedKummer comp;
    try {
      comp = gk_compress(C, nullptr, x);
    } catch (const CodecError&) {
      continue;
    }
    CompressedKummer flipped = comp;
    flipped.bit ^= 1;
    GeneralKummerPoint other;
    try {
      other = gk_decompress(C, nullptr, flipped);
    } catch (const CodecError&) {
      continue;  // double root: only one preimage exists
    }
    ++done;
    REQUIRE(kummer_residual(C, other) == 0);
    CompressedKummer back = gk_compress(C, nullptr, other);
    REQUIRE(back.bit == flipped.bit);
    if (other.xi[3] == x.xi[3]) continue;  // distinct unless the root doubles
    REQUIRE(!proportional(F, other.xi, x.xi));
  }
}

TEST_CASE("general Kummer: compression on a sextic model") {
  Field F(65521);
  std::mt19937_64 rng(11);
  Genus2Curve C = oracle::toy_sextic(F, rng);

  int done = 0;
  while (done < 100) {
    MumfordPoint P = random_generic(C, rng);
    GeneralKummerPoint x = jac_project(C, nullptr, P);
    CompressedKummer comp;
    try {
      comp = gk_compress(C, nullptr, x);
    } catch (const CodecError&) {
      continue;
    }
    ++done;
    GeneralKummerPoint y = gk_decompress(C, nullptr, comp);
    REQUIRE(kummer_residual(C, y) == 0);
    REQUIRE(proportional(F, x.xi, y.xi));
  }
}

TEST_CASE("fast Kummer: compress/decompress round trip and counters") {
  Field F(65521);
  std::mt19937_64 rng(3);
  FastKummerParams p = oracle::toy_fast_kummer(F, rng);
  const Genus2Curve& C = p.curve;

  int done = 0;
  while (done < 100) {
    MumfordPoint P = random_generic(C, rng);
    FastKummerPoint x;
    CompressedKummer comp;
    CountCtx cc;
    try {
      x = fk_project(p, nullptr, P);
      comp = fk_compress(p, &cc, x);
    } catch (const std::runtime_error&) {
      continue;  // excluded degenerate configuration
    }
    ++done;
    REQUIRE(cc.ops == make_count(25, 2, 0, 23, 1));

    CountCtx cd;
    FastKummerPoint y = fk_decompress(p, &cd, comp);
    REQUIRE(cd.ops == make_count(40, 4, 0, 36, 0, 1));
    REQUIRE(fast_kummer_residual(p, y) == 0);
    REQUIRE(proportional(F, x.v, y.v));
  }
}

TEST_CASE("Jacobian: compression counter and Rosenhain round trip") {
  Field F(65521);
  std::mt19937_64 rng(13);
  Genus2Curve C = oracle::toy_rosenhain(F, rng);

  int done = 0;
  while (done < 100) {
    MumfordPoint P = random_generic(C, rng);
    if (P.b1 == 0) continue;  // decompression requires b1 != 0

    CountCtx cc;
    CompressedMumford comp = jac_compress(C, &cc, P);
    REQUIRE(cc.ops == make_count(3, 1, 0, 4, 0));

    CountCtx cd;
    MumfordPoint back;
    try {
      back = jac_decompress(C, &cd, comp);
    } catch (const CodecError&) {
      continue;  // A = 0 or a vanishing radicand is excluded by contract
    }
    ++done;
    REQUIRE(cd.ops == make_count(18, 4, 0, 27, 0, 2));
    REQUIRE(back == P);
  }
}

TEST_CASE("Jacobian: bit1 separates the two z0 roots") {
  Field F(65521);
  std::mt19937_64 rng(17);
  Genus2Curve C = oracle::toy_rosenhain(F, rng);

  int done = 0;
  while (done < 50) {
    MumfordPoint P = random_generic(C, rng);
    if (P.b1 == 0) continue;
    CompressedMumford comp = jac_compress(C, nullptr, P);
    try {
      if (jac_decompress(C, nullptr, comp) != P) continue;
    } catch (const CodecError&) {
      continue;
    }
    ++done;
    CompressedMumford flipped = comp;
    flipped.bit1 ^= 1;
    try {
      MumfordPoint other = jac_decompress(C, nullptr, flipped);
      REQUIRE(other != P);
      REQUIRE(jac_validate(C, other) == JacClass::kGeneric);
    } catch (const CodecError&) {
      // the flipped bit may select a branch with no valid point
    }
  }
}

TEST_CASE("Jacobian: general-curve decompression round trip") {
  Field F(65521);
  std::mt19937_64 rng(19);
  Genus2Curve C = oracle::toy_sextic(F, rng);

  int done = 0;
  while (done < 100) {
    MumfordPoint P = random_generic(C, rng);
    if (P.b1 == 0 || P.a0 == 0) continue;
    CompressedMumford comp = jac_compress(C, nullptr, P);
    CountCtx cd;
    MumfordPoint back;
    try {
      back = jac_decompress(C, &cd, comp);
    } catch (const CodecError&) {
      continue;
    }
    ++done;
    REQUIRE(cd.ops == make_count(36, 5, 0, 45, 0, 2));
    REQUIRE(back == P);
  }
}

TEST_CASE("Jacobian: round trip over the 127-bit field") {
  Field F = Field::mersenne127();
  std::mt19937_64 rng(23);
  FastKummerParams p = gaudry_schost_params(F);
  const Genus2Curve& C = p.curve;

  for (int t = 0; t < 10; ++t) {
    MumfordPoint P = random_generic(C, rng);
    if (P.b1 == 0) continue;
    CompressedMumford comp = jac_compress(C, nullptr, P);
    REQUIRE(jac_decompress(C, nullptr, comp) == P);

    auto bytes = encode_point_256(comp);
    CompressedMumford wire = decode_point_256(F, bytes.data());
    REQUIRE(wire.a1 == comp.a1);
    REQUIRE(wire.a0 == comp.a0);
    REQUIRE(wire.bit1 == comp.bit1);
    REQUIRE(wire.bit0 == comp.bit0);
  }
}

TEST_CASE("wire encodings: layout, identity, and rejection") {
  Field F = Field::mersenne127();

  CompressedMumford z;  // all-zero point encoding round trips
  auto bz = encode_point_256(z);
  for (auto b : bz) REQUIRE(b == 0);
  CompressedMumford dz = decode_point_256(F, bz.data());
  REQUIRE(dz.a0 == 0);
  REQUIRE(dz.a1 == 0);

  // bit0 is the very first wire bit, bit1 the first bit of the upper half
  CompressedMumford bits;
  bits.bit0 = 1;
  bits.bit1 = 1;
  auto bb = encode_point_256(bits);
  REQUIRE(bb[0] == 1);
  REQUIRE(bb[16] == 1);

  // a0 = q is out of range
  CompressedMumford bad;
  bad.a0 = F.q();
  auto raw = encode_point_256(bad);
  REQUIRE_THROWS_AS(decode_point_256(F, raw.data()), CodecError);

  std::mt19937_64 rng(29);
  for (int t = 0; t < 20; ++t) {
    CompressedMumford P;
    P.a0 = oracle::random_fe(F, rng);
    P.a1 = oracle::random_fe(F, rng);
    P.bit0 = (int)(rng() & 1);
    P.bit1 = (int)(rng() & 1);
    auto e = encode_point_256(P);
    CompressedMumford d = decode_point_256(F, e.data());
    REQUIRE(d.a0 == P.a0);
    REQUIRE(d.a1 == P.a1);
    REQUIRE(d.bit0 == P.bit0);
    REQUIRE(d.bit1 == P.bit1);
  }

  bigint s = (bigint(0x1234567890abcdefULL) << 180) + 42;
  auto se = encode_scalar_256(s);
  REQUIRE(decode_scalar_256(se.data()) == s);
  REQUIRE_THROWS_AS(encode_scalar_256(bigint(1) << 256), CodecError);

  auto sig = encode_sig_512(bz, s);
  for (int k = 0; k < 32; ++k) {
    REQUIRE(sig[k] == bz[k]);
    REQUIRE(sig[32 + k] == se[k]);
  }
}
