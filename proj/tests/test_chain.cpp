#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kummer/chain.hpp"

using namespace kummer;

namespace {

int bit_len(unsigned long long v) {
  int n = 0;
  while (v) { ++n; v >>= 1; }
  return n;
}

ScalarBits bits_of(unsigned long long v, int beta) {
  ScalarBits s;
  for (int i = 0; i < beta; ++i) s.bits.push_back((int)((v >> i) & 1));
  return s;
}

}  // namespace

TEST_CASE("chain encoding d-sequence matches the recursive chain oracle") {
  for (long long m = 1; m < 256; ++m)
    for (long long n = 1; n < 256; ++n) {
      int beta = std::max(bit_len((unsigned long long)m), bit_len((unsigned long long)n));
      if (beta < 2) continue;
      ChainEncoding enc = chain_encode(bits_of(m, beta), bits_of(n, beta));
      ChainOracle oc = chain_triples_oracle(m, n, (int)(m & 1));
      REQUIRE((int)oc.levels.size() == beta);
      // oracle levels run top prefix first: levels[j] is (m >> (beta-1-j), ...)
      for (int i = 0; i <= beta - 2; ++i) {
        const ChainStep& st = enc.steps[i];
        REQUIRE(st.mm == (int)(((m >> i) ^ (m >> (i + 1))) & 1));
        REQUIRE(st.nn == (int)(((n >> i) ^ (n >> (i + 1))) & 1));
        REQUIRE(st.mn == (int)(((m >> (i + 1)) ^ (n >> (i + 1))) & 1));
        REQUIRE(st.d == oc.levels[beta - 1 - i].d);
      }
      REQUIRE(enc.d_top == oc.levels[0].d);
    }
}

TEST_CASE("chain oracle triples obey the differential structure") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    long long m = (long long)(rng() & 0xFFFFF) + 1;
    long long n = (long long)(rng() & 0xFFFFF) + 1;
    ChainOracle oc = chain_triples_oracle(m, n, (int)(m & 1));
    for (std::size_t j = 0; j < oc.levels.size(); ++j) {
      const ChainTriple& t = oc.levels[j];
      // O has odd-odd coordinates, E even-even, M mixed per the level's d.
      REQUIRE((t.o_pair.a & 1) == 1);
      REQUIRE((t.o_pair.b & 1) == 1);
      REQUIRE((t.e_pair.a & 1) == 0);
      REQUIRE((t.e_pair.b & 1) == 0);
      REQUIRE(((t.m_pair.a ^ t.d) & 1) == 0);
      REQUIRE(((t.m_pair.b ^ t.d) & 1) == 1);
      // O - E is +-(1,1) or +-(1,-1); M - E is a unit vector.
      long long da = t.o_pair.a - t.e_pair.a, db = t.o_pair.b - t.e_pair.b;
      REQUIRE(std::abs(da) == 1);
      REQUIRE(std::abs(db) == 1);
      long long ma = t.m_pair.a - t.e_pair.a, mb = t.m_pair.b - t.e_pair.b;
      REQUIRE(std::abs(ma) + std::abs(mb) == 1);
      // The level's difference class O - E tracks the parity split m_i ^ n_i
      // of the prefix pair the triple brackets.
      int shift = (int)(oc.levels.size() - 1 - j);
      int t0 = (int)(((m >> shift) ^ (n >> shift)) & 1);
      if (t0)
        REQUIRE(da * db == -1);  // +-(P - Q) direction
      else
        REQUIRE(da * db == 1);  // +-(P + Q) direction
    }
  }
}

TEST_CASE("integer-model ladder computes [m]P for every scalar width") {
  IntegerModelBackend bk;
  IntegerModelBackend::Group P{3, 7};
  for (unsigned long long m = 2; m < 4096; ++m) {
    ScalarBits s = bits_of(m, bit_len(m));
    auto R = ladder_mul(bk, nullptr, P, s);
    REQUIRE(R.a == (long long)m * 3);
    REQUIRE(R.b == (long long)m * 7);
  }
}

TEST_CASE("integer-model two-dimensional multiplication is exhaustively correct") {
  IntegerModelBackend bk;
  IntegerModelBackend::Group P{1, 0}, Q{0, 1};
  for (long long m = 1; m < 256; ++m)
    for (long long n = 1; n < 256; ++n) {
      int beta = std::max(bit_len((unsigned long long)m), bit_len((unsigned long long)n));
      if (beta < 2) continue;
      auto R = two_dim_mul(bk, nullptr, P, Q, bits_of(m, beta), bits_of(n, beta));
      REQUIRE(R.a == m);
      REQUIRE(R.b == n);
    }
}

TEST_CASE("integer-model two-dimensional multiplication on wide random scalars") {
  IntegerModelBackend bk;
  IntegerModelBackend::Group P{1, 0}, Q{0, 1};
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    long long m = (long long)(rng() >> 24) | (1LL << 40);  // force beta = 41
    long long n = (long long)(rng() >> 24);
    if (n == 0) n = 1;
    auto R = two_dim_mul(bk, nullptr, P, Q, bits_of(m, 41), bits_of(n, 41));
    REQUIRE(R.a == m);
    REQUIRE(R.b == n);
  }
  // general base points, m and n sharing no structure with the basis
  IntegerModelBackend::Group P2{5, -2}, Q2{3, 11};
  for (int trial = 0; trial < 200; ++trial) {
    long long m = (long long)(rng() & 0xFFFFFF) | (1LL << 24);
    long long n = (long long)(rng() & 0x1FFFFFF);
    if (n == 0) n = 1;
    auto R = two_dim_mul(bk, nullptr, P2, Q2, bits_of(m, 25), bits_of(n, 25));
    REQUIRE(R.a == m * 5 + n * 3);
    REQUIRE(R.b == m * -2 + n * 11);
  }
}

TEST_CASE("driver call traces depend only on the scalar width") {
  IntegerModelBackend bk;
  IntegerModelBackend::Group P{1, 0}, Q{0, 1};
  const int beta = 16;

  std::vector<std::uint8_t> expect_1d{kCallProject, kCallXDbl};
  for (int i = 0; i < beta - 1; ++i) expect_1d.push_back(kCallXDblAdd);
  expect_1d.push_back(kCallRecover);

  std::vector<std::uint8_t> expect_2d{kCallAdd, kCallProject, kCallProject,
                                      kCallProject, kCallXAdd, kCallXDblAdd};
  for (int i = 0; i < beta - 1; ++i) {
    expect_2d.push_back(kCallXAdd);
    expect_2d.push_back(kCallXDblAdd);
  }
  expect_2d.push_back(kCallRecover);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 32; ++trial) {
    unsigned long long m = (rng() & 0xFFFF) | 0x8000u;
    unsigned long long n = rng() & 0xFFFF;

    CountCtx c1;
    c1.record_trace = true;
    ladder_mul(bk, &c1, P, bits_of(m, beta));
    REQUIRE(c1.call_trace == expect_1d);

    CountCtx c2;
    c2.record_trace = true;
    two_dim_mul(bk, &c2, P, Q, bits_of(m, beta), bits_of(n, beta));
    REQUIRE(c2.call_trace == expect_2d);
  }
}

TEST_CASE("drivers reject malformed scalar inputs") {
  IntegerModelBackend bk;
  IntegerModelBackend::Group P{1, 0}, Q{0, 1};
  REQUIRE_THROWS_AS(ladder_mul(bk, nullptr, P, bits_of(6, 4)), ChainError);
  REQUIRE_THROWS_AS(two_dim_mul(bk, nullptr, P, Q, bits_of(2, 3), bits_of(3, 3)),
                    ChainError);
  REQUIRE_THROWS_AS(two_dim_mul(bk, nullptr, P, Q, bits_of(5, 3), bits_of(3, 2)),
                    ChainError);
}
