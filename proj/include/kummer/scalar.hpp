// Scalar plumbing: fixed-width bit vectors plus bignum helpers.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kummer {

using bigint = boost::multiprecision::cpp_int;

// A scalar as a fixed-width little-endian bit vector. The width is the ladder
// length beta; callers guarantee the top-bit preconditions of the drivers.
struct ScalarBits {
  std::vector<int> bits;

  int beta() const { return (int)bits.size(); }
  int bit(int i) const { return bits[i]; }

  static ScalarBits from_bigint(const bigint& v, int beta) {
    if (v < 0) throw std::invalid_argument("negative scalar");
    ScalarBits s;
    s.bits.resize(beta);
    for (int i = 0; i < beta; ++i) s.bits[i] = (int)bit_test(v, i);
    if (v >> beta != 0) throw std::invalid_argument("scalar wider than beta");
    return s;
  }
  static ScalarBits from_u64(std::uint64_t v, int beta) {
    return from_bigint(bigint(v), beta);
  }
  bigint to_bigint() const {
    bigint v = 0;
    for (int i = beta() - 1; i >= 0; --i) v = (v << 1) | bits[i];
    return v;
  }
};

inline int bit_length(const bigint& v) {
  if (v == 0) return 0;
  return (int)msb(v) + 1;
}

}  // namespace kummer
