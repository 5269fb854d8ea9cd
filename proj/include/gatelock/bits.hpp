// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace gatelock {

// Fixed-width bit pattern. Index 0 is the most significant bit, matching the
// textual form: BitVec::from_bits("100").get(0) == 1.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t width) : bits_(width, 0) {}

  static BitVec from_bits(std::string_view s);
  // Hex digits, MSB-first; an optional "0x" prefix is accepted. width must
  // satisfy 4*digits - 3 <= width <= 4*digits (leading pad bits must be 0).
  static BitVec from_hex(std::string_view s, size_t width);
  static BitVec from_u64(uint64_t v, size_t width);
  // Accepts "0x..." as hex, "0b..." as binary, otherwise binary.
  static BitVec parse(std::string_view s, size_t expect_width = 0);

  size_t width() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int get(size_t i) const { return bits_[i]; }
  void set(size_t i, int v) { bits_[i] = static_cast<uint8_t>(v & 1); }
  void flip(size_t i) { bits_[i] ^= 1; }

  std::string to_bits() const;
  std::string to_hex() const;  // ceil(width/4) digits, no prefix
  uint64_t to_u64() const;     // width must be <= 64

  BitVec slice(size_t pos, size_t len) const;
  static BitVec concat(const BitVec& hi, const BitVec& lo);
  size_t count_ones() const;

  bool operator==(const BitVec&) const = default;

 private:
  std::vector<uint8_t> bits_;
};

// Deterministic pseudo-random stream. All randomized choices in the library
// go through this so that a (seed, code version) pair fixes every artifact.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  uint64_t next_u64() { return gen_(); }
  // Uniform in [0, n), n > 0. Rejection sampling: stable across platforms,
  // unlike std::uniform_int_distribution.
  uint64_t below(uint64_t n);
  int bit() { return static_cast<int>(next_u64() >> 63); }
  double unit();  // [0,1)
  BitVec bits(size_t width);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  // Independent substream; deterministic in (parent seed, salt).
  Rng fork(uint64_t salt) const;

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace gatelock
