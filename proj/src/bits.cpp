// SPDX-License-Identifier: Apache-2.0
#include "gatelock/bits.hpp"

#include "gatelock/errors.hpp"

namespace gatelock {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitVec BitVec::from_bits(std::string_view s) {
  BitVec v(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '0' || s[i] == '1')
      v.set(i, s[i] - '0');
    else
      throw ParseError("invalid bit character '" + std::string(1, s[i]) +
                       "' in pattern");
  }
  return v;
}

BitVec BitVec::from_hex(std::string_view s, size_t width) {
  if (s.substr(0, 2) == "0x" || s.substr(0, 2) == "0X") s.remove_prefix(2);
  if (s.empty()) throw ParseError("empty hex pattern");
  if (4 * s.size() < width || 4 * s.size() >= width + 4)
    throw ParseError("hex pattern '" + std::string(s) + "' does not fit width " +
                     std::to_string(width));
  BitVec v(width);
  size_t pad = 4 * s.size() - width;  // high bits of the first digit
  for (size_t d = 0; d < s.size(); ++d) {
    int x = hex_digit(s[d]);
    if (x < 0)
      throw ParseError("invalid hex character '" + std::string(1, s[d]) + "'");
    for (int b = 3; b >= 0; --b) {
      size_t pos = 4 * d + (3 - b);
      int bit = (x >> b) & 1;
      if (pos < pad) {
        if (bit) throw ParseError("hex pattern overflows width");
      } else {
        v.set(pos - pad, bit);
      }
    }
  }
  return v;
}

BitVec BitVec::from_u64(uint64_t x, size_t width) {
  BitVec v(width);
  for (size_t i = 0; i < width && i < 64; ++i)
    v.set(width - 1 - i, static_cast<int>((x >> i) & 1));
  if (width < 64 && width > 0 && (x >> width) != 0)
    throw Error("value does not fit in " + std::to_string(width) + " bits");
  return v;
}

BitVec BitVec::parse(std::string_view s, size_t expect_width) {
  BitVec v;
  if (s.substr(0, 2) == "0x" || s.substr(0, 2) == "0X") {
    if (expect_width == 0) expect_width = 4 * (s.size() - 2);
    v = from_hex(s, expect_width);
  } else {
    if (s.substr(0, 2) == "0b" || s.substr(0, 2) == "0B") s.remove_prefix(2);
    v = from_bits(s);
  }
  if (expect_width != 0 && v.width() != expect_width)
    throw ParseError("pattern '" + std::string(s) + "' has width " +
                     std::to_string(v.width()) + ", expected " +
                     std::to_string(expect_width));
  return v;
}

std::string BitVec::to_bits() const {
  std::string s(width(), '0');
  for (size_t i = 0; i < width(); ++i) s[i] = static_cast<char>('0' + get(i));
  return s;
}

std::string BitVec::to_hex() const {
  static const char* digits = "0123456789abcdef";
  size_t n = (width() + 3) / 4;
  std::string s(n, '0');
  size_t pad = 4 * n - width();
  for (size_t i = 0; i < width(); ++i) {
    size_t pos = i + pad;
    if (get(i)) s[pos / 4] = digits[hex_digit(s[pos / 4]) | (8 >> (pos % 4))];
  }
  return s;
}

uint64_t BitVec::to_u64() const {
  if (width() > 64) throw Error("pattern wider than 64 bits");
  uint64_t x = 0;
  for (size_t i = 0; i < width(); ++i) x = (x << 1) | get(i);
  return x;
}

BitVec BitVec::slice(size_t pos, size_t len) const {
  if (pos + len > width()) throw Error("slice out of range");
  BitVec v(len);
  for (size_t i = 0; i < len; ++i) v.set(i, get(pos + i));
  return v;
}

BitVec BitVec::concat(const BitVec& hi, const BitVec& lo) {
  BitVec v(hi.width() + lo.width());
  for (size_t i = 0; i < hi.width(); ++i) v.set(i, hi.get(i));
  for (size_t i = 0; i < lo.width(); ++i) v.set(hi.width() + i, lo.get(i));
  return v;
}

size_t BitVec::count_ones() const {
  size_t n = 0;
  for (size_t i = 0; i < width(); ++i) n += get(i);
  return n;
}

uint64_t Rng::below(uint64_t n) {
  if (n == 0) throw Error("Rng::below(0)");
  uint64_t lim = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= lim);
  return v % n;
}

double Rng::unit() { return (next_u64() >> 11) * 0x1.0p-53; }

BitVec Rng::bits(size_t width) {
  BitVec v(width);
  for (size_t i = 0; i < width; ++i) v.set(i, bit());
  return v;
}

Rng Rng::fork(uint64_t salt) const {
  // splitmix64 over (seed, salt) so substreams never collide with the parent.
  uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return Rng(z ^ (z >> 31));
}

}  // namespace gatelock
