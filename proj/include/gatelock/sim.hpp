// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "gatelock/netlist.hpp"

namespace gatelock {

// Evaluates the netlist under `in` (all sources must be assigned).
// Returns values for every net.
Assignment simulate_full(const Netlist& n, const Assignment& in);
// Primary-output pattern only, MSB-first over n.outputs.
BitVec simulate(const Netlist& n, const Assignment& in);
BitVec simulate(const Netlist& n, const BitVec& x,
                const std::optional<BitVec>& key = std::nullopt);

// Batch of patterns, one row per net of interest, 64 patterns packed per
// uint64_t word (pattern p lives in bit p%64 of word p/64).
class BitTable {
 public:
  BitTable() = default;
  BitTable(size_t rows, size_t patterns)
      : patterns_(patterns), words_((patterns + 63) / 64),
        data_(rows * words_, 0) {}

  size_t rows() const { return words_ ? data_.size() / words_ : 0; }
  size_t patterns() const { return patterns_; }
  size_t words() const { return words_; }

  uint64_t* row(size_t r) { return data_.data() + r * words_; }
  const uint64_t* row(size_t r) const { return data_.data() + r * words_; }
  int get(size_t r, size_t p) const {
    return static_cast<int>((row(r)[p / 64] >> (p % 64)) & 1);
  }
  void set(size_t r, size_t p, int v) {
    uint64_t m = 1ULL << (p % 64);
    if (v) row(r)[p / 64] |= m; else row(r)[p / 64] &= ~m;
  }
  // Column `p` across all rows, MSB-first = row 0 first.
  BitVec column(size_t p) const;
  void set_column(size_t p, const BitVec& v);

 private:
  size_t patterns_ = 0;
  size_t words_ = 0;
  std::vector<uint64_t> data_;
};

// Batch simulation: `in` has one row per net in `sources` (in order);
// the result has one row per net in `outs`. All three variants compute the
// same function:
//   *_scalar   — per-pattern scalar evaluation (reference implementation)
//   *_serial   — bitsliced, single thread
//   (default)  — bitsliced, OpenMP-parallel across 64-pattern words
BitTable simulate_batch_scalar(const Netlist& n, std::span<const NetId> sources,
                               const BitTable& in, std::span<const NetId> outs);
BitTable simulate_batch_serial(const Netlist& n, std::span<const NetId> sources,
                               const BitTable& in, std::span<const NetId> outs);
BitTable simulate_batch(const Netlist& n, std::span<const NetId> sources,
                        const BitTable& in, std::span<const NetId> outs);

// Rows laid out for n.sources(): random bits for primary inputs, constant
// `key` bits for key inputs (when provided).
BitTable random_source_table(const Netlist& n, size_t patterns, Rng& rng,
                             const std::optional<BitVec>& key = std::nullopt);

// Overwrite rows [first_row, first_row+bits.width()) with constant bits.
void set_constant_rows(BitTable& t, size_t first_row, const BitVec& bits);

}  // namespace gatelock
