// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "gatelock/netlist.hpp"

namespace gatelock {

enum class CipherFamily { Simon, Present, Ascon };

const char* to_string(CipherFamily f);

// Block sizes a lock can carry; used when scanning for cipher-shaped cones.
inline constexpr int kSupportedBlockBits[] = {32, 48, 64, 96, 128};
bool is_supported_block_size(int bits);

struct CipherSpec {
  CipherFamily family;
  int block_bits = 0;
  int key_bits = 0;
  int rounds = 0;

  // Full-strength parameter rows. Returns nullopt for unknown (family,
  // block, key) combinations.
  static std::optional<CipherSpec> lookup(CipherFamily f, int block_bits,
                                          int key_bits);
  // "simon-64-96-42" = family-block-key-rounds. A round count different
  // from the full-strength row yields a reduced/extended variant.
  static std::optional<CipherSpec> parse_name(std::string_view name);
  static std::vector<CipherSpec> all_full_strength();

  CipherSpec with_rounds(int r) const;
  bool is_full_strength() const;
  std::string name() const;
  bool operator==(const CipherSpec&) const = default;
};

// Fixed construction constants of the 12-round permutation variant: the
// 320-bit state is initialized as iv || key || nonce.
struct AsconConstants {
  uint64_t iv = 0x00001000808c0001ULL;
  std::array<uint64_t, 2> nonce = {0, 0};
};
const AsconConstants& ascon_constants();

// Software evaluation. key is key_bits wide, block is block_bits wide,
// both MSB-first.
BitVec reference_encrypt(const CipherSpec& spec, const BitVec& key,
                         const BitVec& block);

// Combinational unrolled circuit with primary inputs x[bs-1..0] (plaintext,
// MSB-first), k[kl-1..0] (key) and outputs y[bs-1..0] (ciphertext). Key bits
// enter as ordinary inputs; locking decides later which nets become key
// inputs.
Netlist build_unrolled_circuit(const CipherSpec& spec);

// Binds the x[...] inputs of an unrolled cipher circuit to a constant block
// and folds, leaving a key-to-ciphertext circuit.
Netlist specialize_plaintext(const Netlist& cipher, const BitVec& x);

struct PatternTriple {
  BitVec x;  // protected plaintext block
  BitVec k;  // cipher key
  BitVec y;  // y = E_k(x)
};

PatternTriple sample_pattern_triple(const CipherSpec& spec, uint64_t seed);

// KAT fixture entry: one per line, `family block key-bits rounds key pt ct`
// in hex. Lines starting with '#' are comments.
struct KatVector {
  CipherSpec spec;
  BitVec key, plaintext, ciphertext;
};
std::vector<KatVector> parse_kat_file(std::string_view text);

// Tables used by the references; exposed for cross-checking in tests.
namespace cipher_detail {
extern const uint8_t kPresentSbox[16];
extern const uint8_t kAsconSbox[32];
uint8_t present_perm(uint8_t bit);           // 64-bit pLayer position map
uint8_t ascon_sbox_formula(uint8_t x);       // bitsliced expressions, x0 = MSB
const char* simon_z_sequence(int j);         // 62-period constant streams
}  // namespace cipher_detail

}  // namespace gatelock
