// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gatelock/cipher.hpp"
#include "gatelock/netlist.hpp"

namespace gatelock {

// One LUT placement: `output` is driven by a complete MUX2 tree over
// `inputs` (inputs[0] selects at the root, i.e. is the MSB of the row
// index), with 2^|inputs| fresh key inputs as leaves. `segment` holds the
// leaf values MSB-first — segment bit j is the function value at row
// 2^m-1-j — matching the key-input order in `keys`. The last `pads` inputs
// are don't-cares added to reach a forced width.
struct LutRecord {
  std::string output;
  std::vector<std::string> inputs;
  BitVec segment;
  std::vector<std::string> keys;
  size_t pads = 0;
};

// The pattern triple of a cipher-based lock: Y = Encrypt(spec, K, X).
struct CipherRecord {
  std::string spec_name;
  BitVec x, k, y;
};

// Ground truth emitted by every locking transform. `key` is the secret,
// MSB-first over `key_inputs` (which follows the locked netlist's key-input
// declaration order).
struct LockRecord {
  std::string scheme;
  uint64_t seed = 0;
  std::string key_prefix;
  size_t nok = 0;
  BitVec key;
  std::vector<std::string> key_inputs;

  // XOR/XNOR and cipher-XOR: nets whose drivers were rerouted.
  std::vector<std::string> sites;

  // DFLT schemes (ttlock, compound).
  std::optional<BitVec> protected_pattern;
  std::vector<std::string> protected_inputs;
  std::string protected_output;
  std::string cs1, cs2;

  // Cipher-based schemes.
  std::optional<CipherRecord> cipher;
  // Nets carrying cipher outputs into the rest of the design (the removal
  // attack's ground-truth BCO), in cipher-output order where that survives.
  std::vector<std::string> boundary_nets;

  std::vector<LutRecord> luts;

  std::string to_json(int indent = 2) const;
  static LockRecord from_json_text(const std::string& text);
};

struct LutConfig {
  size_t m = 4;        // maximum LUT input count, 2..6
  size_t count = 0;    // placements; 0 = scheme default
  bool forced = false; // pad every LUT to exactly m inputs
};

// --- Locking transforms. Each consumes the original netlist (which must
// have no key inputs), returns the locked netlist, and fills `record`.
// (seed, inputs) fully determine the result. Every transform self-checks:
// the locked design simulates identically to the original at the secret key
// on a batch of random patterns before returning.

// k gate outputs rerouted through XOR (key bit 0) or XNOR (key bit 1) with a
// fresh key input each. Locations are resampled until the inserted inversion
// is observable at some primary output.
Netlist lock_xor(const Netlist& n, size_t k, uint64_t seed, LockRecord& record);

// `count` gates of arity <= m replaced by complete MUX2-tree LUTs whose leaf
// key inputs hold the gate's truth table. Placements are resampled until
// every truth-table row is live (reachable and observable under the secret
// values of previously placed keys).
Netlist lock_lut(const Netlist& n, const LutConfig& cfg, size_t count,
                 uint64_t seed, LockRecord& record);

// Appends g(X xor K1) AND NOT g(X xor K2) with g = n-input AND over n chosen
// primary inputs and 2n fresh key inputs; the block output is XORed into one
// primary output. Secret: K1 = K2 (a common random value).
Netlist lock_antisat(const Netlist& n, size_t width, uint64_t seed,
                     LockRecord& record);

// SFLL-HD0: picks the primary output with the largest PI cone, takes the
// first `width` cone PIs as protected inputs, XORs in a perturb comparator
// (inputs == pattern) and a restore comparator (inputs == key inputs).
// Secret key = pattern. Empty pattern = sampled from the seed.
Netlist lock_ttlock(const Netlist& n, size_t width,
                    const std::optional<BitVec>& pattern, uint64_t seed,
                    LockRecord& record);

// Prior-art cipher locking: samples (X, K, Y), merges the X-specialized
// unrolled cipher with K as the key inputs, and XORs (y_i = 0) or XNORs
// (y_i = 1) each cipher output into a distinct observable gate output.
// Finishes with simplify.
Netlist lock_cipher_xor(const Netlist& n, const CipherSpec& spec,
                        uint64_t seed, LockRecord& record);

// Plain LUT replacement of exactly the named gate-output nets (no liveness
// policy — callers own the target choice). Appends to `record`'s key list
// and LUT metadata; `n` is modified in place. Empty target list is identity.
void obfuscate_with_luts(Netlist& n, const std::vector<std::string>& targets,
                         const LutConfig& cfg, uint64_t seed,
                         LockRecord& record);

// The compound scheme: sample (X, K, Y); simplify; merge the X-specialized
// cipher (keys = K); DFLT with width = block size, protected pattern Y, and
// the restore comparator referencing the cipher outputs; LUT-obfuscate the
// cipher/restore boundary (cfg.count placements, 0 = cover every boundary
// net once, alternating a plain LUT on the driver with a fused LUT that
// absorbs the boundary net into its comparator). Secret key = K followed by
// the LUT segments.
Netlist lock_compound(const Netlist& n, const CipherSpec& spec,
                      const LutConfig& cfg, uint64_t seed, LockRecord& record);

// nok formula per scheme, used by reports and tests.
size_t expected_nok(const LockRecord& record);

}  // namespace gatelock
