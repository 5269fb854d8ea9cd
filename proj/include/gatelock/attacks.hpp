// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gatelock/bits.hpp"
#include "gatelock/cipher.hpp"
#include "gatelock/netlist.hpp"

namespace gatelock {

// I/O oracle for oracle-guided attacks: either an activated netlist held in
// memory (testing) or a recorded query transcript.
class Oracle {
 public:
  static Oracle from_netlist(const Netlist& activated);
  static Oracle from_transcript(std::vector<std::string> input_names,
                                std::vector<std::string> output_names,
                                std::vector<std::pair<BitVec, BitVec>> pairs);

  const std::vector<std::string>& input_names() const { return in_names_; }
  const std::vector<std::string>& output_names() const { return out_names_; }

  BitVec query(const BitVec& x);
  std::vector<BitVec> query_many(const std::vector<BitVec>& xs);
  size_t query_count() const { return queries_; }

  bool has_netlist() const { return netlist_.has_value(); }
  const Netlist& hidden_netlist() const;  // test plumbing only

  // Every answered query, in order (the transcript of this oracle).
  const std::vector<std::pair<BitVec, BitVec>>& transcript() const {
    return log_;
  }
  // The pairs a transcript oracle was constructed from (empty in netlist mode).
  const std::vector<std::pair<BitVec, BitVec>>& transcript_pairs() const {
    return pairs_;
  }

 private:
  Oracle() = default;
  std::optional<Netlist> netlist_;
  std::vector<std::string> in_names_, out_names_;
  std::vector<std::pair<BitVec, BitVec>> pairs_;  // transcript mode
  std::vector<std::pair<BitVec, BitVec>> log_;
  size_t queries_ = 0;
};

struct AttackBudget {
  double max_seconds = 0;        // 0 = unlimited
  int64_t max_conflicts = -1;    // cumulative across solver calls; -1 = unlimited
  int64_t max_iterations = -1;   // -1 = unlimited
  uint64_t seed = 1;             // probe/validation randomness
};

enum class AttackOutcome { KeyRecovered, DesignExtracted, NoSolution, NotApplicable };
const char* to_string(AttackOutcome o);

struct AttackReport {
  std::string attack;
  AttackOutcome outcome = AttackOutcome::NoSolution;
  std::optional<BitVec> key_bits;
  std::vector<std::string> key_inputs;
  std::vector<BitVec> keys;  // brute force: every surviving key
  int64_t iterations = 0;
  int64_t oracle_queries = 0;
  int64_t conflicts = 0;
  double wall_seconds = 0;  // serialized only on request
  std::vector<std::string> bco;
  std::optional<BitVec> lck_bits;
  std::vector<std::pair<BitVec, BitVec>> dips;
  bool dips_truncated = false;
  double probe_agreement = -1;  // fraction of validation probes matched
  std::string notes;
  std::string extracted_path;
  std::optional<Netlist> extracted;  // removal attack result; not serialized

  std::string to_json(bool include_timing = false, int indent = 2) const;
  static AttackReport from_json_text(const std::string& text);
};

// Candidate block-cipher output scan: gate-output nets whose support is
// entirely key inputs and that feed logic mixing in primary inputs.
struct CipherOutputScan {
  std::vector<std::string> candidates;  // net-id order
  std::vector<NetId> candidate_ids;
  bool valid = false;
  std::string reason;  // why the verdict failed, empty when valid
};
CipherOutputScan find_cipher_outputs(const Netlist& locked);

// Oracle-guided key recovery: distinguishing-input refinement over a
// two-copy formula until no distinguishing input remains.
AttackReport sat_attack(const Netlist& locked, Oracle& oracle,
                        const AttackBudget& budget = {});

// Cut-and-recover: locate the cipher-output boundary, replace it with fresh
// key inputs, recover those with the inner key-recovery attack, then fold
// everything constant away.
AttackReport removal_attack(const Netlist& locked, Oracle& oracle,
                            const AttackBudget& budget = {});

// Key recovery without an oracle: constrain the recovered boundary cones to
// the constants found by the removal step and solve for the cipher key.
AttackReport algebraic_attack(const Netlist& locked,
                              const AttackReport& removal,
                              const std::optional<CipherSpec>& hint = {},
                              const AttackBudget& budget = {});

// Exhaustive search over the key space (refuses > 24 key bits). Returns
// every key consistent with the probes, cross-checked against the oracle.
AttackReport brute_force_key_search(const Netlist& locked, Oracle& oracle,
                                    const AttackBudget& budget = {});

}  // namespace gatelock
