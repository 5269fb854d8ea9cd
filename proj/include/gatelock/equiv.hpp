// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "gatelock/cnf.hpp"
#include "gatelock/netlist.hpp"

namespace gatelock {

enum class EquivVerdict { Equivalent, Inequivalent, Unknown };

const char* to_string(EquivVerdict v);

struct EquivOptions {
  // Bindings for key inputs of either side; required whenever a side has
  // key inputs that should not be treated as free variables.
  std::optional<BitVec> key_a, key_b;
  bool bind_keys = true;  // false: leave keys free (exists-a-differing-key query)
  sat::SolveLimits limits;
};

struct EquivResult {
  EquivVerdict verdict = EquivVerdict::Unknown;
  // Valid when Inequivalent: a simulation-confirmed differing input pattern
  // (over a's primary input order) and the key values in effect.
  BitVec counterexample;
  std::optional<BitVec> key_a, key_b;
  int64_t conflicts = 0;
};

// SAT-based combinational equivalence on the miter. Primary inputs and
// outputs are matched by name. Counterexamples are re-simulated on both
// netlists before being reported; a mismatch raises an Error.
EquivResult check_equivalence(const Netlist& a, const Netlist& b,
                              const EquivOptions& opt = {});

}  // namespace gatelock
