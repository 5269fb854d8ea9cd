// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gatelock/netlist.hpp"

namespace gatelock {

// Binds the given source nets (primary or key inputs only) to constants and
// folds the result through the whole netlist. Bound sources disappear from
// the interface; dangling logic is removed. Primary outputs keep their names
// (a constant output ends in a CONST gate, a pass-through in a BUF).
Netlist propagate_constants(const Netlist& n, const Assignment& fixed);

// Fixed-point cleanup: constant folding, double-negation elimination, BUF
// collapsing, duplicate-input and shared-structure deduplication, dead-logic
// removal. Functional behavior, interface names and order are preserved; key
// inputs are never merged or removed.
Netlist simplify(const Netlist& n);

// Dead-logic removal only: drops gates and internal nets no primary output
// depends on. Sources and all surviving names are kept as-is.
Netlist strip_dead(const Netlist& n, bool* changed = nullptr);

}  // namespace gatelock
