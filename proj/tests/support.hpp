// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gatelock/bits.hpp"
#include "gatelock/netlist.hpp"

namespace gatelock::testing {

// Random combinational benchmark. The first output combines every primary
// input (so wide-cone schemes always find a home); the rest sample the
// deeper half of the random DAG.
inline Netlist gen_random_netlist(uint64_t seed, size_t npi, size_t ngates,
                                  size_t npo) {
  Rng rng(seed);
  Netlist n;
  std::vector<NetId> pool;
  for (size_t i = 0; i < npi; ++i)
    pool.push_back(n.add_net("in" + std::to_string(i), NetRole::Input));

  const GateKind two[] = {GateKind::And,  GateKind::Or,  GateKind::Xor,
                          GateKind::Nand, GateKind::Nor, GateKind::Xnor};

  // Balanced reduction over all PIs: the trunk output depends on everything.
  std::vector<NetId> layer = pool;
  while (layer.size() > 1) {
    std::vector<NetId> next;
    for (size_t i = 0; i + 1 < layer.size(); i += 2) {
      NetId o = n.add_internal("t");
      n.add_gate(two[rng.below(6)], {layer[i], layer[i + 1]}, o);
      pool.push_back(o);
      next.push_back(o);
    }
    if (layer.size() & 1) next.push_back(layer.back());
    layer = std::move(next);
  }
  NetId trunk = layer[0];

  while (n.num_gates() < ngates) {
    NetId o = n.add_internal("g");
    uint64_t pick = rng.below(10);
    auto operand = [&] { return pool[rng.below(pool.size())]; };
    if (pick < 6) {
      NetId a = operand(), b = operand();
      n.add_gate(two[rng.below(6)], {a, b}, o);
    } else if (pick < 8) {
      NetId a = operand(), b = operand(), c = operand();
      n.add_gate(two[rng.below(6)], {a, b, c}, o);
    } else if (pick == 8) {
      n.add_gate(GateKind::Not, {operand()}, o);
    } else {
      NetId a = operand(), b = operand(), s = operand();
      n.add_gate(GateKind::Mux2, {a, b, s}, o);
    }
    pool.push_back(o);
  }

  n.mark_output(trunk);
  size_t placed = 1;
  size_t guard = 0;
  while (placed < npo && ++guard < 100 * npo) {
    NetId cand = pool[pool.size() / 2 + rng.below(pool.size() - pool.size() / 2)];
    if (cand == trunk || n.net(cand).role != NetRole::Internal) continue;
    n.mark_output(cand);
    ++placed;
  }
  n.validate();
  return n;
}

}  // namespace gatelock::testing
