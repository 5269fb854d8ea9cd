// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <string>

#include "gatelock/netlist.hpp"

namespace gatelock {

// Transitive fan-in of a net.
struct Cone {
  std::vector<NetId> support;    // source nets reached, ascending id
  std::vector<uint32_t> gates;   // gate indices in the cone, ascending
};

Cone logic_cone(const Netlist& n, NetId root);

// Standalone netlist of the fan-in of `roots`. Reached sources keep their
// names and roles; the roots become the primary outputs (in `roots` order,
// renamed only if a root is itself a source). Root nets that are sources are
// rejected.
Netlist extract_cones(const Netlist& n, std::span<const NetId> roots);

// Per-net support over sources() = inputs ++ keys, as packed bitsets.
class SupportMap {
 public:
  SupportMap(const Netlist& n);

  size_t num_sources() const { return sources_.size(); }
  const std::vector<NetId>& sources() const { return sources_; }
  bool depends_on(NetId net, size_t source_index) const {
    return (bits_[net * words_ + source_index / 64] >>
            (source_index % 64)) & 1;
  }
  size_t support_size(NetId net) const;
  bool support_empty(NetId net) const;
  // True when every source in the support lies in [first, last).
  bool support_within(NetId net, size_t first, size_t last) const;
  std::vector<NetId> support(NetId net) const;
  // OR of the supports of several nets, as source indices.
  std::vector<size_t> union_support(std::span<const NetId> nets) const;

 private:
  std::vector<NetId> sources_;
  size_t words_;
  std::vector<uint64_t> bits_;
};

struct NetlistStats {
  size_t num_inputs = 0;
  size_t num_keys = 0;
  size_t num_outputs = 0;
  size_t num_gates = 0;
  size_t num_nets = 0;
  size_t depth = 0;  // longest source-to-output gate path
  std::map<GateKind, size_t> by_kind;
};

NetlistStats stats(const Netlist& n);
std::string format_stats(const NetlistStats& s);

// Same graph shape under name alignment: identical source/output name lists
// (in order) and, per driven net name, the same gate kind and input names
// (order-sensitive only for MUX).
bool structurally_equal(const Netlist& a, const Netlist& b);

}  // namespace gatelock
