// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gatelock/bits.hpp"

namespace gatelock {

enum class GateKind : uint8_t {
  And,
  Nand,
  Or,
  Nor,
  Xor,
  Xnor,
  Not,
  Buf,
  Mux2,  // inputs: d0, d1, select (select last)
  Const0,
  Const1,
};

const char* to_string(GateKind k);
std::optional<GateKind> gate_kind_from_string(std::string_view s);
// Minimum/maximum input counts. And/Or/Nand/Nor/Xor/Xnor are n-ary (n >= 2).
bool arity_ok(GateKind k, size_t n);
bool is_commutative(GateKind k);

// Scalar gate semantics; `in` holds 0/1 values.
int eval_gate(GateKind k, const uint8_t* in, size_t n);
// Bitsliced semantics: 64 independent patterns per word.
uint64_t eval_gate_word(GateKind k, const uint64_t* in, size_t n);

enum class NetRole : uint8_t { Input, Output, Key, Internal };

using NetId = uint32_t;
inline constexpr NetId kNoNet = 0xffffffffu;

struct Net {
  std::string name;
  NetRole role = NetRole::Internal;
};

struct Gate {
  GateKind kind;
  std::vector<NetId> inputs;
  NetId output = kNoNet;
};

// Combinational gate-level netlist. Nets are identified by dense ids; names
// are unique. Every net has at most one driver. Primary inputs, key inputs
// and primary outputs keep their declaration order — key material and
// patterns are always interpreted MSB-first against those lists.
class Netlist {
 public:
  std::vector<Net> nets;
  std::vector<Gate> gates;
  std::vector<NetId> inputs;   // primary inputs, declaration order
  std::vector<NetId> keys;     // key inputs, declaration order
  std::vector<NetId> outputs;  // primary outputs, declaration order

  NetId add_net(std::string name, NetRole role = NetRole::Internal);
  // Fresh internal net with a name derived from `base` (uniquified).
  NetId add_internal(const std::string& base);
  size_t add_gate(GateKind kind, std::vector<NetId> in, NetId out);

  const Net& net(NetId id) const { return nets[id]; }
  NetId find(std::string_view name) const;  // kNoNet if absent
  bool has(std::string_view name) const { return find(name) != kNoNet; }
  void mark_output(NetId id);
  void rename_net(NetId id, std::string name);

  size_t num_nets() const { return nets.size(); }
  size_t num_gates() const { return gates.size(); }

  // Sources = primary inputs followed by key inputs.
  std::vector<NetId> sources() const;

  // gate index driving each net, or -1.
  std::vector<int32_t> driver_map() const;
  // consumers[n] = gate indices reading net n, ascending.
  std::vector<std::vector<uint32_t>> fanout_map() const;

  // Deterministic topological order of gate indices (Kahn, stable).
  // Throws Error on a combinational cycle.
  std::vector<uint32_t> topo_order() const;

  // Checks structural invariants: unique names, single drivers, arities,
  // role/list consistency, driven outputs, acyclicity. Throws Error.
  void validate() const;

 private:
  std::unordered_map<std::string, NetId> by_name_;
};

// Partial mapping from nets of one netlist to bit values.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(size_t num_nets) : v_(num_nets, -1) {}
  explicit Assignment(const Netlist& n) : v_(n.num_nets(), -1) {}

  void set(NetId id, int value) { v_[id] = static_cast<int8_t>(value & 1); }
  void unset(NetId id) { v_[id] = -1; }
  bool has(NetId id) const { return id < v_.size() && v_[id] >= 0; }
  int get(NetId id) const { return v_[id]; }
  size_t size() const { return v_.size(); }

  // Bind `pattern` MSB-first across `nets`.
  void bind(std::span<const NetId> nets, const BitVec& pattern);
  BitVec extract(std::span<const NetId> nets) const;

 private:
  std::vector<int8_t> v_;
};

// Assignment over the netlist's primary inputs (and key inputs when `key`
// is provided). Pattern widths must match the list sizes.
Assignment bind_inputs(const Netlist& n, const BitVec& x,
                       const std::optional<BitVec>& key = std::nullopt);

}  // namespace gatelock
