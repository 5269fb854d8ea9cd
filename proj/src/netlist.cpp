// SPDX-License-Identifier: Apache-2.0
#include "gatelock/netlist.hpp"

#include <algorithm>
#include <cctype>

#include "gatelock/errors.hpp"

namespace gatelock {

const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::And: return "AND";
    case GateKind::Nand: return "NAND";
    case GateKind::Or: return "OR";
    case GateKind::Nor: return "NOR";
    case GateKind::Xor: return "XOR";
    case GateKind::Xnor: return "XNOR";
    case GateKind::Not: return "NOT";
    case GateKind::Buf: return "BUF";
    case GateKind::Mux2: return "MUX";
    case GateKind::Const0: return "CONST0";
    case GateKind::Const1: return "CONST1";
  }
  return "?";
}

std::optional<GateKind> gate_kind_from_string(std::string_view s) {
  std::string u(s);
  for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "AND") return GateKind::And;
  if (u == "NAND") return GateKind::Nand;
  if (u == "OR") return GateKind::Or;
  if (u == "NOR") return GateKind::Nor;
  if (u == "XOR") return GateKind::Xor;
  if (u == "XNOR") return GateKind::Xnor;
  if (u == "NOT" || u == "INV") return GateKind::Not;
  if (u == "BUF" || u == "BUFF") return GateKind::Buf;
  if (u == "MUX" || u == "MUX2") return GateKind::Mux2;
  if (u == "CONST0") return GateKind::Const0;
  if (u == "CONST1") return GateKind::Const1;
  return std::nullopt;
}

bool arity_ok(GateKind k, size_t n) {
  switch (k) {
    case GateKind::And:
    case GateKind::Nand:
    case GateKind::Or:
    case GateKind::Nor:
    case GateKind::Xor:
    case GateKind::Xnor: return n >= 2;
    case GateKind::Not:
    case GateKind::Buf: return n == 1;
    case GateKind::Mux2: return n == 3;
    case GateKind::Const0:
    case GateKind::Const1: return n == 0;
  }
  return false;
}

bool is_commutative(GateKind k) {
  switch (k) {
    case GateKind::And:
    case GateKind::Nand:
    case GateKind::Or:
    case GateKind::Nor:
    case GateKind::Xor:
    case GateKind::Xnor: return true;
    default: return false;
  }
}

int eval_gate(GateKind k, const uint8_t* in, size_t n) {
  switch (k) {
    case GateKind::And:
    case GateKind::Nand: {
      int v = 1;
      for (size_t i = 0; i < n; ++i) v &= in[i];
      return k == GateKind::And ? v : v ^ 1;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      int v = 0;
      for (size_t i = 0; i < n; ++i) v |= in[i];
      return k == GateKind::Or ? v : v ^ 1;
    }
    case GateKind::Xor:
    case GateKind::Xnor: {
      int v = 0;
      for (size_t i = 0; i < n; ++i) v ^= in[i];
      return k == GateKind::Xor ? v : v ^ 1;
    }
    case GateKind::Not: return in[0] ^ 1;
    case GateKind::Buf: return in[0];
    case GateKind::Mux2: return in[2] ? in[1] : in[0];
    case GateKind::Const0: return 0;
    case GateKind::Const1: return 1;
  }
  return 0;
}

uint64_t eval_gate_word(GateKind k, const uint64_t* in, size_t n) {
  switch (k) {
    case GateKind::And:
    case GateKind::Nand: {
      uint64_t v = ~0ULL;
      for (size_t i = 0; i < n; ++i) v &= in[i];
      return k == GateKind::And ? v : ~v;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      uint64_t v = 0;
      for (size_t i = 0; i < n; ++i) v |= in[i];
      return k == GateKind::Or ? v : ~v;
    }
    case GateKind::Xor:
    case GateKind::Xnor: {
      uint64_t v = 0;
      for (size_t i = 0; i < n; ++i) v ^= in[i];
      return k == GateKind::Xor ? v : ~v;
    }
    case GateKind::Not: return ~in[0];
    case GateKind::Buf: return in[0];
    case GateKind::Mux2: return (in[2] & in[1]) | (~in[2] & in[0]);
    case GateKind::Const0: return 0;
    case GateKind::Const1: return ~0ULL;
  }
  return 0;
}

NetId Netlist::add_net(std::string name, NetRole role) {
  if (name.empty()) throw Error("net name must not be empty");
  auto [it, fresh] = by_name_.emplace(name, static_cast<NetId>(nets.size()));
  if (!fresh) throw Error("duplicate net name '" + name + "'");
  NetId id = it->second;
  nets.push_back(Net{std::move(name), role});
  switch (role) {
    case NetRole::Input: inputs.push_back(id); break;
    case NetRole::Key: keys.push_back(id); break;
    case NetRole::Output: outputs.push_back(id); break;
    case NetRole::Internal: break;
  }
  return id;
}

NetId Netlist::add_internal(const std::string& base) {
  std::string name = base;
  while (by_name_.count(name)) name += "_";
  return add_net(std::move(name), NetRole::Internal);
}

size_t Netlist::add_gate(GateKind kind, std::vector<NetId> in, NetId out) {
  if (!arity_ok(kind, in.size()))
    throw Error(std::string(to_string(kind)) + " gate with " +
                std::to_string(in.size()) + " inputs");
  gates.push_back(Gate{kind, std::move(in), out});
  return gates.size() - 1;
}

NetId Netlist::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? kNoNet : it->second;
}

void Netlist::mark_output(NetId id) {
  Net& n = nets[id];
  if (n.role == NetRole::Output) return;
  if (n.role != NetRole::Internal)
    throw Error("net '" + n.name + "' cannot be both a source and an output");
  n.role = NetRole::Output;
  outputs.push_back(id);
}

void Netlist::rename_net(NetId id, std::string name) {
  if (name.empty()) throw Error("net name must not be empty");
  if (nets[id].name == name) return;
  if (by_name_.count(name))
    throw Error("net name '" + name + "' already in use");
  by_name_.erase(nets[id].name);
  nets[id].name = name;
  by_name_.emplace(std::move(name), id);
}

std::vector<NetId> Netlist::sources() const {
  std::vector<NetId> s = inputs;
  s.insert(s.end(), keys.begin(), keys.end());
  return s;
}

std::vector<int32_t> Netlist::driver_map() const {
  std::vector<int32_t> d(nets.size(), -1);
  for (size_t g = 0; g < gates.size(); ++g) {
    NetId o = gates[g].output;
    if (d[o] >= 0)
      throw Error("net '" + nets[o].name + "' has multiple drivers");
    d[o] = static_cast<int32_t>(g);
  }
  return d;
}

std::vector<std::vector<uint32_t>> Netlist::fanout_map() const {
  std::vector<std::vector<uint32_t>> f(nets.size());
  for (size_t g = 0; g < gates.size(); ++g)
    for (NetId in : gates[g].inputs) f[in].push_back(static_cast<uint32_t>(g));
  return f;
}

std::vector<uint32_t> Netlist::topo_order() const {
  auto drv = driver_map();
  std::vector<uint32_t> pending(gates.size(), 0);
  for (size_t g = 0; g < gates.size(); ++g)
    for (NetId in : gates[g].inputs)
      if (drv[in] >= 0) ++pending[g];

  std::vector<uint32_t> order;
  order.reserve(gates.size());
  std::vector<uint32_t> queue;
  for (size_t g = 0; g < gates.size(); ++g)
    if (pending[g] == 0) queue.push_back(static_cast<uint32_t>(g));

  auto fan = fanout_map();
  for (size_t head = 0; head < queue.size(); ++head) {
    uint32_t g = queue[head];
    order.push_back(g);
    for (uint32_t h : fan[gates[g].output])
      if (--pending[h] == 0) queue.push_back(h);
  }
  if (order.size() != gates.size()) {
    for (size_t g = 0; g < gates.size(); ++g)
      if (pending[g] > 0)
        throw Error("combinational cycle through net '" +
                    nets[gates[g].output].name + "'");
  }
  return order;
}

void Netlist::validate() const {
  auto drv = driver_map();  // raises on multiple drivers
  size_t n_in = 0, n_key = 0, n_out = 0;
  for (size_t i = 0; i < nets.size(); ++i) {
    const Net& n = nets[i];
    NetId found = find(n.name);
    if (found != static_cast<NetId>(i))
      throw Error("name index out of sync for '" + n.name + "'");
    switch (n.role) {
      case NetRole::Input:
      case NetRole::Key:
        if (drv[i] >= 0)
          throw Error("source net '" + n.name + "' has a driver");
        (n.role == NetRole::Input ? n_in : n_key)++;
        break;
      case NetRole::Output:
        if (drv[i] < 0)
          throw Error("output net '" + n.name + "' is undriven");
        n_out++;
        break;
      case NetRole::Internal: break;
    }
  }
  if (n_in != inputs.size() || n_key != keys.size() || n_out != outputs.size())
    throw Error("role lists out of sync");
  for (NetId id : inputs)
    if (nets[id].role != NetRole::Input) throw Error("inputs list corrupt");
  for (NetId id : keys)
    if (nets[id].role != NetRole::Key) throw Error("keys list corrupt");
  for (NetId id : outputs)
    if (nets[id].role != NetRole::Output) throw Error("outputs list corrupt");
  for (const Gate& g : gates) {
    if (!arity_ok(g.kind, g.inputs.size()))
      throw Error("bad arity on gate driving '" + nets[g.output].name + "'");
    if (g.output >= nets.size()) throw Error("gate output out of range");
    for (NetId in : g.inputs)
      if (in >= nets.size()) throw Error("gate input out of range");
  }
  topo_order();  // raises on cycles
}

void Assignment::bind(std::span<const NetId> nets, const BitVec& pattern) {
  if (nets.size() != pattern.width())
    throw Error("pattern width " + std::to_string(pattern.width()) +
                " does not match net count " + std::to_string(nets.size()));
  for (size_t i = 0; i < nets.size(); ++i) set(nets[i], pattern.get(i));
}

BitVec Assignment::extract(std::span<const NetId> nets) const {
  BitVec v(nets.size());
  for (size_t i = 0; i < nets.size(); ++i) {
    if (!has(nets[i])) throw Error("assignment missing a requested net");
    v.set(i, get(nets[i]));
  }
  return v;
}

Assignment bind_inputs(const Netlist& n, const BitVec& x,
                       const std::optional<BitVec>& key) {
  Assignment a(n);
  a.bind(n.inputs, x);
  if (key) a.bind(n.keys, *key);
  return a;
}

}  // namespace gatelock
