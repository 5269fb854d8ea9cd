// SPDX-License-Identifier: Apache-2.0
#include "gatelock/analyze.hpp"

#include <algorithm>
#include <sstream>

#include "gatelock/errors.hpp"

namespace gatelock {

Cone logic_cone(const Netlist& n, NetId root) {
  auto drv = n.driver_map();
  Cone c;
  std::vector<char> seen(n.num_nets(), 0);
  std::vector<NetId> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    NetId net = stack.back();
    stack.pop_back();
    int32_t g = drv[net];
    if (g < 0) {
      if (n.net(net).role == NetRole::Input || n.net(net).role == NetRole::Key)
        c.support.push_back(net);
      continue;  // undriven internal nets contribute nothing
    }
    c.gates.push_back(static_cast<uint32_t>(g));
    for (NetId in : n.gates[g].inputs)
      if (!seen[in]) {
        seen[in] = 1;
        stack.push_back(in);
      }
  }
  std::sort(c.support.begin(), c.support.end());
  std::sort(c.gates.begin(), c.gates.end());
  return c;
}

Netlist extract_cones(const Netlist& n, std::span<const NetId> roots) {
  auto drv = n.driver_map();
  std::vector<char> keep_net(n.num_nets(), 0);
  std::vector<char> keep_gate(n.num_gates(), 0);
  for (NetId r : roots) {
    if (drv[r] < 0)
      throw Error("cone root '" + n.net(r).name + "' is not gate-driven");
    std::vector<NetId> stack{r};
    keep_net[r] = 1;
    while (!stack.empty()) {
      NetId net = stack.back();
      stack.pop_back();
      int32_t g = drv[net];
      if (g < 0) continue;
      keep_gate[g] = 1;
      for (NetId in : n.gates[g].inputs)
        if (!keep_net[in]) {
          keep_net[in] = 1;
          stack.push_back(in);
        }
    }
  }
  std::vector<char> is_root(n.num_nets(), 0);
  for (NetId r : roots) is_root[r] = 1;

  Netlist out;
  std::vector<NetId> map(n.num_nets(), kNoNet);
  // Sources and internal nets first, preserving id order, then roles.
  for (NetId id = 0; id < n.num_nets(); ++id) {
    if (!keep_net[id]) continue;
    const Net& net = n.net(id);
    NetRole role = NetRole::Internal;
    if (drv[id] < 0) {
      role = net.role == NetRole::Key ? NetRole::Key : NetRole::Input;
    }
    map[id] = out.add_net(net.name, role);
  }
  for (uint32_t g = 0; g < n.num_gates(); ++g) {
    if (!keep_gate[g]) continue;
    const Gate& gate = n.gates[g];
    std::vector<NetId> in;
    in.reserve(gate.inputs.size());
    for (NetId i : gate.inputs) in.push_back(map[i]);
    out.add_gate(gate.kind, std::move(in), map[gate.output]);
  }
  for (NetId r : roots) out.mark_output(map[r]);
  out.validate();
  return out;
}

SupportMap::SupportMap(const Netlist& n) : sources_(n.sources()) {
  words_ = (sources_.size() + 63) / 64;
  if (words_ == 0) words_ = 1;
  bits_.assign(n.num_nets() * words_, 0);
  for (size_t i = 0; i < sources_.size(); ++i)
    bits_[sources_[i] * words_ + i / 64] |= 1ULL << (i % 64);
  for (uint32_t g : n.topo_order()) {
    const Gate& gate = n.gates[g];
    uint64_t* out = &bits_[gate.output * words_];
    for (NetId in : gate.inputs) {
      const uint64_t* src = &bits_[in * words_];
      for (size_t w = 0; w < words_; ++w) out[w] |= src[w];
    }
  }
}

size_t SupportMap::support_size(NetId net) const {
  size_t c = 0;
  for (size_t w = 0; w < words_; ++w)
    c += static_cast<size_t>(__builtin_popcountll(bits_[net * words_ + w]));
  return c;
}

bool SupportMap::support_empty(NetId net) const {
  for (size_t w = 0; w < words_; ++w)
    if (bits_[net * words_ + w]) return false;
  return true;
}

bool SupportMap::support_within(NetId net, size_t first, size_t last) const {
  for (size_t i = 0; i < sources_.size(); ++i)
    if (depends_on(net, i) && (i < first || i >= last)) return false;
  return true;
}

std::vector<NetId> SupportMap::support(NetId net) const {
  std::vector<NetId> s;
  for (size_t i = 0; i < sources_.size(); ++i)
    if (depends_on(net, i)) s.push_back(sources_[i]);
  return s;
}

std::vector<size_t> SupportMap::union_support(std::span<const NetId> nets) const {
  std::vector<uint64_t> acc(words_, 0);
  for (NetId n : nets)
    for (size_t w = 0; w < words_; ++w) acc[w] |= bits_[n * words_ + w];
  std::vector<size_t> out;
  for (size_t i = 0; i < sources_.size(); ++i)
    if ((acc[i / 64] >> (i % 64)) & 1) out.push_back(i);
  return out;
}

NetlistStats stats(const Netlist& n) {
  NetlistStats s;
  s.num_inputs = n.inputs.size();
  s.num_keys = n.keys.size();
  s.num_outputs = n.outputs.size();
  s.num_gates = n.num_gates();
  s.num_nets = n.num_nets();
  for (const Gate& g : n.gates) s.by_kind[g.kind]++;
  std::vector<size_t> depth(n.num_nets(), 0);
  for (uint32_t g : n.topo_order()) {
    const Gate& gate = n.gates[g];
    size_t d = 0;
    for (NetId in : gate.inputs) d = std::max(d, depth[in]);
    depth[gate.output] = d + 1;
  }
  for (NetId o : n.outputs) s.depth = std::max(s.depth, depth[o]);
  return s;
}

std::string format_stats(const NetlistStats& s) {
  std::ostringstream os;
  os << "inputs " << s.num_inputs << ", keys " << s.num_keys << ", outputs "
     << s.num_outputs << ", gates " << s.num_gates << ", nets " << s.num_nets
     << ", depth " << s.depth << "\n";
  for (auto& [kind, count] : s.by_kind)
    os << "  " << to_string(kind) << "\t" << count << "\n";
  return os.str();
}

bool structurally_equal(const Netlist& a, const Netlist& b) {
  auto names = [](const Netlist& n, const std::vector<NetId>& ids) {
    std::vector<std::string> v;
    v.reserve(ids.size());
    for (NetId id : ids) v.push_back(n.net(id).name);
    return v;
  };
  if (names(a, a.inputs) != names(b, b.inputs)) return false;
  if (names(a, a.keys) != names(b, b.keys)) return false;
  if (names(a, a.outputs) != names(b, b.outputs)) return false;
  if (a.num_gates() != b.num_gates()) return false;

  auto gate_desc = [&](const Netlist& n, const Gate& g) {
    std::vector<std::string> in;
    for (NetId i : g.inputs) in.push_back(n.net(i).name);
    if (is_commutative(g.kind)) std::sort(in.begin(), in.end());
    std::string d = to_string(g.kind);
    for (auto& s : in) d += "|" + s;
    return d;
  };
  auto bdrv = b.driver_map();
  for (const Gate& ga : a.gates) {
    NetId ob = b.find(a.net(ga.output).name);
    if (ob == kNoNet || bdrv[ob] < 0) return false;
    if (gate_desc(a, ga) != gate_desc(b, b.gates[bdrv[ob]])) return false;
  }
  return true;
}

}  // namespace gatelock
