// SPDX-License-Identifier: Apache-2.0
#include "gatelock/transform.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "gatelock/errors.hpp"

namespace gatelock {

namespace {

struct FoldOptions {
  bool collapse_buf = false;  // alias through BUF / double negation
  bool hash_cons = false;     // structural deduplication
};

// What an old net resolves to in the netlist under construction.
struct State {
  enum Kind { Unset, Const, Ref } kind = Unset;
  int value = 0;
  NetId net = kNoNet;
};

struct FoldResult {
  enum Kind { Const, Alias, Gate } kind;
  int value = 0;
  NetId alias = kNoNet;
  GateKind gk = GateKind::Buf;
  std::vector<NetId> inputs;
};

class Folder {
 public:
  Folder(const Netlist& old, const Assignment& fixed, FoldOptions opt)
      : old_(old), fixed_(fixed), opt_(opt), state_(old.num_nets()) {
    for (NetId id : old_.outputs) reserved_.insert(old_.net(id).name);
    for (NetId id : old_.inputs) reserved_.insert(old_.net(id).name);
    for (NetId id : old_.keys) reserved_.insert(old_.net(id).name);
  }

  Netlist run(bool* changed);

 private:
  NetId fresh(std::string base) {
    while (out_.has(base) || reserved_.count(base)) base += "_";
    return out_.add_net(std::move(base), NetRole::Internal);
  }

  NetId materialize_not(NetId a, const std::string& base) {
    if (opt_.collapse_buf) {
      auto it = not_of_.find(a);
      if (it != not_of_.end()) {
        changed_ = true;
        return it->second;
      }
    }
    NetId o = fresh(base + "$n");
    emit_gate(GateKind::Not, {a}, o);
    return o;
  }

  void emit_gate(GateKind k, std::vector<NetId> in, NetId o) {
    if (k == GateKind::Not) {
      not_of_[o] = in[0];
      not_of_[in[0]] = o;
    }
    if (opt_.hash_cons) cons_[cons_key(k, in)] = o;
    out_.add_gate(k, std::move(in), o);
  }

  std::string cons_key(GateKind k, const std::vector<NetId>& in) {
    std::vector<NetId> v = in;
    if (is_commutative(k)) std::sort(v.begin(), v.end());
    std::string key(1, static_cast<char>(k));
    for (NetId i : v) {
      key += ',';
      key += std::to_string(i);
    }
    return key;
  }

  State resolve(NetId id) {
    State& s = state_[id];
    if (s.kind == State::Unset) {
      // Undriven internal net read by a gate: keep it as a plain net.
      s.kind = State::Ref;
      s.net = fresh(old_.net(id).name);
      return s;
    }
    return s;
  }

  FoldResult fold_gate(const Gate& g);

  const Netlist& old_;
  const Assignment& fixed_;
  FoldOptions opt_;
  std::vector<State> state_;
  Netlist out_;
  std::unordered_set<std::string> reserved_;
  std::unordered_map<NetId, NetId> not_of_;   // over new nets
  std::unordered_map<std::string, NetId> cons_;
  bool changed_ = false;
};

FoldResult Folder::fold_gate(const Gate& g) {
  // Resolve inputs.
  std::vector<State> in;
  in.reserve(g.inputs.size());
  bool any_const = false;
  for (NetId i : g.inputs) {
    in.push_back(resolve(i));
    if (in.back().kind == State::Const) any_const = true;
  }

  auto cref = [](int v) { return FoldResult{FoldResult::Const, v, kNoNet, GateKind::Buf, {}}; };
  auto aref = [](NetId n) { return FoldResult{FoldResult::Alias, 0, n, GateKind::Buf, {}}; };
  auto gref = [](GateKind k, std::vector<NetId> v) {
    return FoldResult{FoldResult::Gate, 0, kNoNet, k, std::move(v)};
  };
  auto unary = [&](State s, bool invert) -> FoldResult {
    if (s.kind == State::Const) return cref(s.value ^ (invert ? 1 : 0));
    if (!invert)
      return opt_.collapse_buf ? aref(s.net) : gref(GateKind::Buf, {s.net});
    if (opt_.collapse_buf) {
      auto it = not_of_.find(s.net);
      if (it != not_of_.end()) return aref(it->second);
    }
    return gref(GateKind::Not, {s.net});
  };

  switch (g.kind) {
    case GateKind::Const0: return cref(0);
    case GateKind::Const1: return cref(1);
    case GateKind::Buf: return unary(in[0], false);
    case GateKind::Not: return unary(in[0], true);

    case GateKind::And:
    case GateKind::Nand:
    case GateKind::Or:
    case GateKind::Nor: {
      bool is_or = g.kind == GateKind::Or || g.kind == GateKind::Nor;
      bool invert = g.kind == GateKind::Nand || g.kind == GateKind::Nor;
      int absorb = is_or ? 1 : 0;  // dominating constant
      std::vector<NetId> frees;
      for (const State& s : in) {
        if (s.kind == State::Const) {
          if (s.value == absorb) return cref(absorb ^ (invert ? 1 : 0));
          continue;  // identity element
        }
        if (std::find(frees.begin(), frees.end(), s.net) == frees.end())
          frees.push_back(s.net);
      }
      if (frees.size() != in.size()) changed_ = true;
      if (opt_.collapse_buf) {
        for (NetId f : frees) {
          auto it = not_of_.find(f);
          if (it != not_of_.end() &&
              std::find(frees.begin(), frees.end(), it->second) != frees.end()) {
            changed_ = true;
            return cref(absorb ^ (invert ? 1 : 0));
          }
        }
      }
      if (frees.empty()) return cref(absorb ^ 1 ^ (invert ? 1 : 0));
      if (frees.size() == 1) return unary(State{State::Ref, 0, frees[0]}, invert);
      return gref(g.kind, std::move(frees));
    }

    case GateKind::Xor:
    case GateKind::Xnor: {
      int parity = g.kind == GateKind::Xnor ? 1 : 0;
      std::vector<NetId> frees;
      for (const State& s : in) {
        if (s.kind == State::Const) {
          parity ^= s.value;
          continue;
        }
        auto it = std::find(frees.begin(), frees.end(), s.net);
        if (it != frees.end())
          frees.erase(it);  // pairs cancel
        else
          frees.push_back(s.net);
      }
      if (frees.size() != in.size() || any_const) changed_ = true;
      if (opt_.collapse_buf) {
        bool again = true;
        while (again) {
          again = false;
          for (NetId f : frees) {
            auto it = not_of_.find(f);
            if (it == not_of_.end()) continue;
            auto jt = std::find(frees.begin(), frees.end(), it->second);
            if (jt == frees.end()) continue;
            NetId other = *jt;
            frees.erase(std::find(frees.begin(), frees.end(), f));
            frees.erase(std::find(frees.begin(), frees.end(), other));
            parity ^= 1;
            changed_ = true;
            again = true;
            break;
          }
        }
      }
      if (frees.empty()) return cref(parity);
      if (frees.size() == 1)
        return unary(State{State::Ref, 0, frees[0]}, parity == 1);
      return gref(parity ? GateKind::Xnor : GateKind::Xor, std::move(frees));
    }

    case GateKind::Mux2: {
      State d0 = in[0], d1 = in[1], s = in[2];
      if (s.kind == State::Const) {
        changed_ = true;
        return unary(s.value ? d1 : d0, false);
      }
      if (d0.kind == State::Const && d1.kind == State::Const) {
        changed_ = true;
        if (d0.value == d1.value) return cref(d0.value);
        return unary(s, d0.value == 1);  // (0,1) -> s ; (1,0) -> !s
      }
      if (d0.kind == State::Ref && d1.kind == State::Ref && d0.net == d1.net) {
        changed_ = true;
        return unary(d0, false);
      }
      std::string base = old_.net(g.output).name;
      if (d0.kind == State::Const) {
        changed_ = true;
        if (d0.value == 0) return gref(GateKind::And, {d1.net, s.net});
        NetId ns = materialize_not(s.net, base);
        return gref(GateKind::Or, {ns, d1.net});
      }
      if (d1.kind == State::Const) {
        changed_ = true;
        if (d1.value == 1) return gref(GateKind::Or, {d0.net, s.net});
        NetId ns = materialize_not(s.net, base);
        return gref(GateKind::And, {ns, d0.net});
      }
      return gref(GateKind::Mux2, {d0.net, d1.net, s.net});
    }
  }
  throw Error("unreachable gate kind");
}

Netlist Folder::run(bool* changed) {
  // Sources, in declaration order; bound ones fold away.
  for (NetId id : old_.inputs) {
    if (fixed_.has(id)) {
      state_[id] = State{State::Const, fixed_.get(id), kNoNet};
      changed_ = true;
    } else {
      state_[id] = State{State::Ref, 0, out_.add_net(old_.net(id).name, NetRole::Input)};
    }
  }
  for (NetId id : old_.keys) {
    if (fixed_.has(id)) {
      state_[id] = State{State::Const, fixed_.get(id), kNoNet};
      changed_ = true;
    } else {
      state_[id] = State{State::Ref, 0, out_.add_net(old_.net(id).name, NetRole::Key)};
    }
  }
  for (NetId id = 0; id < old_.num_nets(); ++id) {
    const Net& n = old_.net(id);
    if ((n.role == NetRole::Internal || n.role == NetRole::Output) &&
        fixed_.has(id))
      throw Error("constant binding for non-source net '" + n.name + "'");
  }

  for (uint32_t gi : old_.topo_order()) {
    const Gate& g = old_.gates[gi];
    FoldResult r = fold_gate(g);

    if (r.kind == FoldResult::Gate && opt_.hash_cons) {
      auto it = cons_.find(cons_key(r.gk, r.inputs));
      if (it != cons_.end()) {
        r = FoldResult{FoldResult::Alias, 0, it->second, GateKind::Buf, {}};
        changed_ = true;
      }
    }
    if (r.kind != FoldResult::Gate || r.gk != g.kind ||
        r.inputs.size() != g.inputs.size())
      changed_ = true;

    const Net& onet = old_.net(g.output);
    bool is_po = onet.role == NetRole::Output;
    switch (r.kind) {
      case FoldResult::Const: {
        if (is_po) {
          NetId o = out_.add_net(onet.name, NetRole::Internal);
          emit_gate(r.value ? GateKind::Const1 : GateKind::Const0, {}, o);
          out_.mark_output(o);
          state_[g.output] = State{State::Ref, 0, o};
        } else {
          state_[g.output] = State{State::Const, r.value, kNoNet};
        }
        break;
      }
      case FoldResult::Alias: {
        if (is_po) {
          NetId t = r.alias;
          if (out_.net(t).role == NetRole::Internal) {
            out_.rename_net(t, onet.name);
            out_.mark_output(t);
            state_[g.output] = State{State::Ref, 0, t};
          } else {
            NetId o = out_.add_net(onet.name, NetRole::Internal);
            emit_gate(GateKind::Buf, {t}, o);
            out_.mark_output(o);
            state_[g.output] = State{State::Ref, 0, o};
          }
        } else {
          state_[g.output] = State{State::Ref, 0, r.alias};
        }
        break;
      }
      case FoldResult::Gate: {
        NetId o;
        if (is_po) {
          o = out_.add_net(onet.name, NetRole::Internal);
        } else {
          o = fresh(onet.name);
        }
        emit_gate(r.gk, std::move(r.inputs), o);
        if (is_po) out_.mark_output(o);
        state_[g.output] = State{State::Ref, 0, o};
        break;
      }
    }
  }

  // Primary outputs in original declaration order.
  std::vector<NetId> po;
  po.reserve(old_.outputs.size());
  for (NetId id : old_.outputs) {
    NetId o = out_.find(old_.net(id).name);
    if (o == kNoNet) throw Error("output lost during fold");
    po.push_back(o);
  }
  out_.outputs = std::move(po);

  if (changed) *changed = changed_;
  return std::move(out_);
}

}  // namespace

// Removes gates (and internal nets) that no primary output depends on.
Netlist strip_dead(const Netlist& n, bool* changed) {
  auto drv = n.driver_map();
  std::vector<char> keep_net(n.num_nets(), 0);
  std::vector<char> keep_gate(n.num_gates(), 0);
  std::vector<NetId> stack;
  for (NetId o : n.outputs)
    if (!keep_net[o]) {
      keep_net[o] = 1;
      stack.push_back(o);
    }
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
  bool all = true;
  for (uint32_t g = 0; g < n.num_gates(); ++g) all = all && keep_gate[g];
  if (all) {
    if (changed) *changed = false;
    return n;
  }
  if (changed) *changed = true;

  Netlist out;
  std::vector<NetId> map(n.num_nets(), kNoNet);
  for (NetId id : n.inputs) map[id] = out.add_net(n.net(id).name, NetRole::Input);
  for (NetId id : n.keys) map[id] = out.add_net(n.net(id).name, NetRole::Key);
  for (NetId id = 0; id < n.num_nets(); ++id) {
    if (!keep_net[id] || map[id] != kNoNet) continue;
    const Net& net = n.net(id);
    map[id] = out.add_net(net.name, NetRole::Internal);
  }
  for (uint32_t g = 0; g < n.num_gates(); ++g) {
    if (!keep_gate[g]) continue;
    const Gate& gate = n.gates[g];
    std::vector<NetId> in;
    in.reserve(gate.inputs.size());
    for (NetId i : gate.inputs) in.push_back(map[i]);
    out.add_gate(gate.kind, std::move(in), map[gate.output]);
  }
  for (NetId id : n.outputs) out.mark_output(map[id]);
  return out;
}

Netlist propagate_constants(const Netlist& n, const Assignment& fixed) {
  Folder f(n, fixed, FoldOptions{/*collapse_buf=*/false, /*hash_cons=*/false});
  Netlist out = f.run(nullptr);
  out = strip_dead(out, nullptr);
  out.validate();
  return out;
}

Netlist simplify(const Netlist& n) {
  Netlist cur = n;
  for (int pass = 0; pass < 50; ++pass) {
    bool ch1 = false, ch2 = false;
    Assignment empty(cur);
    Folder f(cur, empty, FoldOptions{/*collapse_buf=*/true, /*hash_cons=*/true});
    Netlist next = f.run(&ch1);
    next = strip_dead(next, &ch2);
    cur = std::move(next);
    if (!ch1 && !ch2) break;
  }
  cur.validate();
  return cur;
}

}  // namespace gatelock
