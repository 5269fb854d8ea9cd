// SPDX-License-Identifier: Apache-2.0
#include "gatelock/lock.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <unordered_set>
#include <utility>

#include "json.hpp"

#include "gatelock/analyze.hpp"
#include "gatelock/bench_io.hpp"
#include "gatelock/equiv.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/sim.hpp"
#include "gatelock/transform.hpp"

namespace gatelock {

namespace {

using nlohmann::json;

struct KeyNamer {
  std::string prefix;
  size_t next = 0;

  NetId add(Netlist& n) {
    std::string name;
    do {
      name = prefix + std::to_string(next++);
    } while (n.has(name));
    return n.add_net(std::move(name), NetRole::Key);
  }
};

void append_bits(BitVec& dst, const BitVec& more) {
  dst = BitVec::concat(dst, more);
}

std::optional<BitVec> key_so_far(const Netlist& n, const BitVec& bits) {
  if (n.keys.empty()) return std::nullopt;
  if (bits.width() != n.keys.size())
    throw Error("internal: secret width out of sync with key inputs");
  return bits;
}

// Reroutes the driver of gates[gi]'s output through a fresh 2-input gate:
//   <old output> = kind(<old output>$raw, other)
NetId reroute(Netlist& n, size_t gi, GateKind kind, NetId other) {
  NetId v = n.gates[gi].output;
  NetId raw = n.add_internal(n.net(v).name + "$raw");
  n.gates[gi].output = raw;
  n.add_gate(kind, {raw, other}, v);
  return raw;
}

// Copy of `n` with a NOT spliced between `v`'s driver and its consumers.
Netlist with_inversion(const Netlist& n, NetId v) {
  Netlist c = n;
  auto drv = c.driver_map();
  if (drv[v] < 0) throw Error("cannot invert an undriven net");
  NetId raw = c.add_internal(c.net(v).name + "$flip");
  c.gates[static_cast<size_t>(drv[v])].output = raw;
  c.add_gate(GateKind::Not, {raw}, v);
  return c;
}

// Gate indices inside the fan-in cone of at least one primary output.
// Everything else is structurally invisible and useless as a lock site.
std::vector<char> po_cone_gates(const Netlist& n) {
  std::vector<char> mark(n.num_gates(), 0);
  for (NetId po : n.outputs)
    for (uint32_t gi : logic_cone(n, po).gates) mark[gi] = 1;
  return mark;
}

// True when inverting `v` changes some primary output for some input, with
// key inputs pinned to `key`. Random patterns first, exact miter fallback.
bool inversion_observable(const Netlist& n, NetId v,
                          const std::optional<BitVec>& key, Rng& rng) {
  Netlist flip = with_inversion(n, v);
  auto srcs = n.sources();
  BitTable in = random_source_table(n, 512, rng, key);
  BitTable y0 = simulate_batch_serial(n, srcs, in, n.outputs);
  BitTable y1 = simulate_batch_serial(flip, srcs, in, flip.outputs);
  for (size_t r = 0; r < n.outputs.size(); ++r)
    for (size_t w = 0; w < y0.words(); ++w)
      if (y0.row(r)[w] != y1.row(r)[w]) return true;
  EquivOptions eo;
  eo.key_a = eo.key_b = key;
  eo.limits.max_conflicts = 2'000'000;
  return check_equivalence(n, flip, eo).verdict == EquivVerdict::Inequivalent;
}

// Truth-table segment of `kind` over `arity` inputs, widened to `width`
// inputs (extra inputs are don't-cares). When fuse >= 0 the value is further
// XNORed with input bit `fuse`. MSB-first: segment bit j = value at row
// 2^width-1-j, where input 0 is the row's MSB.
BitVec lut_segment(GateKind kind, size_t arity, size_t width, int fuse) {
  size_t rows = size_t{1} << width;
  BitVec seg(rows);
  uint8_t in[6];
  for (size_t r = 0; r < rows; ++r) {
    for (size_t j = 0; j < arity; ++j)
      in[j] = static_cast<uint8_t>((r >> (width - 1 - j)) & 1);
    int f = eval_gate(kind, in, arity);
    if (fuse >= 0) {
      int pp = static_cast<int>((r >> (width - 1 - static_cast<size_t>(fuse))) & 1);
      f = (f == pp) ? 1 : 0;
    }
    seg.set(rows - 1 - r, f);
  }
  return seg;
}

// Replaces gates[gate_idx] with a complete MUX2 tree over `in_nets`
// (in_nets[0] selects at the root) whose leaves are fresh key inputs
// holding `segment`. The gate's output net is preserved.
LutRecord place_lut(Netlist& n, size_t gate_idx,
                    const std::vector<NetId>& in_nets, const BitVec& segment,
                    size_t pads, KeyNamer& kn) {
  size_t m = in_nets.size();
  size_t rows = size_t{1} << m;
  if (segment.width() != rows) throw Error("internal: segment width mismatch");
  NetId out = n.gates[gate_idx].output;

  LutRecord lr;
  lr.output = n.net(out).name;
  lr.segment = segment;
  lr.pads = pads;
  for (NetId i : in_nets) lr.inputs.push_back(n.net(i).name);

  std::vector<NetId> leaf(rows);
  for (size_t j = 0; j < rows; ++j) {
    NetId kk = kn.add(n);
    leaf[rows - 1 - j] = kk;  // key j holds the value of row 2^m-1-j
    lr.keys.push_back(n.net(kk).name);
  }

  std::function<NetId(size_t, uint64_t)> tree = [&](size_t level,
                                                    uint64_t prefix) -> NetId {
    if (level == m) return leaf[prefix];
    NetId lo = tree(level + 1, prefix << 1);
    NetId hi = tree(level + 1, (prefix << 1) | 1);
    NetId o = n.add_internal(lr.output + "$m");
    n.add_gate(GateKind::Mux2, {lo, hi, in_nets[level]}, o);
    return o;
  };
  NetId lo = tree(1, 0);
  NetId hi = tree(1, 1);
  n.gates[gate_idx] = Gate{GateKind::Mux2, {lo, hi, in_nets[0]}, out};
  return lr;
}

// Row r of a prospective LUT at gates[gi] is live when some input pattern
// selects the row and makes the output's inversion visible at a primary
// output. Returns true when every row is live; stops at the first dead row.
bool lut_rows_all_live(const Netlist& n, size_t gi,
                       const std::vector<NetId>& in_nets,
                       const std::optional<BitVec>& key, Rng& rng) {
  size_t m = in_nets.size();
  size_t rows = size_t{1} << m;
  NetId out = n.gates[gi].output;

  auto srcs = n.sources();
  BitTable in = random_source_table(n, 1024, rng, key);
  std::vector<NetId> watch = in_nets;
  Netlist flip = with_inversion(n, out);
  BitTable vi = simulate_batch_serial(n, srcs, in, watch);
  BitTable y0 = simulate_batch_serial(n, srcs, in, n.outputs);
  BitTable y1 = simulate_batch_serial(flip, srcs, in, flip.outputs);

  std::vector<char> live(rows, 0);
  bool any_vis = false;
  for (size_t p = 0; p < in.patterns(); ++p) {
    bool vis = false;
    for (size_t r = 0; r < n.outputs.size() && !vis; ++r)
      if (y0.get(r, p) != y1.get(r, p)) vis = true;
    if (!vis) continue;
    any_vis = true;
    uint64_t row = 0;
    for (size_t j = 0; j < m; ++j) row = (row << 1) | uint64_t(vi.get(j, p));
    live[row] = 1;
  }

  if (!any_vis) {
    // If the inversion is invisible outright, every row is dead: a row
    // mutation changes the output only on a subset of the inversion's
    // disagreements.
    EquivOptions eo;
    eo.key_a = eo.key_b = key;
    eo.limits.max_conflicts = 2'000'000;
    if (check_equivalence(n, flip, eo).verdict != EquivVerdict::Inequivalent)
      return false;
  }

  for (size_t r = 0; r < rows; ++r) {
    if (live[r]) continue;
    // Exact check: XOR the output with (in_nets == r) and test equivalence.
    Netlist mut = n;
    std::vector<NetId> lits;
    for (size_t j = 0; j < m; ++j) {
      if ((r >> (m - 1 - j)) & 1) {
        lits.push_back(in_nets[j]);
      } else {
        NetId nn = mut.add_internal("live$n");
        mut.add_gate(GateKind::Not, {in_nets[j]}, nn);
        lits.push_back(nn);
      }
    }
    NetId eq = lits[0];
    for (size_t j = 1; j < lits.size(); ++j) {
      NetId nn = mut.add_internal("live$a");
      mut.add_gate(GateKind::And, {eq, lits[j]}, nn);
      eq = nn;
    }
    reroute(mut, gi, GateKind::Xor, eq);
    EquivOptions eo;
    eo.key_a = eo.key_b = key;
    eo.limits.max_conflicts = 2'000'000;
    if (check_equivalence(n, mut, eo).verdict != EquivVerdict::Inequivalent)
      return false;
  }
  return true;
}

void check_pi_order(const Netlist& orig, const Netlist& locked) {
  if (orig.inputs.size() != locked.inputs.size())
    throw Error("lock self-check: primary input count changed");
  for (size_t i = 0; i < orig.inputs.size(); ++i)
    if (orig.net(orig.inputs[i]).name != locked.net(locked.inputs[i]).name)
      throw Error("lock self-check: primary input order changed");
}

// Random-pattern agreement between the original and the locked design at
// the secret key. Cheap guard against construction bugs; the CLI runs the
// full miter on top of this.
void self_check(const Netlist& orig, const Netlist& locked, const BitVec& key,
                uint64_t seed) {
  check_pi_order(orig, locked);
  if (orig.outputs.size() != locked.outputs.size())
    throw Error("lock self-check: output count changed");
  Rng rng(seed ^ 0x5e1fc4ec1dULL);
  size_t patterns = 256;
  BitTable in(orig.inputs.size(), patterns);
  for (size_t r = 0; r < in.rows(); ++r)
    for (size_t w = 0; w < in.words(); ++w) in.row(r)[w] = rng.next_u64();
  BitTable yo = simulate_batch_serial(orig, orig.inputs, in, orig.outputs);

  auto srcs = locked.sources();
  BitTable in2(srcs.size(), patterns);
  for (size_t r = 0; r < locked.inputs.size(); ++r)
    for (size_t w = 0; w < in2.words(); ++w) in2.row(r)[w] = in.row(r)[w];
  set_constant_rows(in2, locked.inputs.size(), key);
  BitTable yl = simulate_batch_serial(locked, srcs, in2, locked.outputs);

  for (size_t r = 0; r < yo.rows(); ++r)
    for (size_t w = 0; w < yo.words(); ++w)
      if (yo.row(r)[w] != yl.row(r)[w])
        throw Error("lock self-check failed: locked design disagrees with the "
                    "original at the secret key");
}

void require_unlocked(const Netlist& n) {
  if (!n.keys.empty()) throw Error("design already has key inputs");
  if (n.outputs.empty()) throw Error("design has no primary outputs");
}

// Balanced 2-input AND reduction; returns the (possibly single) root net.
NetId and_tree(Netlist& n, std::vector<NetId> layer, const std::string& base) {
  if (layer.empty()) throw Error("internal: empty AND tree");
  while (layer.size() > 1) {
    std::vector<NetId> next;
    for (size_t i = 0; i + 1 < layer.size(); i += 2) {
      NetId o = n.add_internal(base);
      n.add_gate(GateKind::And, {layer[i], layer[i + 1]}, o);
      next.push_back(o);
    }
    if (layer.size() & 1) next.push_back(layer.back());
    layer = std::move(next);
  }
  return layer[0];
}

struct DfltParts {
  NetId po = kNoNet;
  std::vector<NetId> prot;
  NetId cs1 = kNoNet, cs2 = kNoNet;
  std::vector<NetId> cmp;         // restore comparator bit nets
  std::vector<size_t> cmp_gates;  // their gate indices
};

// Double-flip locking: XORs a perturb comparator (protected PIs == pattern)
// and a restore comparator (reference == protected PIs) into the primary
// output whose cone spans the most primary inputs.
DfltParts add_dflt(Netlist& n, size_t width, const BitVec& pattern,
                   std::span<const NetId> reference) {
  if (pattern.width() != width || reference.size() != width)
    throw Error("internal: DFLT width mismatch");
  SupportMap sm(n);
  size_t npi = n.inputs.size();

  size_t best = SIZE_MAX, best_count = 0;
  for (size_t i = 0; i < n.outputs.size(); ++i) {
    size_t c = 0;
    for (size_t s = 0; s < npi; ++s)
      if (sm.depends_on(n.outputs[i], s)) ++c;
    if (c > best_count) {
      best_count = c;
      best = i;
    }
  }
  if (best == SIZE_MAX || best_count < width)
    throw Error("no primary output cone spans " + std::to_string(width) +
                " primary inputs");
  DfltParts d;
  d.po = n.outputs[best];

  for (size_t s = 0; s < npi && d.prot.size() < width; ++s)
    if (sm.depends_on(d.po, s)) d.prot.push_back(sm.sources()[s]);

  // Perturb: fires exactly on the protected pattern.
  std::vector<NetId> lits;
  for (size_t i = 0; i < width; ++i) {
    if (pattern.get(i)) {
      lits.push_back(d.prot[i]);
    } else {
      NetId nn = n.add_internal("dflt$pn");
      n.add_gate(GateKind::Not, {d.prot[i]}, nn);
      lits.push_back(nn);
    }
  }
  d.cs2 = and_tree(n, std::move(lits), "dflt$p");

  // Restore: fires when the protected PIs match the reference word.
  std::vector<NetId> cmp;
  for (size_t i = 0; i < width; ++i) {
    NetId c = n.add_internal("dflt$cmp");
    d.cmp_gates.push_back(
        n.add_gate(GateKind::Xnor, {reference[i], d.prot[i]}, c));
    cmp.push_back(c);
  }
  d.cmp = cmp;
  d.cs1 = and_tree(n, std::move(cmp), "dflt$r");

  auto drv = n.driver_map();
  if (drv[d.po] < 0) throw Error("protected output has no driver");
  std::string po_name = n.net(d.po).name;
  NetId bare = n.add_internal(po_name + "$bare");
  n.gates[static_cast<size_t>(drv[d.po])].output = bare;
  NetId q = n.add_internal(po_name + "$perturb");
  n.add_gate(GateKind::Xor, {bare, d.cs2}, q);
  n.add_gate(GateKind::Xor, {q, d.cs1}, d.po);
  return d;
}

// Copies a (keyless) specialized cipher circuit into `host`. The cipher's
// inputs become key inputs keyinput0.. (input order = key MSB first); the
// cipher's outputs are returned as internal nets of `host`.
void merge_cipher(Netlist& host, const Netlist& ciph, KeyNamer& kn,
                  std::vector<NetId>& youts, std::vector<NetId>& keynets) {
  if (!ciph.keys.empty())
    throw Error("internal: cipher circuit carries key roles");
  std::vector<NetId> map(ciph.num_nets(), kNoNet);
  for (NetId i : ciph.inputs) {
    NetId kk = kn.add(host);
    map[i] = kk;
    keynets.push_back(kk);
  }
  for (NetId id = 0; id < ciph.num_nets(); ++id)
    if (map[id] == kNoNet)
      map[id] = host.add_internal("bc$" + ciph.net(id).name);
  for (const Gate& g : ciph.gates) {
    std::vector<NetId> in;
    in.reserve(g.inputs.size());
    for (NetId i : g.inputs) in.push_back(map[i]);
    host.add_gate(g.kind, std::move(in), map[g.output]);
  }
  youts.clear();
  for (NetId o : ciph.outputs) youts.push_back(map[o]);
}

json bits_json(const BitVec& v) { return v.to_bits(); }
BitVec bits_from_json(const json& j) {
  return BitVec::from_bits(j.get<std::string>());
}

}  // namespace

// ---------------------------------------------------------------- records

std::string LockRecord::to_json(int indent) const {
  json j;
  j["format"] = "gatelock-lock-record-v1";
  j["scheme"] = scheme;
  j["seed"] = seed;
  j["key_prefix"] = key_prefix;
  j["nok"] = nok;
  j["key"] = key.to_bits();
  j["key_inputs"] = key_inputs;
  if (!sites.empty()) j["sites"] = sites;
  if (protected_pattern) j["protected_pattern"] = bits_json(*protected_pattern);
  if (!protected_inputs.empty()) j["protected_inputs"] = protected_inputs;
  if (!protected_output.empty()) j["protected_output"] = protected_output;
  if (!cs1.empty()) j["cs1"] = cs1;
  if (!cs2.empty()) j["cs2"] = cs2;
  if (cipher) {
    j["cipher"] = {{"spec", cipher->spec_name},
                   {"x", bits_json(cipher->x)},
                   {"k", bits_json(cipher->k)},
                   {"y", bits_json(cipher->y)}};
  }
  if (!boundary_nets.empty()) j["boundary_nets"] = boundary_nets;
  if (!luts.empty()) {
    json a = json::array();
    for (const LutRecord& l : luts) {
      a.push_back({{"output", l.output},
                   {"inputs", l.inputs},
                   {"segment", bits_json(l.segment)},
                   {"keys", l.keys},
                   {"pads", l.pads}});
    }
    j["luts"] = a;
  }
  return j.dump(indent) + "\n";
}

LockRecord LockRecord::from_json_text(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "gatelock-lock-record-v1")
    throw Error("not a lock record (bad format tag)");
  LockRecord r;
  r.scheme = j.at("scheme").get<std::string>();
  r.seed = j.at("seed").get<uint64_t>();
  r.key_prefix = j.value("key_prefix", std::string());
  r.nok = j.at("nok").get<size_t>();
  r.key = bits_from_json(j.at("key"));
  r.key_inputs = j.at("key_inputs").get<std::vector<std::string>>();
  if (j.contains("sites"))
    r.sites = j["sites"].get<std::vector<std::string>>();
  if (j.contains("protected_pattern"))
    r.protected_pattern = bits_from_json(j["protected_pattern"]);
  if (j.contains("protected_inputs"))
    r.protected_inputs = j["protected_inputs"].get<std::vector<std::string>>();
  r.protected_output = j.value("protected_output", std::string());
  r.cs1 = j.value("cs1", std::string());
  r.cs2 = j.value("cs2", std::string());
  if (j.contains("cipher")) {
    CipherRecord c;
    c.spec_name = j["cipher"].at("spec").get<std::string>();
    c.x = bits_from_json(j["cipher"].at("x"));
    c.k = bits_from_json(j["cipher"].at("k"));
    c.y = bits_from_json(j["cipher"].at("y"));
    r.cipher = std::move(c);
  }
  if (j.contains("boundary_nets"))
    r.boundary_nets = j["boundary_nets"].get<std::vector<std::string>>();
  if (j.contains("luts")) {
    for (const json& l : j["luts"]) {
      LutRecord lr;
      lr.output = l.at("output").get<std::string>();
      lr.inputs = l.at("inputs").get<std::vector<std::string>>();
      lr.segment = bits_from_json(l.at("segment"));
      lr.keys = l.at("keys").get<std::vector<std::string>>();
      lr.pads = l.value("pads", size_t{0});
      r.luts.push_back(std::move(lr));
    }
  }
  return r;
}

size_t expected_nok(const LockRecord& r) {
  if (r.scheme == "xor") return r.sites.size();
  if (r.scheme == "lut") {
    size_t s = 0;
    for (const LutRecord& l : r.luts) s += size_t{1} << l.inputs.size();
    return s;
  }
  if (r.scheme == "antisat") return 2 * r.protected_inputs.size();
  if (r.scheme == "ttlock") return r.protected_inputs.size();
  if (r.scheme == "cipher-xor") return r.cipher ? r.cipher->k.width() : 0;
  if (r.scheme == "compound") {
    size_t s = r.cipher ? r.cipher->k.width() : 0;
    for (const LutRecord& l : r.luts) s += size_t{1} << l.inputs.size();
    return s;
  }
  throw Error("unknown scheme in lock record: " + r.scheme);
}

// ------------------------------------------------------------------ xor

Netlist lock_xor(const Netlist& orig, size_t k, uint64_t seed,
                 LockRecord& rec) {
  require_unlocked(orig);
  if (k > orig.num_gates())
    throw Error("key count exceeds gate count");
  Netlist L = orig;
  Rng rng(seed);
  KeyNamer kn{default_key_prefix()};
  rec = LockRecord{};
  rec.scheme = "xor";
  rec.seed = seed;
  rec.key_prefix = kn.prefix;

  std::vector<size_t> pool;
  {
    std::vector<char> mark = po_cone_gates(orig);
    for (size_t gi = 0; gi < orig.num_gates(); ++gi)
      if (mark[gi]) pool.push_back(gi);
  }
  if (pool.size() < k)
    throw Error("could not find enough observable gate outputs");

  std::vector<int> bits;
  std::unordered_set<size_t> tried;
  size_t guard = 0;
  while (bits.size() < k) {
    if (++guard > 20 * k + 200)
      throw Error("could not find enough observable gate outputs");
    size_t gi = pool[rng.below(pool.size())];
    if (tried.count(gi)) continue;
    tried.insert(gi);
    NetId v = L.gates[gi].output;
    BitVec sk(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) sk.set(i, bits[i]);
    if (!inversion_observable(L, v, key_so_far(L, sk), rng)) continue;
    int bit = rng.bit();
    NetId kk = kn.add(L);
    rec.sites.push_back(L.net(v).name);
    rec.key_inputs.push_back(L.net(kk).name);
    reroute(L, gi, bit ? GateKind::Xnor : GateKind::Xor, kk);
    bits.push_back(bit);
  }
  rec.key = BitVec(k);
  for (size_t i = 0; i < k; ++i) rec.key.set(i, bits[i]);
  rec.nok = k;
  L.validate();
  self_check(orig, L, rec.key, seed);
  return L;
}

// ------------------------------------------------------------------ lut

Netlist lock_lut(const Netlist& orig, const LutConfig& cfg, size_t count,
                 uint64_t seed, LockRecord& rec) {
  require_unlocked(orig);
  if (cfg.m < 2 || cfg.m > 6) throw Error("LUT size must be between 2 and 6");
  Netlist L = orig;
  Rng rng(seed);
  KeyNamer kn{default_key_prefix()};
  rec = LockRecord{};
  rec.scheme = "lut";
  rec.seed = seed;
  rec.key_prefix = kn.prefix;

  std::vector<size_t> eligible;
  {
    std::vector<char> mark = po_cone_gates(orig);
    for (size_t gi = 0; gi < orig.num_gates(); ++gi) {
      const Gate& g = orig.gates[gi];
      if (!mark[gi]) continue;
      if (g.kind == GateKind::Const0 || g.kind == GateKind::Const1) continue;
      if (g.inputs.size() <= cfg.m) eligible.push_back(gi);
    }
  }
  if (count > eligible.size()) throw Error("no eligible gate");
  rng.shuffle(eligible);

  BitVec secret(0);
  size_t placed = 0;
  for (size_t gi : eligible) {
    if (placed == count) break;
    Gate g = L.gates[gi];  // copy: the vector is about to change
    size_t arity = g.inputs.size();
    size_t width = cfg.forced ? cfg.m : arity;
    bool ok = false;
    std::vector<NetId> in_nets;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
      in_nets = g.inputs;
      if (width > arity) {
        // Pad with distinct primary inputs not already feeding the gate.
        std::vector<NetId> pool = L.inputs;
        rng.shuffle(pool);
        for (NetId p : pool) {
          if (in_nets.size() == width) break;
          if (std::find(in_nets.begin(), in_nets.end(), p) == in_nets.end())
            in_nets.push_back(p);
        }
        if (in_nets.size() != width) throw Error("not enough primary inputs to pad LUTs");
      }
      ok = lut_rows_all_live(L, gi, in_nets, key_so_far(L, secret), rng);
      if (width == arity) break;  // nothing to resample without pads
    }
    if (!ok) continue;
    BitVec seg = lut_segment(g.kind, arity, width, -1);
    LutRecord lr = place_lut(L, gi, in_nets, seg, width - arity, kn);
    for (const std::string& kname : lr.keys) rec.key_inputs.push_back(kname);
    append_bits(secret, seg);
    rec.luts.push_back(std::move(lr));
    ++placed;
  }
  if (placed < count)
    throw Error("could not place the requested number of live LUTs");
  rec.key = secret;
  rec.nok = secret.width();
  L.validate();
  self_check(orig, L, rec.key, seed);
  return L;
}

void obfuscate_with_luts(Netlist& n, const std::vector<std::string>& targets,
                         const LutConfig& cfg, uint64_t seed,
                         LockRecord& rec) {
  if (cfg.m < 2 || cfg.m > 6) throw Error("LUT size must be between 2 and 6");
  Rng rng(seed);
  KeyNamer kn{rec.key_prefix.empty() ? default_key_prefix() : rec.key_prefix};
  if (rec.scheme.empty()) rec.scheme = "lut";
  if (rec.key_prefix.empty()) rec.key_prefix = kn.prefix;
  auto drv = n.driver_map();
  for (const std::string& name : targets) {
    NetId id = n.find(name);
    if (id == kNoNet) throw Error("no net named " + name);
    if (drv[id] < 0) throw Error("target " + name + " is not a gate output");
    size_t gi = static_cast<size_t>(drv[id]);
    Gate g = n.gates[gi];
    if (g.kind == GateKind::Const0 || g.kind == GateKind::Const1)
      throw Error("target " + name + " is a constant");
    size_t arity = g.inputs.size();
    if (arity > cfg.m)
      throw Error("target " + name + " arity exceeds the LUT size");
    size_t width = cfg.forced ? cfg.m : arity;
    std::vector<NetId> in_nets = g.inputs;
    if (width > arity) {
      std::vector<NetId> pool = n.inputs;
      rng.shuffle(pool);
      for (NetId p : pool) {
        if (in_nets.size() == width) break;
        if (std::find(in_nets.begin(), in_nets.end(), p) == in_nets.end())
          in_nets.push_back(p);
      }
      if (in_nets.size() != width)
        throw Error("not enough primary inputs to pad LUTs");
    }
    BitVec seg = lut_segment(g.kind, arity, width, -1);
    LutRecord lr = place_lut(n, gi, in_nets, seg, width - arity, kn);
    for (const std::string& kname : lr.keys) rec.key_inputs.push_back(kname);
    append_bits(rec.key, seg);
    rec.luts.push_back(std::move(lr));
  }
  rec.nok = rec.key.width();
  n.validate();
}

// -------------------------------------------------------------- antisat

Netlist lock_antisat(const Netlist& orig, size_t width, uint64_t seed,
                     LockRecord& rec) {
  require_unlocked(orig);
  if (width < 2) throw Error("the block needs at least 2 inputs");
  if (width > orig.inputs.size()) throw Error("insufficient primary inputs");
  Netlist L = orig;
  Rng rng(seed);
  KeyNamer kn{default_key_prefix()};
  rec = LockRecord{};
  rec.scheme = "antisat";
  rec.seed = seed;
  rec.key_prefix = kn.prefix;

  std::vector<NetId> pis = L.inputs;
  rng.shuffle(pis);
  pis.resize(width);
  BitVec alpha = rng.bits(width);

  std::vector<NetId> k1, k2;
  for (size_t i = 0; i < width; ++i) k1.push_back(kn.add(L));
  for (size_t i = 0; i < width; ++i) k2.push_back(kn.add(L));

  std::vector<NetId> a, b;
  for (size_t i = 0; i < width; ++i) {
    NetId ai = L.add_internal("as$a");
    L.add_gate(GateKind::Xor, {pis[i], k1[i]}, ai);
    a.push_back(ai);
    NetId bi = L.add_internal("as$b");
    L.add_gate(GateKind::Xor, {pis[i], k2[i]}, bi);
    b.push_back(bi);
  }
  NetId g = L.add_internal("as$g");
  L.add_gate(GateKind::And, a, g);
  NetId gb = L.add_internal("as$gb");
  L.add_gate(GateKind::Nand, b, gb);
  NetId cs1 = L.add_internal("as$cs1");
  L.add_gate(GateKind::And, {g, gb}, cs1);

  NetId po = L.outputs[rng.below(L.outputs.size())];
  auto drv = L.driver_map();
  if (drv[po] < 0) throw Error("selected output has no driver");
  reroute(L, static_cast<size_t>(drv[po]), GateKind::Xor, cs1);

  rec.key = BitVec::concat(alpha, alpha);
  for (NetId kk : L.keys) rec.key_inputs.push_back(L.net(kk).name);
  for (NetId p : pis) rec.protected_inputs.push_back(L.net(p).name);
  rec.protected_output = L.net(po).name;
  rec.cs1 = L.net(cs1).name;
  rec.nok = 2 * width;
  L.validate();
  self_check(orig, L, rec.key, seed);
  return L;
}

// --------------------------------------------------------------- ttlock

Netlist lock_ttlock(const Netlist& orig, size_t width,
                    const std::optional<BitVec>& pattern, uint64_t seed,
                    LockRecord& rec) {
  require_unlocked(orig);
  if (width == 0) throw Error("protected width must be positive");
  Netlist L = orig;
  Rng rng(seed);
  KeyNamer kn{default_key_prefix()};
  BitVec pat = pattern ? *pattern : rng.bits(width);
  if (pat.width() != width)
    throw Error("pattern width does not match the protected width");

  std::vector<NetId> ref;
  for (size_t i = 0; i < width; ++i) ref.push_back(kn.add(L));
  DfltParts d = add_dflt(L, width, pat, ref);

  rec = LockRecord{};
  rec.scheme = "ttlock";
  rec.seed = seed;
  rec.key_prefix = kn.prefix;
  rec.key = pat;
  rec.protected_pattern = pat;
  for (NetId kk : L.keys) rec.key_inputs.push_back(L.net(kk).name);
  for (NetId p : d.prot) rec.protected_inputs.push_back(L.net(p).name);
  rec.protected_output = L.net(d.po).name;
  rec.cs1 = L.net(d.cs1).name;
  rec.cs2 = L.net(d.cs2).name;
  rec.nok = width;
  L.validate();
  self_check(orig, L, rec.key, seed);
  return L;
}

// ----------------------------------------------------------- cipher-xor

Netlist lock_cipher_xor(const Netlist& orig, const CipherSpec& spec,
                        uint64_t seed, LockRecord& rec) {
  require_unlocked(orig);
  size_t bs = static_cast<size_t>(spec.block_bits);
  if (orig.num_gates() < bs) throw Error("insufficient gates");
  Rng rng(seed);
  PatternTriple t = sample_pattern_triple(spec, rng.next_u64());
  Netlist ciph = specialize_plaintext(build_unrolled_circuit(spec), t.x);

  Netlist L = orig;
  KeyNamer kn{default_key_prefix()};
  std::vector<NetId> youts, knets;
  merge_cipher(L, ciph, kn, youts, knets);

  // Only gate outputs with primary-input support are usable sites: a
  // key-only site would masquerade as an extra cipher output.
  SupportMap sm(orig);
  std::vector<std::string> site_names;
  std::unordered_set<size_t> tried;
  size_t guard = 0;
  for (size_t j = 0; j < bs; ++j) {
    for (;;) {
      if (++guard > 40 * bs + 400)
        throw Error("could not find enough observable gate outputs");
      size_t gi = rng.below(orig.num_gates());
      if (tried.count(gi)) continue;
      tried.insert(gi);
      bool has_pi = false;
      for (size_t s = 0; s < orig.inputs.size() && !has_pi; ++s)
        if (sm.depends_on(orig.gates[gi].output, s)) has_pi = true;
      if (!has_pi) continue;
      NetId v = L.gates[gi].output;
      if (!inversion_observable(L, v, key_so_far(L, t.k), rng)) continue;
      GateKind kind = t.y.get(j) ? GateKind::Xnor : GateKind::Xor;
      site_names.push_back(L.net(v).name);
      reroute(L, gi, kind, youts[j]);
      break;
    }
  }
  L.validate();
  self_check(orig, L, t.k, seed);
  L = simplify(L);
  self_check(orig, L, t.k, seed ^ 1);

  rec = LockRecord{};
  rec.scheme = "cipher-xor";
  rec.seed = seed;
  rec.key_prefix = kn.prefix;
  rec.key = t.k;
  for (NetId kk : L.keys) rec.key_inputs.push_back(L.net(kk).name);
  rec.sites = site_names;
  rec.cipher = CipherRecord{spec.name(), t.x, t.k, t.y};
  rec.nok = t.k.width();

  // The boundary nets (the cipher-side operand of each inserted gate) are
  // identified after simplify so the record matches the shipped netlist.
  SupportMap sml(L);
  auto drv = L.driver_map();
  size_t npi = L.inputs.size(), nsrc = sml.num_sources();
  for (const std::string& sname : site_names) {
    NetId v = L.find(sname);
    if (v == kNoNet || drv[v] < 0)
      throw Error("internal: lock site vanished during cleanup");
    const Gate& gate = L.gates[static_cast<size_t>(drv[v])];
    NetId boundary = kNoNet;
    for (NetId in : gate.inputs) {
      if (!sml.support_empty(in) && sml.support_within(in, npi, nsrc)) {
        if (boundary != kNoNet)
          throw Error("internal: ambiguous cipher boundary at " + sname);
        boundary = in;
      }
    }
    if (boundary == kNoNet)
      throw Error("internal: lost the cipher boundary at " + sname);
    rec.boundary_nets.push_back(L.net(boundary).name);
  }
  return L;
}

// -------------------------------------------------------------- compound

Netlist lock_compound(const Netlist& orig, const CipherSpec& spec,
                      const LutConfig& cfg, uint64_t seed, LockRecord& rec) {
  require_unlocked(orig);
  if (cfg.m < 2 || cfg.m > 6) throw Error("LUT size must be between 2 and 6");
  size_t bs = static_cast<size_t>(spec.block_bits);
  Rng rng(seed);
  PatternTriple t = sample_pattern_triple(spec, rng.next_u64());

  Netlist L = simplify(orig);
  Netlist ciph = specialize_plaintext(build_unrolled_circuit(spec), t.x);
  KeyNamer kn{default_key_prefix()};
  std::vector<NetId> youts, knets;
  merge_cipher(L, ciph, kn, youts, knets);

  // Resolve each cipher output to its real driver (skipping buffers), so
  // LUTs land on substantive gates.
  auto drv = L.driver_map();
  std::vector<NetId> bnd(bs);
  for (size_t j = 0; j < bs; ++j) {
    NetId b = youts[j];
    while (drv[b] >= 0 &&
           L.gates[static_cast<size_t>(drv[b])].kind == GateKind::Buf)
      b = L.gates[static_cast<size_t>(drv[b])].inputs[0];
    if (drv[b] < 0) throw Error("cipher output collapsed to a source");
    bnd[j] = b;
  }
  {
    std::unordered_set<NetId> uniq(bnd.begin(), bnd.end());
    if (uniq.size() != bs) throw Error("cipher outputs alias each other");
  }

  DfltParts d = add_dflt(L, bs, t.y, bnd);

  size_t count = cfg.count ? cfg.count : bs;
  if (count > bs) throw Error("placement count exceeds the boundary width");

  rec = LockRecord{};
  rec.scheme = "compound";
  rec.seed = seed;
  rec.key_prefix = kn.prefix;
  BitVec secret = t.k;
  for (NetId kk : knets) rec.key_inputs.push_back(L.net(kk).name);

  drv = L.driver_map();
  for (size_t j = 0; j < count; ++j) {
    NetId b = bnd[j];
    size_t dg = static_cast<size_t>(drv[b]);
    Gate g = L.gates[dg];  // copy: placements mutate the gate vector
    size_t arity = g.inputs.size();
    auto pads_from_protected = [&](std::vector<NetId>& in_nets, size_t width) {
      for (size_t i = 0; in_nets.size() < width; ++i) {
        if (i >= d.prot.size())
          throw Error("not enough protected inputs to pad LUTs");
        NetId p = d.prot[i];
        if (std::find(in_nets.begin(), in_nets.end(), p) == in_nets.end())
          in_nets.push_back(p);
      }
    };
    LutRecord lr;
    if (j % 2 == 0) {
      // Plain LUT replacing the boundary driver.
      size_t width = cfg.forced ? cfg.m : arity;
      if (arity > width)
        throw Error("boundary gate arity exceeds the LUT size");
      std::vector<NetId> in_nets = g.inputs;
      pads_from_protected(in_nets, width);
      lr = place_lut(L, dg, in_nets, lut_segment(g.kind, arity, width, -1),
                     width - arity, kn);
    } else {
      // Fused LUT absorbing the boundary into its restore comparator:
      // computes XNOR(driver(...), protected PI) directly.
      size_t width = cfg.forced ? cfg.m : arity + 1;
      if (arity + 1 > width)
        throw Error("boundary gate arity exceeds the LUT size");
      std::vector<NetId> in_nets = g.inputs;
      in_nets.push_back(d.prot[j]);
      pads_from_protected(in_nets, width);
      lr = place_lut(L, d.cmp_gates[j], in_nets,
                     lut_segment(g.kind, arity, width, static_cast<int>(arity)),
                     width - arity - 1, kn);
    }
    for (const std::string& kname : lr.keys) rec.key_inputs.push_back(kname);
    append_bits(secret, lr.segment);
    rec.luts.push_back(std::move(lr));
  }

  // Capture record names before dead-logic removal renumbers the nets.
  std::vector<std::string> bnd_names;
  for (NetId b : bnd) bnd_names.push_back(L.net(b).name);
  rec.key = secret;
  rec.nok = secret.width();
  rec.protected_pattern = t.y;
  for (NetId p : d.prot) rec.protected_inputs.push_back(L.net(p).name);
  rec.protected_output = L.net(d.po).name;
  rec.cs1 = L.net(d.cs1).name;
  rec.cs2 = L.net(d.cs2).name;
  rec.cipher = CipherRecord{spec.name(), t.x, t.k, t.y};

  L = strip_dead(L);
  L.validate();
  for (const std::string& name : bnd_names)
    if (L.has(name)) rec.boundary_nets.push_back(name);

  self_check(orig, L, rec.key, seed);
  return L;
}

}  // namespace gatelock
