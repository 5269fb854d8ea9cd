// SPDX-License-Identifier: Apache-2.0
#include "gatelock/sim.hpp"

#include "gatelock/errors.hpp"

namespace gatelock {

Assignment simulate_full(const Netlist& n, const Assignment& in) {
  Assignment out = in;
  std::vector<uint8_t> buf;
  for (uint32_t g : n.topo_order()) {
    const Gate& gate = n.gates[g];
    buf.clear();
    for (NetId i : gate.inputs) {
      if (!out.has(i))
        throw Error("net '" + n.net(i).name + "' is unassigned during simulation");
      buf.push_back(static_cast<uint8_t>(out.get(i)));
    }
    out.set(gate.output, eval_gate(gate.kind, buf.data(), buf.size()));
  }
  return out;
}

BitVec simulate(const Netlist& n, const Assignment& in) {
  return simulate_full(n, in).extract(n.outputs);
}

BitVec simulate(const Netlist& n, const BitVec& x,
                const std::optional<BitVec>& key) {
  return simulate(n, bind_inputs(n, x, key));
}

BitVec BitTable::column(size_t p) const {
  BitVec v(rows());
  for (size_t r = 0; r < rows(); ++r) v.set(r, get(r, p));
  return v;
}

void BitTable::set_column(size_t p, const BitVec& v) {
  for (size_t r = 0; r < v.width(); ++r) set(r, p, v.get(r));
}

namespace {

uint64_t eval_over(const Gate& g, const uint64_t* val) {
  switch (g.kind) {
    case GateKind::And:
    case GateKind::Nand: {
      uint64_t v = ~0ULL;
      for (NetId i : g.inputs) v &= val[i];
      return g.kind == GateKind::And ? v : ~v;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      uint64_t v = 0;
      for (NetId i : g.inputs) v |= val[i];
      return g.kind == GateKind::Or ? v : ~v;
    }
    case GateKind::Xor:
    case GateKind::Xnor: {
      uint64_t v = 0;
      for (NetId i : g.inputs) v ^= val[i];
      return g.kind == GateKind::Xor ? v : ~v;
    }
    case GateKind::Not: return ~val[g.inputs[0]];
    case GateKind::Buf: return val[g.inputs[0]];
    case GateKind::Mux2: {
      uint64_t s = val[g.inputs[2]];
      return (s & val[g.inputs[1]]) | (~s & val[g.inputs[0]]);
    }
    case GateKind::Const0: return 0;
    case GateKind::Const1: return ~0ULL;
  }
  return 0;
}

void check_batch_args(const Netlist& n, std::span<const NetId> sources,
                      const BitTable& in) {
  if (in.rows() != sources.size())
    throw Error("input table rows do not match source count");
  auto drv = n.driver_map();
  std::vector<char> given(n.num_nets(), 0);
  for (NetId s : sources) {
    if (drv[s] >= 0)
      throw Error("batch source '" + n.net(s).name + "' is gate-driven");
    given[s] = 1;
  }
  for (const Gate& g : n.gates)
    for (NetId i : g.inputs)
      if (drv[i] < 0 && !given[i])
        throw Error("net '" + n.net(i).name + "' has no driver and no row");
}

// One word-column of bitsliced evaluation.
void eval_word(const Netlist& n, std::span<const uint32_t> topo,
               std::span<const NetId> sources, const BitTable& in,
               std::span<const NetId> outs, BitTable& result, size_t w,
               uint64_t* val) {
  for (size_t r = 0; r < sources.size(); ++r) val[sources[r]] = in.row(r)[w];
  for (uint32_t g : topo) {
    const Gate& gate = n.gates[g];
    val[gate.output] = eval_over(gate, val);
  }
  for (size_t r = 0; r < outs.size(); ++r) result.row(r)[w] = val[outs[r]];
}

}  // namespace

BitTable simulate_batch_scalar(const Netlist& n, std::span<const NetId> sources,
                               const BitTable& in, std::span<const NetId> outs) {
  check_batch_args(n, sources, in);
  BitTable result(outs.size(), in.patterns());
  for (size_t p = 0; p < in.patterns(); ++p) {
    Assignment a(n);
    for (size_t r = 0; r < sources.size(); ++r) a.set(sources[r], in.get(r, p));
    Assignment full = simulate_full(n, a);
    for (size_t r = 0; r < outs.size(); ++r)
      result.set(r, p, full.get(outs[r]));
  }
  return result;
}

BitTable simulate_batch_serial(const Netlist& n, std::span<const NetId> sources,
                               const BitTable& in, std::span<const NetId> outs) {
  check_batch_args(n, sources, in);
  BitTable result(outs.size(), in.patterns());
  auto topo = n.topo_order();
  std::vector<uint64_t> val(n.num_nets(), 0);
  for (size_t w = 0; w < in.words(); ++w)
    eval_word(n, topo, sources, in, outs, result, w, val.data());
  return result;
}

BitTable simulate_batch(const Netlist& n, std::span<const NetId> sources,
                        const BitTable& in, std::span<const NetId> outs) {
  check_batch_args(n, sources, in);
  BitTable result(outs.size(), in.patterns());
  auto topo = n.topo_order();
  int64_t words = static_cast<int64_t>(in.words());
#pragma omp parallel
  {
    std::vector<uint64_t> val(n.num_nets(), 0);
#pragma omp for schedule(static)
    for (int64_t w = 0; w < words; ++w)
      eval_word(n, topo, sources, in, outs, result, static_cast<size_t>(w),
                val.data());
  }
  return result;
}

BitTable random_source_table(const Netlist& n, size_t patterns, Rng& rng,
                             const std::optional<BitVec>& key) {
  size_t npi = n.inputs.size(), nk = n.keys.size();
  BitTable t(npi + nk, patterns);
  for (size_t r = 0; r < npi; ++r) {
    uint64_t* row = t.row(r);
    for (size_t w = 0; w < t.words(); ++w) row[w] = rng.next_u64();
  }
  if (key) {
    if (key->width() != nk) throw Error("key width does not match key inputs");
    set_constant_rows(t, npi, *key);
  } else if (nk != 0) {
    throw Error("netlist has key inputs but no key was provided");
  }
  return t;
}

void set_constant_rows(BitTable& t, size_t first_row, const BitVec& bits) {
  for (size_t i = 0; i < bits.width(); ++i) {
    uint64_t* row = t.row(first_row + i);
    uint64_t v = bits.get(i) ? ~0ULL : 0;
    for (size_t w = 0; w < t.words(); ++w) row[w] = v;
  }
}

}  // namespace gatelock
