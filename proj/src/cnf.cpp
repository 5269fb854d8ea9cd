// SPDX-License-Identifier: Apache-2.0
#include "gatelock/cnf.hpp"

#include <sstream>
#include <unordered_map>

#include "gatelock/errors.hpp"

namespace gatelock {

namespace {

// Emits gate constraints; `v` maps NetId to a 1-based variable.
struct GateEncoder {
  CnfFormula& f;
  int32_t fresh() { return ++f.num_vars; }

  void unary(int32_t o, int32_t a, bool invert) {
    if (invert) a = -a;
    f.add({-o, a});
    f.add({o, -a});
  }
  void xor2(int32_t o, int32_t a, int32_t b) {
    f.add({-o, a, b});
    f.add({-o, -a, -b});
    f.add({o, -a, b});
    f.add({o, a, -b});
  }
  void and_or(int32_t o, const std::vector<int32_t>& in, GateKind k) {
    // AND: o <-> conj(in). OR/NAND/NOR by polarity flips.
    bool is_or = k == GateKind::Or || k == GateKind::Nor;
    bool neg_o = k == GateKind::Nand || k == GateKind::Nor;
    int32_t oo = neg_o ? -o : o;
    std::vector<int32_t> big;
    big.reserve(in.size() + 1);
    big.push_back(is_or ? -oo : oo);
    for (int32_t a : in) {
      f.add({is_or ? oo : -oo, is_or ? -a : a});
      big.push_back(is_or ? a : -a);
    }
    f.add(std::move(big));
  }
  void mux(int32_t o, int32_t d0, int32_t d1, int32_t s) {
    f.add({s, -d0, o});
    f.add({s, d0, -o});
    f.add({-s, -d1, o});
    f.add({-s, d1, -o});
  }
  void encode(const Gate& g, const std::vector<int32_t>& net_var) {
    int32_t o = net_var[g.output];
    std::vector<int32_t> in;
    in.reserve(g.inputs.size());
    for (NetId i : g.inputs) in.push_back(net_var[i]);
    switch (g.kind) {
      case GateKind::And:
      case GateKind::Nand:
      case GateKind::Or:
      case GateKind::Nor:
        and_or(o, in, g.kind);
        break;
      case GateKind::Xor:
      case GateKind::Xnor: {
        int32_t acc = in[0];
        for (size_t i = 1; i + 1 < in.size(); ++i) {
          int32_t t = fresh();
          xor2(t, acc, in[i]);
          acc = t;
        }
        bool flip = g.kind == GateKind::Xnor;
        xor2(flip ? -o : o, acc, in.back());
        break;
      }
      case GateKind::Not:
        unary(o, in[0], true);
        break;
      case GateKind::Buf:
        unary(o, in[0], false);
        break;
      case GateKind::Mux2:
        mux(o, in[0], in[1], in[2]);
        break;
      case GateKind::Const0:
        f.add_unit(-o);
        break;
      case GateKind::Const1:
        f.add_unit(o);
        break;
    }
  }
};

}  // namespace

CnfFormula tseitin_encode(const Netlist& n) {
  CnfFormula f;
  f.net_var.assign(n.num_nets(), 0);
  for (NetId id = 0; id < n.num_nets(); ++id)
    f.net_var[id] = ++f.num_vars;
  GateEncoder enc{f};
  for (uint32_t g : n.topo_order()) enc.encode(n.gates[g], f.net_var);
  return f;
}

MiterCnf build_miter(const Netlist& a, const Netlist& b) {
  auto name_set = [](const Netlist& n, const std::vector<NetId>& ids) {
    std::vector<std::string> v;
    for (NetId id : ids) v.push_back(n.net(id).name);
    std::sort(v.begin(), v.end());
    return v;
  };
  if (name_set(a, a.inputs) != name_set(b, b.inputs))
    throw Error("miter requires identical primary input names");
  if (name_set(a, a.outputs) != name_set(b, b.outputs))
    throw Error("miter requires identical primary output names");

  MiterCnf m;
  CnfFormula& f = m.cnf;

  // Side A: one variable per net.
  std::vector<int32_t> va(a.num_nets(), 0);
  for (NetId id = 0; id < a.num_nets(); ++id) va[id] = ++f.num_vars;
  // Side B: primary inputs shared by name, everything else fresh.
  std::vector<int32_t> vb(b.num_nets(), 0);
  for (NetId id = 0; id < b.num_nets(); ++id) {
    if (b.net(id).role == NetRole::Input) {
      vb[id] = va[a.find(b.net(id).name)];
    } else {
      vb[id] = ++f.num_vars;
    }
  }
  GateEncoder enc{f};
  for (uint32_t g : a.topo_order()) enc.encode(a.gates[g], va);
  for (uint32_t g : b.topo_order()) enc.encode(b.gates[g], vb);

  for (NetId id : a.inputs) m.input_vars.push_back(va[id]);
  for (NetId id : a.keys) m.key_vars_a.push_back(va[id]);
  for (NetId id : b.keys) m.key_vars_b.push_back(vb[id]);
  for (NetId id : a.outputs) m.output_vars_a.push_back(va[id]);

  std::vector<int32_t> diffs;
  for (NetId id : a.outputs) {
    int32_t ob = vb[b.find(a.net(id).name)];
    m.output_vars_b.push_back(ob);
    int32_t d = ++f.num_vars;
    enc.xor2(d, va[id], ob);
    diffs.push_back(d);
  }
  m.diff_var = ++f.num_vars;
  // diff_var <-> OR(diffs), asserted true.
  std::vector<int32_t> big{-m.diff_var};
  for (int32_t d : diffs) {
    f.add({m.diff_var, -d});
    big.push_back(d);
  }
  f.add(std::move(big));
  f.add_unit(m.diff_var);

  // Keep a side-A net mapping for callers that inspect the model.
  f.net_var = std::move(va);
  return m;
}

std::string write_dimacs(const CnfFormula& f) {
  std::ostringstream os;
  os << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
  for (const auto& c : f.clauses) {
    for (int32_t l : c) os << l << " ";
    os << "0\n";
  }
  return os.str();
}

std::string write_varmap(const CnfFormula& f, const Netlist& n) {
  std::ostringstream os;
  for (NetId id = 0; id < n.num_nets() && id < f.net_var.size(); ++id)
    if (f.net_var[id] != 0)
      os << "v" << f.net_var[id] << " " << n.net(id).name << "\n";
  return os.str();
}

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  std::istringstream is{std::string(text)};
  std::string line;
  int64_t expect_clauses = -1;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, cnf;
      int64_t nv;
      if (!(ls >> p >> cnf >> nv >> expect_clauses) || cnf != "cnf")
        throw ParseError("malformed problem line", lineno);
      f.num_vars = static_cast<int32_t>(nv);
      continue;
    }
    std::vector<int32_t> clause;
    int64_t l;
    bool terminated = false;
    while (ls >> l) {
      if (l == 0) {
        terminated = true;
        break;
      }
      if (std::abs(l) > f.num_vars)
        throw ParseError("literal out of range", lineno);
      clause.push_back(static_cast<int32_t>(l));
    }
    if (!terminated && !clause.empty())
      throw ParseError("clause missing terminating 0", lineno);
    if (!clause.empty()) f.clauses.push_back(std::move(clause));
  }
  if (expect_clauses >= 0 &&
      static_cast<int64_t>(f.clauses.size()) != expect_clauses)
    throw ParseError("clause count does not match header");
  return f;
}

sat::Status solve_cnf(const CnfFormula& f, std::vector<int8_t>* model,
                      const sat::SolveLimits& limits) {
  sat::Solver s;
  for (int32_t v = 0; v < f.num_vars; ++v) s.new_var();
  std::vector<sat::Lit> lits;
  for (const auto& c : f.clauses) {
    lits.clear();
    for (int32_t l : c)
      lits.push_back(sat::mk_lit(std::abs(l) - 1, l < 0));
    if (!s.add_clause(lits)) return sat::Status::Unsat;
  }
  sat::Status st = s.solve({}, limits);
  if (st == sat::Status::Sat && model) {
    model->assign(f.num_vars + 1, 0);
    for (int32_t v = 1; v <= f.num_vars; ++v)
      (*model)[v] = s.model_value(v - 1) ? 1 : 0;
  }
  return st;
}

}  // namespace gatelock
