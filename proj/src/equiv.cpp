// SPDX-License-Identifier: Apache-2.0
#include "gatelock/equiv.hpp"

#include <string>
#include <unordered_map>

#include "gatelock/errors.hpp"
#include "gatelock/sim.hpp"
#include "gatelock/solver.hpp"

namespace gatelock {

const char* to_string(EquivVerdict v) {
  switch (v) {
    case EquivVerdict::Equivalent: return "equivalent";
    case EquivVerdict::Inequivalent: return "inequivalent";
    case EquivVerdict::Unknown: return "unknown";
  }
  return "?";
}

namespace {

void bind_key(sat::Solver& s, const std::vector<int32_t>& vars,
              const std::optional<BitVec>& key, const char* side) {
  if (vars.empty()) return;
  if (!key) throw Error(std::string("missing key binding for netlist ") + side);
  if (key->width() != vars.size())
    throw Error(std::string("key width mismatch for netlist ") + side);
  for (size_t i = 0; i < vars.size(); ++i) {
    sat::Lit l = sat::mk_lit(vars[i] - 1, key->get(i) == 0);
    s.add_clause({l});
  }
}

}  // namespace

EquivResult check_equivalence(const Netlist& a, const Netlist& b,
                              const EquivOptions& opt) {
  MiterCnf m = build_miter(a, b);

  sat::Solver s;
  while (s.num_vars() < m.cnf.num_vars) s.new_var();
  std::vector<sat::Lit> tmp;
  for (const auto& cl : m.cnf.clauses) {
    tmp.clear();
    for (int32_t l : cl) tmp.push_back(sat::mk_lit(std::abs(l) - 1, l < 0));
    if (!s.add_clause(tmp)) break;
  }

  if (opt.bind_keys) {
    bind_key(s, m.key_vars_a, opt.key_a, "a");
    bind_key(s, m.key_vars_b, opt.key_b, "b");
  }

  EquivResult r;
  sat::Status st = s.solve({}, opt.limits);
  r.conflicts = s.conflicts();
  switch (st) {
    case sat::Status::Unsat:
      r.verdict = EquivVerdict::Equivalent;
      return r;
    case sat::Status::Limit:
      r.verdict = EquivVerdict::Unknown;
      return r;
    case sat::Status::Sat:
      break;
  }

  r.verdict = EquivVerdict::Inequivalent;
  BitVec x(m.input_vars.size());
  for (size_t i = 0; i < m.input_vars.size(); ++i)
    x.set(i, s.model_value(sat::Var(m.input_vars[i] - 1)) ? 1 : 0);
  r.counterexample = x;

  auto model_key = [&](const std::vector<int32_t>& vars) {
    BitVec k(vars.size());
    for (size_t i = 0; i < vars.size(); ++i)
      k.set(i, s.model_value(sat::Var(vars[i] - 1)) ? 1 : 0);
    return k;
  };
  BitVec ka, kb;
  if (!a.keys.empty())
    r.key_a = ka = opt.bind_keys && opt.key_a ? *opt.key_a : model_key(m.key_vars_a);
  if (!b.keys.empty())
    r.key_b = kb = opt.bind_keys && opt.key_b ? *opt.key_b : model_key(m.key_vars_b);

  // Confirm the counterexample by simulation before trusting the solver.
  BitVec ya = simulate(a, x, a.keys.empty() ? std::optional<BitVec>{} : ka);
  BitVec yb = simulate(b, x, b.keys.empty() ? std::optional<BitVec>{} : kb);
  std::unordered_map<std::string, int> by_name;
  for (size_t i = 0; i < b.outputs.size(); ++i)
    by_name[b.net(b.outputs[i]).name] = yb.get(i);
  bool differs = false;
  for (size_t i = 0; i < a.outputs.size(); ++i)
    if (by_name.at(a.net(a.outputs[i]).name) != ya.get(i)) differs = true;
  if (!differs)
    throw Error("equivalence counterexample failed simulation cross-check");
  return r;
}

}  // namespace gatelock
