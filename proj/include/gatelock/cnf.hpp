// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "gatelock/netlist.hpp"
#include "gatelock/solver.hpp"

namespace gatelock {

// CNF with DIMACS conventions: variables are 1-based, literals signed.
struct CnfFormula {
  int32_t num_vars = 0;
  std::vector<std::vector<int32_t>> clauses;
  // 1-based variable per NetId of the encoded netlist; 0 = no variable.
  std::vector<int32_t> net_var;

  int32_t lit(NetId n, bool neg = false) const {
    return neg ? -net_var[n] : net_var[n];
  }
  void add(std::vector<int32_t> clause) { clauses.push_back(std::move(clause)); }
  void add_unit(int32_t l) { clauses.push_back({l}); }
};

// Tseitin encoding of every gate. Each net gets a variable (in NetId order);
// chain variables for wide XOR/XNOR gates follow. Clause order follows the
// topological gate order.
CnfFormula tseitin_encode(const Netlist& n);

// Equisatisfiable "do the two circuits differ on some input" formula.
// Primary inputs are shared by name; output pairs feed XOR difference
// variables, and diff_var is their OR. The formula asserts diff_var, so it
// is satisfiable iff the circuits (with keys free) can disagree.
struct MiterCnf {
  CnfFormula cnf;
  std::vector<int32_t> input_vars;            // a.inputs order
  std::vector<int32_t> key_vars_a, key_vars_b;
  std::vector<int32_t> output_vars_a, output_vars_b;
  int32_t diff_var = 0;
};
MiterCnf build_miter(const Netlist& a, const Netlist& b);

std::string write_dimacs(const CnfFormula& f);
// Sidecar mapping, one `v<var> <net name>` line per mapped net.
std::string write_varmap(const CnfFormula& f, const Netlist& n);
CnfFormula parse_dimacs(std::string_view text);

// Runs the embedded solver on the formula. On Sat, `model` (if non-null)
// receives one value per 1-based variable (index 0 unused).
sat::Status solve_cnf(const CnfFormula& f, std::vector<int8_t>* model,
                      const sat::SolveLimits& limits = {});

}  // namespace gatelock
