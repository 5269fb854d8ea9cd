// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <vector>

#include "gatelock/bits.hpp"
#include "gatelock/solver.hpp"

using namespace gatelock;
using sat::Lit;
using sat::Solver;
using sat::Status;
using sat::mk_lit;

namespace {

// (pigeons choose holes, no hole shared) — unsat when pigeons > holes.
void add_pigeonhole(Solver& s, int pigeons, int holes) {
  std::vector<std::vector<sat::Var>> p(pigeons, std::vector<sat::Var>(holes));
  for (int i = 0; i < pigeons; ++i)
    for (int j = 0; j < holes; ++j) p[i][j] = s.new_var();
  for (int i = 0; i < pigeons; ++i) {
    std::vector<Lit> clause;
    for (int j = 0; j < holes; ++j) clause.push_back(mk_lit(p[i][j]));
    s.add_clause(clause);
  }
  for (int j = 0; j < holes; ++j)
    for (int i = 0; i < pigeons; ++i)
      for (int k = i + 1; k < pigeons; ++k)
        s.add_clause({~mk_lit(p[i][j]), ~mk_lit(p[k][j])});
}

}  // namespace

TEST_CASE("contradiction is unsat") {
  Solver s;
  sat::Var x = s.new_var();
  s.add_clause({mk_lit(x)});
  bool ok = s.add_clause({~mk_lit(x)});
  CHECK((!ok || s.solve() == Status::Unsat));
  CHECK(s.solve() == Status::Unsat);
}

TEST_CASE("random 3-cnf agrees with brute force") {
  int disagreements = 0;
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed);
    int nvars = 8 + static_cast<int>(rng.below(4));  // 8..11
    int nclauses = static_cast<int>(nvars * 4.3);
    std::vector<std::vector<int>> clauses;  // signed 1-based
    for (int c = 0; c < nclauses; ++c) {
      std::vector<int> cl;
      while (cl.size() < 3) {
        int v = static_cast<int>(rng.below(nvars)) + 1;
        int lit = rng.bit() ? v : -v;
        bool dup = false;
        for (int l : cl) dup |= std::abs(l) == v;
        if (!dup) cl.push_back(lit);
      }
      clauses.push_back(cl);
    }

    bool brute_sat = false;
    for (uint64_t m = 0; m < (1ull << nvars) && !brute_sat; ++m) {
      bool all = true;
      for (auto& cl : clauses) {
        bool any = false;
        for (int l : cl)
          any |= ((m >> (std::abs(l) - 1)) & 1) == (l > 0 ? 1u : 0u);
        all &= any;
      }
      brute_sat = all;
    }

    Solver s;
    for (int v = 0; v < nvars; ++v) s.new_var();
    bool ok = true;
    for (auto& cl : clauses) {
      std::vector<Lit> lits;
      for (int l : cl) lits.push_back(mk_lit(std::abs(l) - 1, l < 0));
      ok = s.add_clause(lits) && ok;
    }
    Status st = ok ? s.solve() : Status::Unsat;
    if ((st == Status::Sat) != brute_sat) ++disagreements;
    if (st == Status::Sat) {
      // The model must satisfy every clause.
      for (auto& cl : clauses) {
        bool any = false;
        for (int l : cl) any |= s.model_value(mk_lit(std::abs(l) - 1, l < 0));
        CHECK(any);
      }
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("pigeonhole principle") {
  Solver ok;
  add_pigeonhole(ok, 4, 4);
  CHECK(ok.solve() == Status::Sat);

  Solver bad;
  add_pigeonhole(bad, 5, 4);
  CHECK(bad.solve() == Status::Unsat);
  CHECK(bad.conflicts() > 0);
}

TEST_CASE("incremental solving under assumptions") {
  Solver s;
  sat::Var a = s.new_var(), b = s.new_var(), c = s.new_var();
  s.add_clause({mk_lit(a), mk_lit(b)});
  s.add_clause({~mk_lit(a), mk_lit(c)});

  const Lit assume_a[1] = {mk_lit(a)};
  REQUIRE(s.solve(assume_a) == Status::Sat);
  CHECK(s.model_value(a));
  CHECK(s.model_value(c));  // forced by a -> c

  const Lit assume_na[1] = {~mk_lit(a)};
  REQUIRE(s.solve(assume_na) == Status::Sat);
  CHECK_FALSE(s.model_value(a));
  CHECK(s.model_value(b));

  // Clause added after a solve is honored by later solves.
  s.add_clause({~mk_lit(c)});
  CHECK(s.solve(assume_a) == Status::Unsat);
  CHECK(s.solve() == Status::Sat);  // a=0, b=1 still works

  const Lit both[2] = {mk_lit(a), ~mk_lit(c)};
  CHECK(s.solve(both) == Status::Unsat);
}

TEST_CASE("conflict budget returns limit") {
  Solver s;
  add_pigeonhole(s, 8, 7);
  sat::SolveLimits lim;
  lim.max_conflicts = 10;
  CHECK(s.solve({}, lim) == Status::Limit);

  // The same instance without a budget finishes.
  Solver full;
  add_pigeonhole(full, 6, 5);
  CHECK(full.solve() == Status::Unsat);
}

TEST_CASE("solver is deterministic") {
  auto run = [] {
    Solver s;
    add_pigeonhole(s, 6, 5);
    Status st = s.solve();
    REQUIRE(st == Status::Unsat);
    return s.conflicts();
  };
  CHECK(run() == run());
}
