// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

namespace gatelock::sat {

using Var = int32_t;  // 0-based

struct Lit {
  int32_t x = -2;  // 2*var + sign
  bool operator==(const Lit&) const = default;
};

inline Lit mk_lit(Var v, bool neg = false) { return Lit{2 * v + (neg ? 1 : 0)}; }
inline Lit operator~(Lit p) { return Lit{p.x ^ 1}; }
inline bool sign(Lit p) { return p.x & 1; }   // true = negated
inline Var var(Lit p) { return p.x >> 1; }
inline constexpr Lit kLitUndef{-2};

enum class Status { Sat, Unsat, Limit };

struct SolveLimits {
  int64_t max_conflicts = -1;  // -1 = unlimited
  double max_seconds = -1;     // wall clock; -1 = unlimited
};

// Conflict-driven clause learning solver: two-watched-literal propagation,
// VSIDS with phase saving, Luby restarts, first-UIP learning with reason-side
// minimization, activity-based learnt-clause reduction, incremental solving
// under assumptions. Deterministic for a fixed clause stream and conflict
// budget (wall-clock limits can only turn an answer into Limit).
class Solver {
 public:
  Solver();

  Var new_var();
  int num_vars() const { return static_cast<int>(assigns_.size()); }

  // False if the database is already unsatisfiable at the root level.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) {
    return add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }
  bool okay() const { return ok_; }

  Status solve(std::span<const Lit> assumptions = {},
               const SolveLimits& limits = {});

  // Valid after Status::Sat.
  bool model_value(Var v) const { return model_[v] == 1; }
  bool model_value(Lit p) const { return model_value(var(p)) != sign(p); }

  int64_t conflicts() const { return conflicts_; }
  int64_t propagations() const { return propagations_; }
  int64_t decisions() const { return decisions_; }

 private:
  using CRef = uint32_t;
  static constexpr CRef kCRefUndef = 0xffffffffu;

  // Clause arena. Layout per clause: [size | learnt<<31, activity(float),
  // lits...]; all 32-bit words.
  std::vector<uint32_t> arena_;
  std::vector<CRef> clauses_, learnts_;

  struct Watcher {
    CRef cref;
    Lit blocker;
  };
  std::vector<std::vector<Watcher>> watches_;  // indexed by Lit.x

  std::vector<int8_t> assigns_;   // per var: -1 unset, 0 false, 1 true
  std::vector<int8_t> phase_;     // saved polarity
  std::vector<int32_t> level_;
  std::vector<CRef> reason_;
  std::vector<Lit> trail_;
  std::vector<int32_t> trail_lim_;
  size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int32_t> heap_;      // binary max-heap of vars
  std::vector<int32_t> heap_pos_;  // -1 = not in heap
  double cla_inc_ = 1.0;

  std::vector<int8_t> model_;
  std::vector<char> seen_;
  bool ok_ = true;
  int64_t conflicts_ = 0, propagations_ = 0, decisions_ = 0;
  int64_t learnt_adjust_ = 100;
  double max_learnts_ = 0;

  // clause accessors
  uint32_t cl_size(CRef c) const { return arena_[c] & 0x7fffffffu; }
  bool cl_learnt(CRef c) const { return arena_[c] >> 31; }
  float cl_act(CRef c) const {
    float f;
    uint32_t u = arena_[c + 1];
    __builtin_memcpy(&f, &u, 4);
    return f;
  }
  void cl_set_act(CRef c, float f) {
    uint32_t u;
    __builtin_memcpy(&u, &f, 4);
    arena_[c + 1] = u;
  }
  Lit cl_lit(CRef c, uint32_t i) const {
    return Lit{static_cast<int32_t>(arena_[c + 2 + i])};
  }
  void cl_set_lit(CRef c, uint32_t i, Lit p) {
    arena_[c + 2 + i] = static_cast<uint32_t>(p.x);
  }
  void cl_shrink(CRef c, uint32_t new_size) {
    arena_[c] = (arena_[c] & 0x80000000u) | new_size;
  }

  int8_t value(Lit p) const {
    int8_t a = assigns_[var(p)];
    return a < 0 ? a : static_cast<int8_t>(a ^ (sign(p) ? 1 : 0));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  CRef alloc_clause(std::span<const Lit> lits, bool learnt);
  void attach(CRef c);
  void detach(CRef c);
  void remove_clause(CRef c);

  void enqueue(Lit p, CRef from);
  CRef propagate();
  void cancel_until(int level);
  Lit pick_branch();
  void analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel);
  bool lit_redundant(Lit p, uint32_t abstract_levels);
  void reduce_db();
  void var_bump(Var v);
  void var_decay() { var_inc_ /= 0.95; }
  void cla_bump(CRef c);
  void cla_decay() { cla_inc_ /= 0.999; }

  void heap_insert(Var v);
  void heap_update(Var v);
  Var heap_pop();
  void heap_sift_up(int i);
  void heap_sift_down(int i);
  bool heap_less(Var a, Var b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }

  void check_model() const;
};

}  // namespace gatelock::sat
