// SPDX-License-Identifier: Apache-2.0
#include "gatelock/solver.hpp"

#include <algorithm>
#include <cmath>

#include "gatelock/errors.hpp"

namespace gatelock::sat {

Solver::Solver() = default;

Var Solver::new_var() {
  Var v = num_vars();
  assigns_.push_back(-1);
  phase_.push_back(0);
  level_.push_back(0);
  reason_.push_back(kCRefUndef);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

Solver::CRef Solver::alloc_clause(std::span<const Lit> lits, bool learnt) {
  CRef c = static_cast<CRef>(arena_.size());
  arena_.push_back(static_cast<uint32_t>(lits.size()) |
                   (learnt ? 0x80000000u : 0));
  arena_.push_back(0);
  if (learnt) cl_set_act(c, 0.0f);
  for (Lit p : lits) arena_.push_back(static_cast<uint32_t>(p.x));
  return c;
}

void Solver::attach(CRef c) {
  watches_[(~cl_lit(c, 0)).x].push_back({c, cl_lit(c, 1)});
  watches_[(~cl_lit(c, 1)).x].push_back({c, cl_lit(c, 0)});
}

void Solver::detach(CRef c) {
  for (Lit w : {cl_lit(c, 0), cl_lit(c, 1)}) {
    auto& ws = watches_[(~w).x];
    for (size_t i = 0; i < ws.size(); ++i)
      if (ws[i].cref == c) {
        ws[i] = ws.back();
        ws.pop_back();
        break;
      }
  }
}

void Solver::remove_clause(CRef c) {
  detach(c);
  // The arena slot becomes garbage; the solver is rebuilt rarely enough in
  // this workload that compaction is not worth the bookkeeping.
}

bool Solver::add_clause(std::span<const Lit> lits) {
  if (!ok_) return false;
  cancel_until(0);
  std::vector<Lit> ps(lits.begin(), lits.end());
  std::sort(ps.begin(), ps.end(), [](Lit a, Lit b) { return a.x < b.x; });
  std::vector<Lit> out;
  Lit prev = kLitUndef;
  for (Lit p : ps) {
    if (var(p) >= num_vars()) throw Error("literal references unknown variable");
    if (value(p) == 1 || p == ~prev) return true;  // satisfied or tautology
    if (value(p) == 0 || p == prev) continue;      // falsified or duplicate
    prev = p;
    out.push_back(p);
  }
  if (out.empty()) {
    ok_ = false;
    return false;
  }
  if (out.size() == 1) {
    enqueue(out[0], kCRefUndef);
    if (propagate() != kCRefUndef) ok_ = false;
    return ok_;
  }
  CRef c = alloc_clause(out, false);
  clauses_.push_back(c);
  attach(c);
  return true;
}

void Solver::enqueue(Lit p, CRef from) {
  Var v = var(p);
  assigns_[v] = sign(p) ? 0 : 1;
  level_[v] = decision_level();
  reason_[v] = from;
  trail_.push_back(p);
}

Solver::CRef Solver::propagate() {
  CRef confl = kCRefUndef;
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    auto& ws = watches_[p.x];
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (value(w.blocker) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      CRef c = w.cref;
      ++i;
      Lit false_lit = ~p;
      if (cl_lit(c, 0) == false_lit) {
        cl_set_lit(c, 0, cl_lit(c, 1));
        cl_set_lit(c, 1, false_lit);
      }
      Lit first = cl_lit(c, 0);
      if (value(first) == 1) {
        ws[j++] = {c, first};
        continue;
      }
      uint32_t sz = cl_size(c);
      bool moved = false;
      for (uint32_t k = 2; k < sz; ++k) {
        Lit q = cl_lit(c, k);
        if (value(q) != 0) {
          cl_set_lit(c, 1, q);
          cl_set_lit(c, k, false_lit);
          watches_[(~q).x].push_back({c, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {c, first};
      if (value(first) == 0) {
        confl = c;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, c);
        ++propagations_;
      }
    }
    ws.resize(j);
  }
  return confl;
}

void Solver::cancel_until(int lvl) {
  if (decision_level() <= lvl) return;
  int32_t bound = trail_lim_[lvl];
  for (int32_t i = static_cast<int32_t>(trail_.size()) - 1; i >= bound; --i) {
    Var v = var(trail_[i]);
    phase_[v] = assigns_[v];
    assigns_[v] = -1;
    reason_[v] = kCRefUndef;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(bound);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

void Solver::var_bump(Var v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_update(v);
}

void Solver::cla_bump(CRef c) {
  float a = cl_act(c) + static_cast<float>(cla_inc_);
  cl_set_act(c, a);
  if (a > 1e20f) {
    for (CRef l : learnts_) cl_set_act(l, cl_act(l) * 1e-20f);
    cla_inc_ *= 1e-20;
  }
}

void Solver::heap_insert(Var v) {
  heap_pos_[v] = static_cast<int32_t>(heap_.size());
  heap_.push_back(v);
  heap_sift_up(heap_pos_[v]);
}

void Solver::heap_update(Var v) { heap_sift_up(heap_pos_[v]); }

void Solver::heap_sift_up(int i) {
  Var v = heap_[i];
  while (i > 0) {
    int parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void Solver::heap_sift_down(int i) {
  Var v = heap_[i];
  int n = static_cast<int>(heap_.size());
  while (true) {
    int child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = i;
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

Var Solver::heap_pop() {
  Var v = heap_[0];
  heap_pos_[v] = -1;
  heap_[0] = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[heap_[0]] = 0;
    heap_sift_down(0);
  }
  return v;
}

Lit Solver::pick_branch() {
  while (!heap_.empty()) {
    Var v = heap_pop();
    if (assigns_[v] < 0) return mk_lit(v, phase_[v] == 0);
  }
  return kLitUndef;
}

void Solver::analyze(CRef confl, std::vector<Lit>& out_learnt,
                     int& out_btlevel) {
  out_learnt.clear();
  out_learnt.push_back(kLitUndef);  // slot for the asserting literal
  int path = 0;
  Lit p = kLitUndef;
  int index = static_cast<int>(trail_.size()) - 1;
  do {
    if (cl_learnt(confl)) cla_bump(confl);
    uint32_t start = (p == kLitUndef) ? 0 : 1;
    for (uint32_t k = start; k < cl_size(confl); ++k) {
      Lit q = cl_lit(confl, k);
      Var v = var(q);
      if (!seen_[v] && level_[v] > 0) {
        seen_[v] = 1;
        var_bump(v);
        if (level_[v] >= decision_level())
          ++path;
        else
          out_learnt.push_back(q);
      }
    }
    while (!seen_[var(trail_[index])]) --index;
    p = trail_[index--];
    confl = reason_[var(p)];
    seen_[var(p)] = 0;
    --path;
  } while (path > 0);
  out_learnt[0] = ~p;

  // Reason-side minimization: drop literals implied by the rest.
  std::vector<Lit> marked(out_learnt.begin() + 1, out_learnt.end());
  uint32_t abstract = 0;
  for (size_t k = 1; k < out_learnt.size(); ++k)
    abstract |= 1u << (level_[var(out_learnt[k])] & 31);
  size_t keep = 1;
  for (size_t k = 1; k < out_learnt.size(); ++k) {
    Lit q = out_learnt[k];
    if (reason_[var(q)] == kCRefUndef || !lit_redundant(q, abstract))
      out_learnt[keep++] = q;
  }
  out_learnt.resize(keep);
  for (Lit q : marked) seen_[var(q)] = 0;

  out_btlevel = 0;
  if (out_learnt.size() > 1) {
    size_t max_i = 1;
    for (size_t k = 2; k < out_learnt.size(); ++k)
      if (level_[var(out_learnt[k])] > level_[var(out_learnt[max_i])]) max_i = k;
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_btlevel = level_[var(out_learnt[1])];
  }
}

bool Solver::lit_redundant(Lit p, uint32_t abstract_levels) {
  // Local check only: every antecedent literal must itself be marked or top.
  CRef r = reason_[var(p)];
  for (uint32_t k = 1; k < cl_size(r); ++k) {
    Lit q = cl_lit(r, k);
    Var v = var(q);
    if (level_[v] == 0) continue;
    if (!seen_[v]) return false;
    if (((1u << (level_[v] & 31)) & abstract_levels) == 0) return false;
  }
  return true;
}

void Solver::reduce_db() {
  std::vector<CRef> keep;
  std::vector<CRef> sorted = learnts_;
  std::sort(sorted.begin(), sorted.end(), [&](CRef a, CRef b) {
    bool ba = cl_size(a) == 2, bb = cl_size(b) == 2;
    if (ba != bb) return bb;  // binaries last = kept
    if (cl_act(a) != cl_act(b)) return cl_act(a) < cl_act(b);
    return a < b;
  });
  size_t limit = sorted.size() / 2;
  double act_threshold = cla_inc_ / std::max<size_t>(1, sorted.size());
  for (size_t i = 0; i < sorted.size(); ++i) {
    CRef c = sorted[i];
    Lit first = cl_lit(c, 0);
    bool locked = reason_[var(first)] == c && value(first) == 1;
    bool weak = i < limit || cl_act(c) < act_threshold;
    if (cl_size(c) > 2 && !locked && weak)
      remove_clause(c);
    else
      keep.push_back(c);
  }
  learnts_ = std::move(keep);
}

namespace {
// Luby restart sequence.
double luby(double y, int x) {
  int size, seq;
  for (size = 1, seq = 0; size < x + 1; seq++, size = 2 * size + 1) {}
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    seq--;
    x = x % size;
  }
  return std::pow(y, seq);
}
}  // namespace

Status Solver::solve(std::span<const Lit> assumptions,
                     const SolveLimits& limits) {
  cancel_until(0);
  if (!ok_) return Status::Unsat;
  for (Lit p : assumptions)
    if (var(p) >= num_vars()) throw Error("assumption on unknown variable");

  int64_t conflict_budget =
      limits.max_conflicts < 0 ? -1 : conflicts_ + limits.max_conflicts;
  auto deadline = std::chrono::steady_clock::now();
  bool timed = limits.max_seconds >= 0;
  if (timed)
    deadline += std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(limits.max_seconds));

  max_learnts_ = std::max(static_cast<double>(clauses_.size()) / 3.0, 1000.0);
  int64_t adjust_cnt = learnt_adjust_;
  int restart_round = 0;
  int64_t restart_budget =
      conflicts_ + static_cast<int64_t>(luby(2.0, restart_round) * 100);
  std::vector<Lit> learnt;

  while (true) {
    CRef confl = propagate();
    if (confl != kCRefUndef) {
      ++conflicts_;
      if (decision_level() == 0) return Status::Unsat;
      int btlevel = 0;
      analyze(confl, learnt, btlevel);
      cancel_until(btlevel);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kCRefUndef);
      } else {
        CRef c = alloc_clause(learnt, true);
        learnts_.push_back(c);
        attach(c);
        cla_bump(c);
        enqueue(learnt[0], c);
      }
      var_decay();
      cla_decay();
      if (--adjust_cnt <= 0) {
        learnt_adjust_ = static_cast<int64_t>(learnt_adjust_ * 1.5);
        adjust_cnt = learnt_adjust_;
        max_learnts_ *= 1.1;
      }
      if (conflict_budget >= 0 && conflicts_ >= conflict_budget) {
        cancel_until(0);
        return Status::Limit;
      }
      if (timed && (conflicts_ & 1023) == 0 &&
          std::chrono::steady_clock::now() >= deadline) {
        cancel_until(0);
        return Status::Limit;
      }
    } else {
      if (conflicts_ >= restart_budget) {
        ++restart_round;
        restart_budget =
            conflicts_ + static_cast<int64_t>(luby(2.0, restart_round) * 100);
        cancel_until(0);
        continue;
      }
      if (static_cast<double>(learnts_.size()) - trail_.size() >= max_learnts_)
        reduce_db();

      // Assumptions occupy the first decision levels.
      Lit next = kLitUndef;
      while (decision_level() < static_cast<int>(assumptions.size())) {
        Lit p = assumptions[decision_level()];
        if (value(p) == 1) {
          trail_lim_.push_back(static_cast<int32_t>(trail_.size()));
        } else if (value(p) == 0) {
          cancel_until(0);
          return Status::Unsat;
        } else {
          next = p;
          break;
        }
      }
      if (next == kLitUndef) {
        next = pick_branch();
        if (next == kLitUndef) {
          model_.assign(assigns_.begin(), assigns_.end());
          check_model();
          cancel_until(0);
          return Status::Sat;
        }
        ++decisions_;
      }
      trail_lim_.push_back(static_cast<int32_t>(trail_.size()));
      enqueue(next, kCRefUndef);
    }
  }
}

void Solver::check_model() const {
  for (CRef c : clauses_) {
    bool sat = false;
    for (uint32_t k = 0; k < cl_size(c) && !sat; ++k) {
      Lit p = cl_lit(c, k);
      sat = model_[var(p)] == (sign(p) ? 0 : 1);
    }
    if (!sat) throw Error("solver produced a model violating a clause");
  }
}

}  // namespace gatelock::sat
