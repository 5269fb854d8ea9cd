// SPDX-License-Identifier: Apache-2.0
#include "gatelock/attacks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <unordered_map>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

#include "gatelock/analyze.hpp"
#include "gatelock/cnf.hpp"
#include "gatelock/equiv.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/sim.hpp"
#include "gatelock/solver.hpp"
#include "gatelock/transform.hpp"

namespace gatelock {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr size_t kMaxRecordedDips = 1024;
constexpr size_t kValidationProbes = 1000;

struct Deadline {
  Clock::time_point start = Clock::now();
  double max_seconds = 0;

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
  bool expired() const { return max_seconds > 0 && elapsed() >= max_seconds; }
  double remaining() const {
    if (max_seconds <= 0) return -1;
    double r = max_seconds - elapsed();
    return r < 1e-3 ? 1e-3 : r;
  }
};

// ------------------------------------------------------- folded encoding

// A net value during incremental encoding: a constant or a solver literal.
struct EncVal {
  int8_t c = -1;  // 0/1 = constant, -1 = symbolic
  sat::Lit lit{};
};

EncVal ev_const(int b) { return EncVal{static_cast<int8_t>(b ? 1 : 0), {}}; }
EncVal ev_lit(sat::Lit l) { return EncVal{-1, l}; }
EncVal ev_not(EncVal v) {
  if (v.c >= 0) return ev_const(!v.c);
  return ev_lit(~v.lit);
}

// Tseitin encoding with on-the-fly constant folding, used for the
// per-distinguishing-input circuit copies where the inputs are constants.
class FoldEnc {
 public:
  explicit FoldEnc(sat::Solver& s) : s_(s) {}

  EncVal gate(GateKind k, std::vector<EncVal> in) {
    switch (k) {
      case GateKind::And: return and_like(std::move(in), false);
      case GateKind::Nand: return and_like(std::move(in), true);
      case GateKind::Or: return or_like(std::move(in), false);
      case GateKind::Nor: return or_like(std::move(in), true);
      case GateKind::Xor: return xor_like(std::move(in), false);
      case GateKind::Xnor: return xor_like(std::move(in), true);
      case GateKind::Not: return ev_not(in.at(0));
      case GateKind::Buf: return in.at(0);
      case GateKind::Const0: return ev_const(0);
      case GateKind::Const1: return ev_const(1);
      case GateKind::Mux2: return mux(in.at(0), in.at(1), in.at(2));
    }
    throw Error("unhandled gate kind during encoding");
  }

  // d = a XOR b as a literal (fresh var unless foldable).
  EncVal xor2(EncVal a, EncVal b) { return xor_like({a, b}, false); }

 private:
  sat::Solver& s_;

  sat::Lit fresh() { return sat::mk_lit(s_.new_var(), false); }

  EncVal and_like(std::vector<EncVal> in, bool neg) {
    std::vector<sat::Lit> lits;
    for (const EncVal& v : in) {
      if (v.c == 0) return ev_const(neg ? 1 : 0);
      if (v.c == 1) continue;
      lits.push_back(v.lit);
    }
    std::sort(lits.begin(), lits.end(),
              [](sat::Lit a, sat::Lit b) { return a.x < b.x; });
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (size_t i = 0; i + 1 < lits.size(); ++i)
      if (lits[i].x == (lits[i + 1].x ^ 1)) return ev_const(neg ? 1 : 0);
    if (lits.empty()) return ev_const(neg ? 0 : 1);
    if (lits.size() == 1) return neg ? ev_lit(~lits[0]) : ev_lit(lits[0]);
    sat::Lit o = fresh();
    std::vector<sat::Lit> big;
    big.push_back(o);
    for (sat::Lit l : lits) {
      s_.add_clause({~o, l});
      big.push_back(~l);
    }
    s_.add_clause(big);
    return neg ? ev_lit(~o) : ev_lit(o);
  }

  EncVal or_like(std::vector<EncVal> in, bool neg) {
    for (EncVal& v : in) v = ev_not(v);
    return and_like(std::move(in), !neg);
  }

  EncVal xor_like(std::vector<EncVal> in, bool neg) {
    int parity = neg ? 1 : 0;
    std::vector<sat::Lit> lits;
    for (const EncVal& v : in) {
      if (v.c >= 0) {
        parity ^= v.c;
      } else {
        parity ^= sat::sign(v.lit) ? 1 : 0;
        lits.push_back(sat::Lit{v.lit.x & ~1});  // positive phase
      }
    }
    std::sort(lits.begin(), lits.end(),
              [](sat::Lit a, sat::Lit b) { return a.x < b.x; });
    // x ^ x cancels
    std::vector<sat::Lit> kept;
    for (size_t i = 0; i < lits.size();) {
      if (i + 1 < lits.size() && lits[i] == lits[i + 1]) {
        i += 2;
      } else {
        kept.push_back(lits[i]);
        ++i;
      }
    }
    if (kept.empty()) return ev_const(parity);
    EncVal cur = ev_lit(kept[0]);
    for (size_t i = 1; i < kept.size(); ++i) {
      sat::Lit o = fresh();
      sat::Lit a = cur.lit, b = kept[i];
      s_.add_clause({~o, a, b});
      s_.add_clause({~o, ~a, ~b});
      s_.add_clause({o, ~a, b});
      s_.add_clause({o, a, ~b});
      cur = ev_lit(o);
    }
    return parity ? ev_not(cur) : cur;
  }

  EncVal mux(EncVal d0, EncVal d1, EncVal sel) {
    if (sel.c == 0) return d0;
    if (sel.c == 1) return d1;
    if (d0.c >= 0 && d1.c >= 0) {
      if (d0.c == d1.c) return d0;
      return d0.c == 0 ? ev_lit(sel.lit) : ev_lit(~sel.lit);
    }
    if (d0.c < 0 && d1.c < 0 && d0.lit == d1.lit) return d0;
    if (d0.c == 0) return and_like({sel, d1}, false);            // s & d1
    if (d0.c == 1) return or_like({ev_not(sel), d1}, false);     // !s | d1
    if (d1.c == 0) return and_like({ev_not(sel), d0}, false);    // !s & d0
    if (d1.c == 1) return or_like({sel, d0}, false);             // s | d0
    sat::Lit o = fresh();
    sat::Lit s = sel.lit, a = d0.lit, b = d1.lit;
    s_.add_clause({~o, s, a});
    s_.add_clause({o, s, ~a});
    s_.add_clause({~o, ~s, b});
    s_.add_clause({o, ~s, ~b});
    return ev_lit(o);
  }
};

// ----------------------------------------------------------- name wiring

// Positional mapping between the attacked netlist's interface and the
// oracle's. Queries are issued in oracle order; answers come back in oracle
// order and are converted to netlist output order.
struct OracleWiring {
  std::vector<size_t> pi_to_oracle;   // netlist PI index -> oracle input pos
  std::vector<size_t> po_from_oracle; // netlist PO index -> oracle output pos

  static OracleWiring make(const Netlist& n, const Oracle& o) {
    OracleWiring w;
    std::unordered_map<std::string, size_t> in_pos, out_pos;
    for (size_t i = 0; i < o.input_names().size(); ++i)
      in_pos[o.input_names()[i]] = i;
    for (size_t i = 0; i < o.output_names().size(); ++i)
      out_pos[o.output_names()[i]] = i;
    if (o.input_names().size() != n.inputs.size() ||
        o.output_names().size() != n.outputs.size())
      throw Error("oracle interface does not match the locked design");
    for (NetId id : n.inputs) {
      auto it = in_pos.find(n.net(id).name);
      if (it == in_pos.end())
        throw Error("oracle lacks primary input " + n.net(id).name);
      w.pi_to_oracle.push_back(it->second);
    }
    for (NetId id : n.outputs) {
      auto it = out_pos.find(n.net(id).name);
      if (it == out_pos.end())
        throw Error("oracle lacks primary output " + n.net(id).name);
      w.po_from_oracle.push_back(it->second);
    }
    return w;
  }

  BitVec to_oracle(const BitVec& x) const {
    BitVec q(pi_to_oracle.size());
    for (size_t i = 0; i < pi_to_oracle.size(); ++i)
      q.set(pi_to_oracle[i], x.get(i));
    return q;
  }
  BitVec from_oracle(const BitVec& y) const {
    BitVec r(po_from_oracle.size());
    for (size_t i = 0; i < po_from_oracle.size(); ++i)
      r.set(i, y.get(po_from_oracle[i]));
    return r;
  }
};

std::vector<char> key_only_map(const Netlist& n) {
  SupportMap sm(n);
  size_t npi = n.inputs.size(), nsrc = sm.num_sources();
  std::vector<char> ko(n.num_nets(), 0);
  for (NetId id = 0; id < n.num_nets(); ++id)
    ko[id] = sm.support_empty(id) || sm.support_within(id, npi, nsrc);
  return ko;
}

double validate_key(const Netlist& locked, Oracle& oracle,
                    const OracleWiring& w, const BitVec& key, uint64_t seed) {
  size_t total = 0, good = 0;
  if (oracle.has_netlist()) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (size_t i = 0; i < kValidationProbes; ++i) {
      BitVec x = rng.bits(locked.inputs.size());
      BitVec want = w.from_oracle(oracle.query(w.to_oracle(x)));
      BitVec got = simulate(locked, x, key);
      ++total;
      if (got == want) ++good;
    }
  } else {
    for (const auto& [qx, qy] : oracle.transcript_pairs()) {
      BitVec x(locked.inputs.size());
      for (size_t i = 0; i < x.width(); ++i) x.set(i, qx.get(w.pi_to_oracle[i]));
      BitVec got = simulate(locked, x, key);
      ++total;
      if (got == w.from_oracle(qy)) ++good;
    }
  }
  return total ? static_cast<double>(good) / static_cast<double>(total) : 1.0;
}

}  // namespace

// ----------------------------------------------------------------- oracle

Oracle Oracle::from_netlist(const Netlist& activated) {
  if (!activated.keys.empty())
    throw Error("oracle netlist still has key inputs");
  Oracle o;
  o.netlist_ = activated;
  for (NetId id : activated.inputs) o.in_names_.push_back(activated.net(id).name);
  for (NetId id : activated.outputs) o.out_names_.push_back(activated.net(id).name);
  return o;
}

Oracle Oracle::from_transcript(std::vector<std::string> input_names,
                               std::vector<std::string> output_names,
                               std::vector<std::pair<BitVec, BitVec>> pairs) {
  Oracle o;
  o.in_names_ = std::move(input_names);
  o.out_names_ = std::move(output_names);
  for (auto& [x, y] : pairs) {
    if (x.width() != o.in_names_.size() || y.width() != o.out_names_.size())
      throw Error("transcript entry width mismatch");
  }
  o.pairs_ = std::move(pairs);
  return o;
}

const Netlist& Oracle::hidden_netlist() const {
  if (!netlist_) throw Error("oracle has no netlist");
  return *netlist_;
}

BitVec Oracle::query(const BitVec& x) {
  if (x.width() != in_names_.size())
    throw Error("oracle query width mismatch");
  ++queries_;
  if (netlist_) {
    BitVec y = simulate(*netlist_, x, std::nullopt);
    log_.emplace_back(x, y);
    return y;
  }
  for (const auto& [qx, qy] : pairs_) {
    if (qx == x) {
      log_.emplace_back(x, qy);
      return qy;
    }
  }
  throw Error("query not covered by the transcript: " + x.to_bits());
}

std::vector<BitVec> Oracle::query_many(const std::vector<BitVec>& xs) {
  std::vector<BitVec> ys;
  ys.reserve(xs.size());
  for (const BitVec& x : xs) ys.push_back(query(x));
  return ys;
}

// ----------------------------------------------------------------- report

const char* to_string(AttackOutcome o) {
  switch (o) {
    case AttackOutcome::KeyRecovered: return "key-recovered";
    case AttackOutcome::DesignExtracted: return "design-extracted";
    case AttackOutcome::NoSolution: return "no-solution";
    case AttackOutcome::NotApplicable: return "not-applicable";
  }
  return "?";
}

namespace {
AttackOutcome outcome_from_string(const std::string& s) {
  if (s == "key-recovered") return AttackOutcome::KeyRecovered;
  if (s == "design-extracted") return AttackOutcome::DesignExtracted;
  if (s == "no-solution") return AttackOutcome::NoSolution;
  if (s == "not-applicable") return AttackOutcome::NotApplicable;
  throw Error("unknown attack outcome: " + s);
}
}  // namespace

std::string AttackReport::to_json(bool include_timing, int indent) const {
  json j;
  j["format"] = "gatelock-attack-report-v1";
  j["attack"] = attack;
  j["outcome"] = to_string(outcome);
  if (key_bits) j["key"] = key_bits->to_bits();
  if (!key_inputs.empty()) j["key_inputs"] = key_inputs;
  if (!keys.empty()) {
    json a = json::array();
    for (const BitVec& k : keys) a.push_back(k.to_bits());
    j["keys"] = a;
  }
  j["iterations"] = iterations;
  j["oracle_queries"] = oracle_queries;
  j["conflicts"] = conflicts;
  if (include_timing) j["wall_seconds"] = wall_seconds;
  if (!bco.empty()) j["bco"] = bco;
  if (lck_bits) j["lck"] = lck_bits->to_bits();
  if (!dips.empty()) {
    json a = json::array();
    for (const auto& [x, y] : dips)
      a.push_back({{"x", x.to_bits()}, {"y", y.to_bits()}});
    j["dips"] = a;
    j["dips_truncated"] = dips_truncated;
  }
  if (probe_agreement >= 0) j["probe_agreement"] = probe_agreement;
  if (!notes.empty()) j["notes"] = notes;
  if (!extracted_path.empty()) j["extracted_path"] = extracted_path;
  return j.dump(indent) + "\n";
}

AttackReport AttackReport::from_json_text(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "gatelock-attack-report-v1")
    throw Error("not an attack report (bad format tag)");
  AttackReport r;
  r.attack = j.at("attack").get<std::string>();
  r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  if (j.contains("key")) r.key_bits = BitVec::from_bits(j["key"].get<std::string>());
  if (j.contains("key_inputs"))
    r.key_inputs = j["key_inputs"].get<std::vector<std::string>>();
  if (j.contains("keys"))
    for (const json& k : j["keys"])
      r.keys.push_back(BitVec::from_bits(k.get<std::string>()));
  r.iterations = j.value("iterations", int64_t{0});
  r.oracle_queries = j.value("oracle_queries", int64_t{0});
  r.conflicts = j.value("conflicts", int64_t{0});
  r.wall_seconds = j.value("wall_seconds", 0.0);
  if (j.contains("bco")) r.bco = j["bco"].get<std::vector<std::string>>();
  if (j.contains("lck")) r.lck_bits = BitVec::from_bits(j["lck"].get<std::string>());
  if (j.contains("dips")) {
    for (const json& d : j["dips"])
      r.dips.emplace_back(BitVec::from_bits(d.at("x").get<std::string>()),
                          BitVec::from_bits(d.at("y").get<std::string>()));
    r.dips_truncated = j.value("dips_truncated", false);
  }
  r.probe_agreement = j.value("probe_agreement", -1.0);
  r.notes = j.value("notes", std::string());
  r.extracted_path = j.value("extracted_path", std::string());
  return r;
}

// ------------------------------------------------------------- BCO scan

CipherOutputScan find_cipher_outputs(const Netlist& locked) {
  CipherOutputScan scan;
  if (locked.keys.empty()) {
    scan.reason = "no key inputs";
    return scan;
  }
  SupportMap sm(locked);
  size_t npi = locked.inputs.size(), nsrc = sm.num_sources();
  auto fan = locked.fanout_map();

  for (const Gate& g : locked.gates) {
    NetId o = g.output;
    if (sm.support_empty(o) || !sm.support_within(o, npi, nsrc)) continue;
    bool feeds_pi_logic = false;
    for (uint32_t ci : fan[o]) {
      NetId co = locked.gates[ci].output;
      for (size_t s = 0; s < npi && !feeds_pi_logic; ++s)
        if (sm.depends_on(co, s)) feeds_pi_logic = true;
      if (feeds_pi_logic) break;
    }
    if (feeds_pi_logic) scan.candidate_ids.push_back(o);
  }
  std::sort(scan.candidate_ids.begin(), scan.candidate_ids.end());
  for (NetId id : scan.candidate_ids)
    scan.candidates.push_back(locked.net(id).name);

  bool size_ok = false;
  for (int b : kSupportedBlockBits)
    if (scan.candidate_ids.size() == static_cast<size_t>(b)) size_ok = true;
  if (!size_ok) {
    scan.reason = "candidate count " + std::to_string(scan.candidate_ids.size()) +
                  " is not a supported block width";
    return scan;
  }
  std::vector<size_t> u = sm.union_support(scan.candidate_ids);
  size_t covered = 0;
  for (size_t s : u)
    if (s >= npi) ++covered;
  if (covered != locked.keys.size()) {
    scan.reason = "candidate supports cover " + std::to_string(covered) + " of " +
                  std::to_string(locked.keys.size()) + " key inputs";
    return scan;
  }
  scan.valid = true;
  return scan;
}

// ------------------------------------------------------------ sat attack

namespace {

struct SatAttackEngine {
  const Netlist& L;
  Oracle& oracle;
  const AttackBudget& budget;
  OracleWiring wiring;
  Deadline dl;

  sat::Solver s;
  FoldEnc enc{s};
  std::vector<uint32_t> order;
  std::vector<char> key_only;
  std::vector<EncVal> valA, valB;
  std::vector<sat::Lit> pi_lits, keyA, keyB;
  sat::Lit act{};
  bool infeasible = false;

  AttackReport rep;

  SatAttackEngine(const Netlist& l, Oracle& o, const AttackBudget& b)
      : L(l), oracle(o), budget(b), wiring(OracleWiring::make(l, o)) {
    dl.max_seconds = budget.max_seconds;
    rep.attack = "sat";
  }

  sat::SolveLimits limits() const {
    sat::SolveLimits lim;
    lim.max_seconds = dl.remaining();
    if (budget.max_conflicts >= 0) {
      int64_t left = budget.max_conflicts - s.conflicts();
      lim.max_conflicts = left > 0 ? left : 0;
    }
    return lim;
  }

  bool out_of_budget() const {
    if (dl.expired()) return true;
    if (budget.max_conflicts >= 0 && s.conflicts() >= budget.max_conflicts)
      return true;
    return false;
  }

  void encode_side(std::vector<EncVal>& val, std::vector<sat::Lit>& keys) {
    val.assign(L.num_nets(), EncVal{});
    for (size_t i = 0; i < L.inputs.size(); ++i) val[L.inputs[i]] = ev_lit(pi_lits[i]);
    for (size_t i = 0; i < L.keys.size(); ++i) val[L.keys[i]] = ev_lit(keys[i]);
    for (uint32_t gi : order) {
      const Gate& g = L.gates[gi];
      std::vector<EncVal> in;
      in.reserve(g.inputs.size());
      for (NetId id : g.inputs) in.push_back(val[id]);
      val[g.output] = enc.gate(g.kind, std::move(in));
    }
  }

  void build_pair_search() {
    order = L.topo_order();
    key_only = key_only_map(L);
    for (size_t i = 0; i < L.inputs.size(); ++i)
      pi_lits.push_back(sat::mk_lit(s.new_var(), false));
    for (size_t i = 0; i < L.keys.size(); ++i)
      keyA.push_back(sat::mk_lit(s.new_var(), false));
    for (size_t i = 0; i < L.keys.size(); ++i)
      keyB.push_back(sat::mk_lit(s.new_var(), false));
    encode_side(valA, keyA);
    encode_side(valB, keyB);

    act = sat::mk_lit(s.new_var(), false);
    std::vector<sat::Lit> diff;
    diff.push_back(~act);
    for (NetId po : L.outputs) {
      EncVal d = enc.xor2(valA[po], valB[po]);
      if (d.c == 1) return;  // outputs always differ: any input distinguishes
      if (d.c < 0) diff.push_back(d.lit);
    }
    if (diff.size() == 1) {
      // No output can ever differ: the key never matters; converge at once.
      s.add_clause({~act});
      return;
    }
    s.add_clause(diff);
  }

  // One constant-input copy of the circuit per side, constrained to the
  // oracle answer. Key-only cones are shared with the pair-search encoding.
  void add_io_constraint(const BitVec& x, const BitVec& y) {
    for (int side = 0; side < 2; ++side) {
      const std::vector<EncVal>& shared = side ? valB : valA;
      const std::vector<sat::Lit>& keys = side ? keyB : keyA;
      std::vector<EncVal> val(L.num_nets());
      for (size_t i = 0; i < L.inputs.size(); ++i)
        val[L.inputs[i]] = ev_const(x.get(i));
      for (size_t i = 0; i < L.keys.size(); ++i) val[L.keys[i]] = ev_lit(keys[i]);
      for (uint32_t gi : order) {
        const Gate& g = L.gates[gi];
        NetId o = g.output;
        if (key_only[o]) {
          val[o] = shared[o];
          continue;
        }
        std::vector<EncVal> in;
        in.reserve(g.inputs.size());
        for (NetId id : g.inputs) in.push_back(val[id]);
        val[o] = enc.gate(g.kind, std::move(in));
      }
      for (size_t i = 0; i < L.outputs.size(); ++i) {
        EncVal v = val[L.outputs[i]];
        int want = y.get(i);
        if (v.c >= 0) {
          if (v.c != want) infeasible = true;
        } else {
          s.add_clause({want ? v.lit : ~v.lit});
        }
      }
    }
    if (infeasible) s.add_clause(std::initializer_list<sat::Lit>{});
  }

  AttackReport run() {
    if (L.keys.empty()) throw Error("design has no key inputs");
    build_pair_search();

    for (;;) {
      if (budget.max_iterations >= 0 && rep.iterations >= budget.max_iterations) {
        rep.outcome = AttackOutcome::NoSolution;
        rep.notes = "iteration budget exhausted";
        return finish();
      }
      if (out_of_budget()) {
        rep.outcome = AttackOutcome::NoSolution;
        rep.notes = "budget exhausted during the distinguishing-input search";
        return finish();
      }
      const sat::Lit assume[1] = {act};
      sat::Status st = s.solve(std::span<const sat::Lit>(assume, 1), limits());
      if (st == sat::Status::Limit) {
        rep.outcome = AttackOutcome::NoSolution;
        rep.notes = "budget exhausted during the distinguishing-input search";
        return finish();
      }
      if (st == sat::Status::Unsat) break;  // converged

      BitVec x(L.inputs.size());
      for (size_t i = 0; i < pi_lits.size(); ++i)
        x.set(i, s.model_value(pi_lits[i]) ? 1 : 0);
      BitVec y;
      try {
        y = wiring.from_oracle(oracle.query(wiring.to_oracle(x)));
      } catch (const Error& e) {
        rep.outcome = AttackOutcome::NoSolution;
        rep.notes = std::string("oracle query failed: ") + e.what();
        return finish();
      }
      if (rep.dips.size() < kMaxRecordedDips) {
        rep.dips.emplace_back(x, y);
      } else {
        rep.dips_truncated = true;
      }
      add_io_constraint(x, y);
      ++rep.iterations;
      if (infeasible) {
        rep.outcome = AttackOutcome::NoSolution;
        rep.notes = "no key can reproduce the oracle responses";
        return finish();
      }
    }

    sat::Status st = s.solve({}, limits());
    if (st == sat::Status::Limit) {
      rep.outcome = AttackOutcome::NoSolution;
      rep.notes = "budget exhausted extracting the final key";
      return finish();
    }
    if (st == sat::Status::Unsat) {
      rep.outcome = AttackOutcome::NoSolution;
      rep.notes = "no key can reproduce the oracle responses";
      return finish();
    }
    BitVec key(L.keys.size());
    for (size_t i = 0; i < keyA.size(); ++i)
      key.set(i, s.model_value(keyA[i]) ? 1 : 0);
    rep.key_bits = key;
    rep.probe_agreement = validate_key(L, oracle, wiring, key, budget.seed);
    if (rep.probe_agreement == 1.0) {
      rep.outcome = AttackOutcome::KeyRecovered;
    } else {
      rep.outcome = AttackOutcome::NoSolution;
      rep.notes = "recovered key failed probe validation";
    }
    return finish();
  }

  AttackReport finish() {
    for (NetId id : L.keys) rep.key_inputs.push_back(L.net(id).name);
    rep.oracle_queries = static_cast<int64_t>(oracle.query_count());
    rep.conflicts = s.conflicts();
    rep.wall_seconds = dl.elapsed();
    return std::move(rep);
  }
};

}  // namespace

AttackReport sat_attack(const Netlist& locked, Oracle& oracle,
                        const AttackBudget& budget) {
  SatAttackEngine engine(locked, oracle, budget);
  return engine.run();
}

// --------------------------------------------------------------- removal

AttackReport removal_attack(const Netlist& locked, Oracle& oracle,
                            const AttackBudget& budget) {
  Deadline dl;
  dl.max_seconds = budget.max_seconds;
  AttackReport rep;
  rep.attack = "removal";

  CipherOutputScan scan = find_cipher_outputs(locked);
  rep.bco = scan.candidates;
  if (!scan.valid) {
    rep.outcome = AttackOutcome::NotApplicable;
    rep.notes = "boundary scan failed: " + scan.reason;
    rep.wall_seconds = dl.elapsed();
    return rep;
  }

  // Gates inside any candidate cone are scheduled for deletion.
  std::unordered_set<size_t> cone_gates;
  for (NetId root : scan.candidate_ids) {
    Cone c = logic_cone(locked, root);
    cone_gates.insert(c.gates.begin(), c.gates.end());
  }
  std::unordered_set<NetId> bco_set(scan.candidate_ids.begin(),
                                    scan.candidate_ids.end());

  auto drv = locked.driver_map();
  std::vector<char> net_removed(locked.num_nets(), 0);
  for (size_t gi : cone_gates) {
    NetId o = locked.gates[gi].output;
    if (!bco_set.count(o)) net_removed[o] = 1;
  }
  for (NetId po : locked.outputs) {
    if (net_removed[po] || bco_set.count(po)) {
      rep.outcome = AttackOutcome::NotApplicable;
      rep.notes = "a primary output lies inside the recovered cipher cone";
      rep.wall_seconds = dl.elapsed();
      return rep;
    }
  }
  for (size_t gi = 0; gi < locked.num_gates(); ++gi) {
    if (cone_gates.count(gi)) continue;
    for (NetId in : locked.gates[gi].inputs) {
      if (net_removed[in]) {
        rep.outcome = AttackOutcome::NotApplicable;
        rep.notes = "cipher cone logic feeds non-boundary nets";
        rep.wall_seconds = dl.elapsed();
        return rep;
      }
    }
  }

  // Which original key inputs survive (still read by kept gates).
  std::vector<char> key_used(locked.num_nets(), 0);
  for (size_t gi = 0; gi < locked.num_gates(); ++gi) {
    if (cone_gates.count(gi)) continue;
    for (NetId in : locked.gates[gi].inputs) key_used[in] = 1;
  }

  Netlist lc;
  std::vector<NetId> map(locked.num_nets(), kNoNet);
  for (NetId id : locked.inputs)
    map[id] = lc.add_net(locked.net(id).name, NetRole::Input);
  for (NetId id : locked.keys)
    if (key_used[id]) map[id] = lc.add_net(locked.net(id).name, NetRole::Key);
  std::vector<std::string> lck_names;
  for (NetId id : scan.candidate_ids) {
    std::string name = "lck" + std::to_string(lck_names.size());
    while (lc.has(name) || locked.has(name)) name += "_";
    map[id] = lc.add_net(name, NetRole::Key);
    lck_names.push_back(name);
  }
  for (size_t gi = 0; gi < locked.num_gates(); ++gi) {
    if (cone_gates.count(gi)) continue;
    const Gate& g = locked.gates[gi];
    std::vector<NetId> in;
    in.reserve(g.inputs.size());
    for (NetId id : g.inputs) {
      if (map[id] == kNoNet)
        map[id] = lc.add_net(locked.net(id).name, NetRole::Internal);
      in.push_back(map[id]);
    }
    if (map[g.output] == kNoNet)
      map[g.output] = lc.add_net(locked.net(g.output).name, NetRole::Internal);
    lc.add_gate(g.kind, std::move(in), map[g.output]);
  }
  for (NetId po : locked.outputs) lc.mark_output(map[po]);
  lc.validate();

  AttackBudget inner_budget = budget;
  if (budget.max_seconds > 0) inner_budget.max_seconds = dl.remaining();
  AttackReport inner = sat_attack(lc, oracle, inner_budget);
  rep.iterations = inner.iterations;
  rep.oracle_queries = inner.oracle_queries;
  rep.conflicts = inner.conflicts;
  rep.dips = std::move(inner.dips);
  rep.dips_truncated = inner.dips_truncated;
  rep.key_inputs = inner.key_inputs;
  if (inner.outcome != AttackOutcome::KeyRecovered) {
    rep.outcome = inner.outcome;
    rep.notes = "inner key recovery: " +
                (inner.notes.empty() ? std::string(to_string(inner.outcome))
                                     : inner.notes);
    rep.wall_seconds = dl.elapsed();
    return rep;
  }
  rep.key_bits = inner.key_bits;
  size_t nlck = lck_names.size();
  size_t nkeep = lc.keys.size() - nlck;
  BitVec lck(nlck);
  for (size_t i = 0; i < nlck; ++i) lck.set(i, inner.key_bits->get(nkeep + i));
  rep.lck_bits = lck;

  Assignment bind(lc);
  bind.bind(lc.keys, *inner.key_bits);
  Netlist extracted = simplify(propagate_constants(lc, bind));

  OracleWiring w = OracleWiring::make(extracted, oracle);
  rep.probe_agreement = validate_key(extracted, oracle, w, BitVec(0), budget.seed);
  if (rep.probe_agreement == 1.0) {
    rep.outcome = AttackOutcome::DesignExtracted;
  } else {
    rep.outcome = AttackOutcome::NoSolution;
    rep.notes = "extracted design failed probe validation";
  }
  rep.extracted = std::move(extracted);
  rep.wall_seconds = dl.elapsed();
  return rep;
}

// -------------------------------------------------------------- algebraic

AttackReport algebraic_attack(const Netlist& locked, const AttackReport& removal,
                              const std::optional<CipherSpec>& hint,
                              const AttackBudget& budget) {
  Deadline dl;
  dl.max_seconds = budget.max_seconds;
  AttackReport rep;
  rep.attack = "algebraic";
  rep.bco = removal.bco;
  rep.lck_bits = removal.lck_bits;

  if (removal.bco.empty() || !removal.lck_bits ||
      removal.lck_bits->width() != removal.bco.size()) {
    rep.outcome = AttackOutcome::NotApplicable;
    rep.notes = "the removal step provided no usable boundary constants";
    rep.wall_seconds = dl.elapsed();
    return rep;
  }

  std::vector<NetId> roots;
  for (const std::string& name : removal.bco) {
    NetId id = locked.find(name);
    if (id == kNoNet) {
      rep.outcome = AttackOutcome::NotApplicable;
      rep.notes = "boundary net " + name + " is missing from the design";
      rep.wall_seconds = dl.elapsed();
      return rep;
    }
    roots.push_back(id);
  }

  Netlist bc;
  try {
    bc = extract_cones(locked, roots);
  } catch (const Error& e) {
    rep.outcome = AttackOutcome::NotApplicable;
    rep.notes = std::string("boundary cone extraction failed: ") + e.what();
    rep.wall_seconds = dl.elapsed();
    return rep;
  }
  if (!bc.inputs.empty()) {
    rep.outcome = AttackOutcome::NotApplicable;
    rep.notes = "boundary cones depend on primary inputs";
    rep.wall_seconds = dl.elapsed();
    return rep;
  }

  CnfFormula f = tseitin_encode(bc);
  sat::Solver s;
  while (s.num_vars() < f.num_vars) s.new_var();
  for (const auto& cl : f.clauses) {
    std::vector<sat::Lit> c;
    c.reserve(cl.size());
    for (int32_t l : cl)
      c.push_back(sat::mk_lit(std::abs(l) - 1, l < 0));
    s.add_clause(c);
  }
  for (size_t j = 0; j < bc.outputs.size(); ++j) {
    int32_t l = f.lit(bc.outputs[j], removal.lck_bits->get(j) == 0);
    s.add_clause({sat::mk_lit(std::abs(l) - 1, l < 0)});
  }

  sat::SolveLimits lim;
  lim.max_seconds = dl.remaining();
  lim.max_conflicts = budget.max_conflicts;
  sat::Status st = s.solve({}, lim);
  rep.conflicts = s.conflicts();
  rep.iterations = 1;
  if (st == sat::Status::Limit) {
    rep.outcome = AttackOutcome::NoSolution;
    rep.notes = "budget exhausted before a key satisfied the boundary constants";
    rep.wall_seconds = dl.elapsed();
    return rep;
  }
  if (st == sat::Status::Unsat) {
    rep.outcome = AttackOutcome::NoSolution;
    rep.notes = "no key satisfies the boundary constants";
    rep.wall_seconds = dl.elapsed();
    return rep;
  }

  BitVec raw(bc.keys.size());
  for (size_t i = 0; i < bc.keys.size(); ++i) {
    int32_t v = f.net_var[bc.keys[i]];
    raw.set(i, s.model_value(sat::mk_lit(v - 1, false)) ? 1 : 0);
  }
  // The model must reproduce the boundary constants by simulation.
  Assignment a(bc);
  a.bind(bc.keys, raw);
  Assignment full = simulate_full(bc, a);
  for (size_t j = 0; j < bc.outputs.size(); ++j)
    if (full.get(bc.outputs[j]) != removal.lck_bits->get(j))
      throw Error("internal: algebraic model fails simulation cross-check");

  // Report in the locked design's key declaration order.
  std::unordered_map<std::string, size_t> key_pos;
  for (size_t p = 0; p < locked.keys.size(); ++p)
    key_pos[locked.net(locked.keys[p]).name] = p;
  std::vector<std::pair<size_t, size_t>> order;
  order.reserve(bc.keys.size());
  for (size_t i = 0; i < bc.keys.size(); ++i)
    order.push_back({key_pos.at(bc.net(bc.keys[i]).name), i});
  std::sort(order.begin(), order.end());
  BitVec key(bc.keys.size());
  for (size_t j = 0; j < order.size(); ++j) {
    key.set(j, raw.get(order[j].second));
    rep.key_inputs.push_back(bc.net(bc.keys[order[j].second]).name);
  }
  rep.key_bits = key;
  rep.outcome = AttackOutcome::KeyRecovered;
  if (hint && hint->key_bits != static_cast<int>(key.width()))
    rep.notes = "hinted cipher key width " + std::to_string(hint->key_bits) +
                " does not match the recovered " + std::to_string(key.width()) +
                " bits";
  rep.wall_seconds = dl.elapsed();
  return rep;
}

// ------------------------------------------------------------ brute force

AttackReport brute_force_key_search(const Netlist& locked, Oracle& oracle,
                                    const AttackBudget& budget) {
  Deadline dl;
  dl.max_seconds = budget.max_seconds;
  AttackReport rep;
  rep.attack = "brute-force";
  size_t nk = locked.keys.size();
  if (nk == 0) throw Error("design has no key inputs");
  if (nk > 24) throw Error("key space too large for exhaustive search");
  OracleWiring w = OracleWiring::make(locked, oracle);

  // Probe set: random queries (netlist oracle) or the whole transcript.
  std::vector<std::pair<BitVec, BitVec>> probes;
  if (oracle.has_netlist()) {
    Rng rng(budget.seed ^ 0xb5ad4eceda1ce2a9ULL);
    for (size_t i = 0; i < 64; ++i) {
      BitVec x = rng.bits(locked.inputs.size());
      probes.emplace_back(x, w.from_oracle(oracle.query(w.to_oracle(x))));
    }
  } else {
    for (const auto& [qx, qy] : oracle.transcript_pairs()) {
      BitVec x(locked.inputs.size());
      for (size_t i = 0; i < x.width(); ++i) x.set(i, qx.get(w.pi_to_oracle[i]));
      probes.emplace_back(x, w.from_oracle(qy));
    }
    if (probes.empty()) throw Error("transcript oracle has no queries");
  }

  uint64_t total = uint64_t{1} << nk;
  size_t lanes = total < 64 ? static_cast<size_t>(total) : 64;
  uint64_t batches = (total + lanes - 1) / lanes;
  uint64_t lane_mask = lanes == 64 ? ~uint64_t{0} : ((uint64_t{1} << lanes) - 1);
  auto srcs = locked.sources();
  std::vector<std::vector<uint64_t>> found(batches);
  std::atomic<bool> timed_out{false};

#pragma omp parallel for schedule(dynamic, 4)
  for (int64_t bi = 0; bi < static_cast<int64_t>(batches); ++bi) {
    if (timed_out.load(std::memory_order_relaxed)) continue;
    if (dl.expired()) {
      timed_out.store(true, std::memory_order_relaxed);
      continue;
    }
    BitTable in(srcs.size(), lanes);
    for (size_t c = 0; c < lanes; ++c) {
      uint64_t kint = static_cast<uint64_t>(bi) * lanes + c;
      for (size_t i = 0; i < nk; ++i)
        in.set(locked.inputs.size() + i, c,
               static_cast<int>((kint >> (nk - 1 - i)) & 1));
    }
    uint64_t dead = 0;
    for (const auto& [x, y] : probes) {
      set_constant_rows(in, 0, x);
      BitTable out = simulate_batch_serial(locked, srcs, in, locked.outputs);
      for (size_t r = 0; r < locked.outputs.size(); ++r) {
        uint64_t expect = y.get(r) ? ~uint64_t{0} : 0;
        dead |= (out.row(r)[0] ^ expect) & lane_mask;
      }
      if ((dead & lane_mask) == lane_mask) break;
    }
    uint64_t alive = ~dead & lane_mask;
    while (alive) {
      unsigned c = static_cast<unsigned>(__builtin_ctzll(alive));
      alive &= alive - 1;
      found[bi].push_back(static_cast<uint64_t>(bi) * lanes + c);
    }
  }

  if (timed_out) {
    rep.outcome = AttackOutcome::NoSolution;
    rep.notes = "time budget exhausted before the key space was covered";
    rep.oracle_queries = static_cast<int64_t>(oracle.query_count());
    rep.wall_seconds = dl.elapsed();
    return rep;
  }

  for (const auto& batch : found) {
    for (uint64_t kint : batch) {
      BitVec key(nk);
      for (size_t i = 0; i < nk; ++i)
        key.set(i, static_cast<int>((kint >> (nk - 1 - i)) & 1));
      if (oracle.has_netlist()) {
        EquivOptions eo;
        eo.key_a = key;
        EquivResult er = check_equivalence(locked, oracle.hidden_netlist(), eo);
        if (er.verdict != EquivVerdict::Equivalent) continue;
      }
      rep.keys.push_back(key);
    }
  }
  if (!oracle.has_netlist() && !rep.keys.empty())
    rep.notes = "keys are consistent with the transcript; no oracle to confirm";

  rep.iterations = static_cast<int64_t>(total);
  rep.oracle_queries = static_cast<int64_t>(oracle.query_count());
  for (NetId id : locked.keys) rep.key_inputs.push_back(locked.net(id).name);
  if (!rep.keys.empty()) {
    rep.key_bits = rep.keys.front();
    rep.outcome = AttackOutcome::KeyRecovered;
  } else {
    rep.outcome = AttackOutcome::NoSolution;
    rep.notes = "no key reproduces the oracle responses";
  }
  rep.wall_seconds = dl.elapsed();
  return rep;
}

}  // namespace gatelock
