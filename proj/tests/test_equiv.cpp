// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "gatelock/bench_io.hpp"
#include "gatelock/equiv.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/lock.hpp"
#include "gatelock/sim.hpp"
#include "gatelock/transform.hpp"
#include "support.hpp"

using namespace gatelock;

namespace {
Netlist majority() {
  return read_bench_file(GATELOCK_SOURCE_DIR "/benches/majority.bench");
}

// Exhaustive agreement over all input patterns (inputs must be few).
bool exhaustively_equal(const Netlist& a, const Netlist& b) {
  REQUIRE(a.inputs.size() == b.inputs.size());
  REQUIRE(a.inputs.size() <= 16);
  for (uint64_t p = 0; p < (1ull << a.inputs.size()); ++p) {
    BitVec x = BitVec::from_u64(p, a.inputs.size());
    if (simulate(a, x) != simulate(b, x)) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("a circuit equals itself") {
  Netlist n = majority();
  EquivResult r = check_equivalence(n, n);
  CHECK(r.verdict == EquivVerdict::Equivalent);
}

TEST_CASE("simplification is equivalence-preserving") {
  Netlist n = testing::gen_random_netlist(31, 12, 180, 5);
  Netlist s = simplify(n);
  EquivResult r = check_equivalence(n, s);
  CHECK(r.verdict == EquivVerdict::Equivalent);
}

TEST_CASE("locked design: secret key equivalent, wrong key refuted") {
  Netlist n = majority();
  LockRecord rec;
  Netlist locked = lock_xor(n, 2, /*seed=*/5, rec);

  EquivOptions right;
  right.key_b = rec.key;
  CHECK(check_equivalence(n, locked, right).verdict ==
        EquivVerdict::Equivalent);

  BitVec wrong = rec.key;
  wrong.flip(0);
  EquivOptions bad;
  bad.key_b = wrong;
  EquivResult r = check_equivalence(n, locked, bad);
  REQUIRE(r.verdict == EquivVerdict::Inequivalent);

  // The counterexample is real: re-simulate both sides.
  CHECK(simulate(n, r.counterexample) !=
        simulate(locked, r.counterexample, wrong));
  REQUIRE(r.key_b.has_value());
  CHECK(*r.key_b == wrong);
}

TEST_CASE("free keys make a lockable difference satisfiable") {
  Netlist n = majority();
  LockRecord rec;
  Netlist locked = lock_xor(n, 2, /*seed=*/6, rec);

  // Exists a key under which they differ? Yes for any real lock.
  EquivOptions free_keys;
  free_keys.bind_keys = false;
  EquivResult r = check_equivalence(n, locked, free_keys);
  REQUIRE(r.verdict == EquivVerdict::Inequivalent);
  REQUIRE(r.key_b.has_value());
  CHECK(simulate(n, r.counterexample) !=
        simulate(locked, r.counterexample, *r.key_b));
}

TEST_CASE("missing key binding is an error") {
  Netlist n = majority();
  LockRecord rec;
  Netlist locked = lock_xor(n, 2, /*seed=*/7, rec);
  CHECK_THROWS_AS(check_equivalence(n, locked), Error);

  EquivOptions opt;
  opt.key_b = BitVec::from_bits("1");  // wrong width
  CHECK_THROWS_AS(check_equivalence(n, locked, opt), Error);
}

TEST_CASE("interface mismatches are rejected") {
  Netlist a = majority();
  Netlist b = parse_bench("INPUT(p)\nINPUT(q)\nOUTPUT(y)\ny = AND(p, q)\n");
  CHECK_THROWS_AS(check_equivalence(a, b), Error);
}

TEST_CASE("verdicts agree with exhaustive simulation") {
  for (uint64_t seed : {41u, 42u, 43u, 44u}) {
    Netlist a = testing::gen_random_netlist(seed, 9, 110, 4);
    Netlist b = simplify(a);
    bool same = exhaustively_equal(a, b);
    CHECK(same);  // simplify must preserve
    CHECK((check_equivalence(a, b).verdict == EquivVerdict::Equivalent) ==
          same);

    // Mutate one gate kind; flag a real change, accept a masked one.
    Netlist c = a;
    for (Gate& g : c.gates)
      if (g.kind == GateKind::And) {
        g.kind = GateKind::Nand;
        break;
      }
    bool same2 = exhaustively_equal(a, c);
    EquivResult r = check_equivalence(a, c);
    CHECK((r.verdict == EquivVerdict::Equivalent) == same2);
    if (r.verdict == EquivVerdict::Inequivalent)
      CHECK(simulate(a, r.counterexample) != simulate(c, r.counterexample));
  }
}

TEST_CASE("budgets degrade to unknown") {
  Netlist host = testing::gen_random_netlist(55, 36, 300, 6);
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  LockRecord rec;
  Netlist locked = lock_cipher_xor(host, *spec, /*seed=*/8, rec);

  EquivOptions opt;
  opt.key_b = rec.key;
  opt.limits.max_conflicts = 1;
  EquivResult r = check_equivalence(host, locked, opt);
  CHECK(r.verdict == EquivVerdict::Unknown);
}
