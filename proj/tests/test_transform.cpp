// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "gatelock/analyze.hpp"
#include "gatelock/bench_io.hpp"
#include "gatelock/cipher.hpp"
#include "gatelock/equiv.hpp"
#include "gatelock/sim.hpp"
#include "gatelock/transform.hpp"
#include "support.hpp"

using namespace gatelock;

namespace {
Netlist majority() {
  return read_bench_file(GATELOCK_SOURCE_DIR "/benches/majority.bench");
}
}  // namespace

TEST_CASE("constant inputs fold through") {
  Netlist n = majority();
  Assignment fixed(n);
  fixed.set(n.find("a1"), 1);
  fixed.set(n.find("a2"), 1);
  fixed.set(n.find("a3"), 0);
  Netlist f = propagate_constants(n, fixed);
  CHECK(f.inputs.empty());
  REQUIRE(f.outputs.size() == 1);
  REQUIRE(f.gates.size() == 1);
  CHECK(f.gates[0].kind == GateKind::Const1);
  CHECK(f.net(f.outputs[0]).name == "y");
}

TEST_CASE("partial binding keeps the residual function") {
  Netlist n = majority();
  Assignment fixed(n);
  fixed.set(n.find("a1"), 1);  // majority(1,b,c) = b | c
  Netlist f = propagate_constants(n, fixed);
  CHECK(f.inputs.size() == 2);
  for (uint64_t p = 0; p < 4; ++p) {
    BitVec bc = BitVec::from_u64(p, 2);
    BitVec whole = BitVec::concat(BitVec::from_bits("1"), bc);
    CHECK(simulate(f, bc) == simulate(n, whole));
  }
}

TEST_CASE("simplify removes textbook redundancy") {
  Netlist n = parse_bench(
      "INPUT(a)\nINPUT(b)\nOUTPUT(y)\nOUTPUT(z)\nOUTPUT(w)\n"
      "one = CONST1()\n"
      "t1 = AND(a, one)\n"      // AND with 1 -> a
      "n1 = NOT(a)\n"
      "n2 = NOT(n1)\n"          // double negation -> a
      "d1 = AND(a, b)\n"
      "d2 = AND(a, b)\n"        // duplicate of d1
      "y = XOR(t1, b)\n"
      "z = XOR(n2, d1)\n"
      "w = OR(d2, b)\n");
  Netlist s = simplify(n);
  CHECK(s.gates.size() < n.gates.size());

  NetlistStats st = stats(s);
  CHECK(st.by_kind.count(GateKind::Not) == 0);
  CHECK(st.by_kind.count(GateKind::Const1) == 0);
  CHECK(st.by_kind[GateKind::And] <= 1);

  EquivResult r = check_equivalence(n, s);
  CHECK(r.verdict == EquivVerdict::Equivalent);
}

TEST_CASE("simplify preserves random netlists") {
  for (uint64_t seed : {11u, 12u, 13u}) {
    Netlist n = testing::gen_random_netlist(seed, 14, 200, 6);
    Netlist s = simplify(n);
    s.validate();
    CHECK(s.gates.size() <= n.gates.size());

    // Interface identical, in order.
    REQUIRE(s.inputs.size() == n.inputs.size());
    REQUIRE(s.outputs.size() == n.outputs.size());
    for (size_t i = 0; i < s.outputs.size(); ++i)
      CHECK(s.net(s.outputs[i]).name == n.net(n.outputs[i]).name);

    Rng rng(seed ^ 0x5eedULL);
    for (int t = 0; t < 100; ++t) {
      BitVec x = rng.bits(n.inputs.size());
      CHECK(simulate(n, x) == simulate(s, x));
    }
    CHECK(check_equivalence(n, s).verdict == EquivVerdict::Equivalent);
  }
}

TEST_CASE("strip_dead drops unread logic only") {
  Netlist n = parse_bench(
      "INPUT(a)\nINPUT(b)\nOUTPUT(y)\n"
      "dead1 = AND(a, b)\n"
      "dead2 = NOT(dead1)\n"
      "y = OR(a, b)\n");
  bool changed = false;
  Netlist s = strip_dead(n, &changed);
  CHECK(changed);
  CHECK(s.gates.size() == 1);
  CHECK(s.inputs.size() == 2);  // sources always survive
  CHECK_FALSE(s.has("dead1"));

  bool again = true;
  Netlist s2 = strip_dead(s, &again);
  CHECK_FALSE(again);
  CHECK(structurally_equal(s, s2));
}

TEST_CASE("fixing the plaintext leaves a key-only cipher") {
  auto spec = CipherSpec::parse_name("simon-32-64-4");
  REQUIRE(spec.has_value());
  Netlist c = build_unrolled_circuit(*spec);
  REQUIRE(c.inputs.size() == 64 + 32);

  Rng rng(71);
  BitVec x = rng.bits(32);
  Netlist fixed = specialize_plaintext(c, x);
  CHECK(fixed.sources().size() == 64);
  CHECK(fixed.gates.size() < c.gates.size());

  for (int t = 0; t < 16; ++t) {
    BitVec k = rng.bits(64);
    CHECK(simulate(fixed, k) == reference_encrypt(*spec, k, x));
  }
}

TEST_CASE("simplify keeps key inputs free") {
  // Key inputs must survive simplification even when currently unread.
  Netlist n = parse_bench(
      "INPUT(a)\nINPUT(keyinput0)\nOUTPUT(y)\n"
      "t = AND(a, keyinput0)\n"
      "u = CONST0()\n"
      "y = OR(t, u)\n");
  Netlist s = simplify(n);
  CHECK(s.keys.size() == 1);
  EquivOptions eo;
  eo.bind_keys = false;  // miter with key inputs shared and free
  CHECK(check_equivalence(n, s, eo).verdict == EquivVerdict::Equivalent);
}
