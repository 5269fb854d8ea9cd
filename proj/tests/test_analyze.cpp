// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "gatelock/analyze.hpp"
#include "gatelock/bench_io.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/lock.hpp"
#include "gatelock/sim.hpp"
#include "support.hpp"

using namespace gatelock;

namespace {
Netlist majority() {
  return read_bench_file(GATELOCK_SOURCE_DIR "/benches/majority.bench");
}
}  // namespace

TEST_CASE("cone of a source is itself") {
  Netlist n = majority();
  Cone c = logic_cone(n, n.inputs[0]);
  CHECK(c.gates.empty());
  REQUIRE(c.support.size() == 1);
  CHECK(c.support[0] == n.inputs[0]);
}

TEST_CASE("cone of the majority output") {
  Netlist n = majority();
  Cone c = logic_cone(n, n.outputs[0]);
  CHECK(c.support.size() == 3);
  CHECK(c.gates.size() == 4);
}

TEST_CASE("extract_cones builds an equivalent standalone netlist") {
  Netlist n = testing::gen_random_netlist(5, 10, 120, 4);
  NetId root = n.outputs[1];
  Netlist sub = extract_cones(n, std::vector<NetId>{root});
  sub.validate();
  REQUIRE(sub.outputs.size() == 1);

  Cone c = logic_cone(n, root);
  CHECK(sub.gates.size() == c.gates.size());

  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    BitVec x = rng.bits(n.inputs.size());
    Assignment full = simulate_full(n, bind_inputs(n, x));
    Assignment in(sub);
    for (NetId src : sub.inputs)
      in.set(src, full.get(n.find(sub.net(src).name)));
    CHECK(simulate(sub, in).get(0) == full.get(root));
  }

  CHECK_THROWS_AS(extract_cones(n, std::vector<NetId>{n.inputs[0]}), Error);
}

TEST_CASE("support map matches cones") {
  Netlist n = testing::gen_random_netlist(6, 9, 90, 3);
  SupportMap sm(n);
  CHECK(sm.num_sources() == n.sources().size());
  for (NetId out : n.outputs) {
    Cone c = logic_cone(n, out);
    CHECK(sm.support(out) == c.support);  // both ascending
    CHECK(sm.support_size(out) == c.support.size());
  }
  for (NetId src : n.inputs) {
    CHECK_FALSE(sm.support_empty(src));
    CHECK(sm.support(src) == std::vector<NetId>{src});
  }
}

TEST_CASE("cipher-locked boundary has key-only support") {
  Netlist host = testing::gen_random_netlist(21, 36, 300, 6);
  LockRecord rec;
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  REQUIRE(spec.has_value());
  Netlist locked = lock_cipher_xor(host, *spec, /*seed=*/31, rec);
  SupportMap sm(locked);
  size_t nin = locked.inputs.size();
  size_t nsrc = locked.sources().size();
  REQUIRE(rec.boundary_nets.size() == 32);
  for (const std::string& name : rec.boundary_nets) {
    NetId id = locked.find(name);
    REQUIRE(id != kNoNet);
    CHECK_FALSE(sm.support_empty(id));
    // Support lies entirely in the key-input block of sources().
    CHECK(sm.support_within(id, nin, nsrc));
  }
}

TEST_CASE("stats of the majority fixture") {
  NetlistStats st = stats(majority());
  CHECK(st.num_inputs == 3);
  CHECK(st.num_keys == 0);
  CHECK(st.num_outputs == 1);
  CHECK(st.num_gates == 4);
  CHECK(st.depth == 2);
  CHECK(st.by_kind.at(GateKind::And) == 3);
  CHECK(st.by_kind.at(GateKind::Or) == 1);
  std::string text = format_stats(st);
  CHECK(text.find("AND") != std::string::npos);
}

TEST_CASE("stats of an empty netlist") {
  Netlist n;
  NetlistStats st = stats(n);
  CHECK(st.num_gates == 0);
  CHECK(st.depth == 0);
  CHECK(st.by_kind.empty());
}

TEST_CASE("structural equality is name-aligned") {
  Netlist a = majority();
  Netlist b = majority();
  CHECK(structurally_equal(a, b));

  // Commutative operand order is ignored...
  Netlist c = parse_bench(
      "INPUT(a1)\nINPUT(a2)\nINPUT(a3)\nOUTPUT(y)\n"
      "n1 = AND(a2, a1)\nn2 = AND(a1, a3)\nn3 = AND(a2, a3)\n"
      "y = OR(n3, n2, n1)\n");
  CHECK(structurally_equal(a, c));

  // ...but kinds and names are not.
  Netlist d = parse_bench(
      "INPUT(a1)\nINPUT(a2)\nINPUT(a3)\nOUTPUT(y)\n"
      "n1 = OR(a1, a2)\nn2 = AND(a1, a3)\nn3 = AND(a2, a3)\n"
      "y = OR(n1, n2, n3)\n");
  CHECK_FALSE(structurally_equal(a, d));

  // MUX operand order is significant.
  Netlist m1 = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(s)\nOUTPUT(y)\n"
                           "y = MUX(a, b, s)\n");
  Netlist m2 = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(s)\nOUTPUT(y)\n"
                           "y = MUX(b, a, s)\n");
  CHECK_FALSE(structurally_equal(m1, m2));
}
