// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <string>

#include "gatelock/analyze.hpp"
#include "gatelock/bench_io.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/netlist.hpp"
#include "gatelock/sim.hpp"
#include "gatelock/verilog_io.hpp"

using namespace gatelock;

namespace {
const char* kMajorityPath = GATELOCK_SOURCE_DIR "/benches/majority.bench";

std::string majority_text() { return read_text_file(kMajorityPath); }
}  // namespace

TEST_CASE("parse a minimal bench") {
  Netlist n = parse_bench(
      "INPUT(a)\n"
      "INPUT(b)\n"
      "OUTPUT(y)\n"
      "y = AND(a, b)\n");
  CHECK(n.inputs.size() == 2);
  CHECK(n.keys.empty());
  CHECK(n.outputs.size() == 1);
  CHECK(n.gates.size() == 1);
  CHECK(n.gates[0].kind == GateKind::And);
  CHECK(n.net(n.outputs[0]).name == "y");
}

TEST_CASE("majority fixture shape") {
  Netlist n = parse_bench(majority_text());
  CHECK(n.inputs.size() == 3);
  CHECK(n.outputs.size() == 1);
  CHECK(n.gates.size() == 4);
  NetlistStats st = stats(n);
  CHECK(st.depth == 2);
  CHECK(st.by_kind.at(GateKind::And) == 3);
  CHECK(st.by_kind.at(GateKind::Or) == 1);
}

TEST_CASE("parse errors carry the offending name and line") {
  try {
    parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, ghostnet)\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("ghostnet") != std::string::npos);
    CHECK(e.line == 3);
  }

  CHECK_THROWS_WITH_AS(
      parse_bench("INPUT(a)\nOUTPUT(y)\ny = BUF(a)\ny = NOT(a)\n"),
      doctest::Contains("duplicate definition of 'y'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_bench("INPUT(a)\nOUTPUT(y)\ny = FROB(a)\n"),
      doctest::Contains("unknown gate kind 'FROB'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_bench("INPUT(a)\nOUTPUT(y)\ny = DFF(a)\n"),
      doctest::Contains("sequential element"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_bench("INPUT(a)\nOUTPUT(y)\nu = AND(v, a)\nv = AND(u, a)\n"
                  "y = OR(u, v)\n"),
      doctest::Contains("cycle"), Error);
  CHECK_THROWS_WITH_AS(parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a, a)\n"),
                       doctest::Contains("operand"), ParseError);
}

TEST_CASE("key inputs split by prefix") {
  std::string text =
      "INPUT(a)\nINPUT(keyinput0)\nINPUT(keyinput1)\nOUTPUT(y)\n"
      "t = XOR(a, keyinput0)\ny = XNOR(t, keyinput1)\n";
  Netlist n = parse_bench(text);
  CHECK(n.inputs.size() == 1);
  CHECK(n.keys.size() == 2);
  CHECK(n.net(n.keys[0]).name == "keyinput0");

  Netlist m = parse_bench(text, BenchReadOptions{"a"});
  CHECK(m.inputs.size() == 2);  // keyinput* no longer matches
  CHECK(m.keys.size() == 1);    // "a" does
}

TEST_CASE("emit is deterministic and round-trips") {
  Netlist n = parse_bench(majority_text());
  std::string e1 = emit_bench(n), e2 = emit_bench(n);
  CHECK(e1 == e2);
  Netlist back = parse_bench(e1);
  CHECK(structurally_equal(n, back));
}

TEST_CASE("mux expansion preserves the function") {
  Netlist n = parse_bench(
      "INPUT(d0)\nINPUT(d1)\nINPUT(s)\nOUTPUT(y)\n"
      "y = MUX(d0, d1, s)\n");
  CHECK(n.gates[0].kind == GateKind::Mux2);

  std::string flat = emit_bench(n, BenchWriteOptions{/*expand_mux=*/true});
  CHECK(flat.find("MUX") == std::string::npos);
  Netlist m = parse_bench(flat);
  for (uint64_t p = 0; p < 8; ++p) {
    BitVec x = BitVec::from_u64(p, 3);
    CHECK(simulate(n, x) == simulate(m, x));
  }
}

TEST_CASE("constant gates parse") {
  Netlist n = parse_bench(
      "INPUT(a)\nOUTPUT(y)\nc0 = CONST0()\nc1 = CONST1()\n"
      "t = MUX(c0, c1, a)\ny = BUF(t)\n");
  CHECK(simulate(n, BitVec::from_bits("0")).to_bits() == "0");
  CHECK(simulate(n, BitVec::from_bits("1")).to_bits() == "1");
}

TEST_CASE("netlist invariants") {
  Netlist n = parse_bench(majority_text());
  n.validate();
  auto order = n.topo_order();
  CHECK(order.size() == n.gates.size());

  // rename keeps structure intact and find() in sync.
  NetId y = n.find("y");
  REQUIRE(y != kNoNet);
  n.rename_net(y, "why");
  CHECK(n.find("y") == kNoNet);
  CHECK(n.find("why") == y);
  n.validate();
  CHECK_THROWS_WITH_AS(n.rename_net(y, "a1"),
                       doctest::Contains("already in use"), Error);

  auto dm = n.driver_map();
  CHECK(dm[y] >= 0);
  CHECK(dm[n.inputs[0]] < 0);
  auto fm = n.fanout_map();
  CHECK(fm[n.inputs[0]].size() == 2);  // a1 feeds two AND gates
}

TEST_CASE("gate evaluation semantics") {
  auto ev = [](GateKind k, std::vector<uint8_t> in) {
    return eval_gate(k, in.data(), in.size());
  };
  CHECK(ev(GateKind::And, {1, 1, 0}) == 0);
  CHECK(ev(GateKind::And, {1, 1, 1}) == 1);
  CHECK(ev(GateKind::Nand, {1, 1}) == 0);
  CHECK(ev(GateKind::Or, {0, 0, 0}) == 0);
  CHECK(ev(GateKind::Nor, {0, 0}) == 1);
  CHECK(ev(GateKind::Xor, {1, 1, 1}) == 1);   // parity
  CHECK(ev(GateKind::Xnor, {1, 0}) == 0);
  CHECK(ev(GateKind::Not, {0}) == 1);
  CHECK(ev(GateKind::Buf, {1}) == 1);
  CHECK(ev(GateKind::Mux2, {0, 1, 0}) == 0);  // select=0 -> d0
  CHECK(ev(GateKind::Mux2, {0, 1, 1}) == 1);  // select=1 -> d1
  CHECK(ev(GateKind::Const0, {}) == 0);
  CHECK(ev(GateKind::Const1, {}) == 1);

  CHECK(arity_ok(GateKind::Not, 1));
  CHECK_FALSE(arity_ok(GateKind::Not, 2));
  CHECK(arity_ok(GateKind::And, 4));
  CHECK_FALSE(arity_ok(GateKind::And, 1));
  CHECK(arity_ok(GateKind::Mux2, 3));
  CHECK_FALSE(arity_ok(GateKind::Mux2, 2));
  CHECK(is_commutative(GateKind::Xor));
  CHECK_FALSE(is_commutative(GateKind::Mux2));
}

TEST_CASE("assignment binds MSB-first") {
  Netlist n = parse_bench(majority_text());
  Assignment a(n);
  a.bind(n.inputs, BitVec::from_bits("110"));
  CHECK(a.get(n.find("a1")) == 1);
  CHECK(a.get(n.find("a2")) == 1);
  CHECK(a.get(n.find("a3")) == 0);
  CHECK(a.extract(n.inputs).to_bits() == "110");
}

TEST_CASE("verilog structural subset") {
  Netlist v = parse_verilog(
      "module top(a, b, y);\n"
      "  input a, b;\n"
      "  output y;\n"
      "  and g1(y, a, b);\n"
      "endmodule\n");
  Netlist b = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n");
  CHECK(structurally_equal(v, b));
}

TEST_CASE("verilog vectors expand MSB-first") {
  Netlist v = parse_verilog(
      "module top(x, y);\n"
      "  input [1:0] x;\n"
      "  output y;\n"
      "  xor g(y, x[1], x[0]);\n"
      "endmodule\n");
  REQUIRE(v.inputs.size() == 2);
  CHECK(v.net(v.inputs[0]).name == "x[1]");
  CHECK(v.net(v.inputs[1]).name == "x[0]");
  CHECK(simulate(v, BitVec::from_bits("10")).to_bits() == "1");
}

TEST_CASE("verilog behavioral constructs are rejected") {
  CHECK_THROWS_WITH_AS(
      parse_verilog("module top(a, y);\n  input a;\n  output y;\n"
                    "  always @(a) y = a;\nendmodule\n"),
      doctest::Contains("behavioral construct"), ParseError);
}

TEST_CASE("verilog constants and key prefix") {
  Netlist v = parse_verilog(
      "module top(a, keyinput0, y, z);\n"
      "  input a, keyinput0;\n"
      "  output y, z;\n"
      "  wire t;\n"
      "  assign t = 1'b1;\n"
      "  xor g1(y, a, keyinput0);\n"
      "  and g2(z, t, a);\n"
      "endmodule\n");
  CHECK(v.keys.size() == 1);
  CHECK(v.inputs.size() == 1);
  BitVec out = simulate(v, BitVec::from_bits("1"), BitVec::from_bits("0"));
  CHECK(out.to_bits() == "11");
}
