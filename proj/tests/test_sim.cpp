// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "gatelock/bench_io.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/lock.hpp"
#include "gatelock/netlist.hpp"
#include "gatelock/sim.hpp"
#include "support.hpp"

using namespace gatelock;

namespace {
Netlist majority() {
  return read_bench_file(GATELOCK_SOURCE_DIR "/benches/majority.bench");
}
}  // namespace

TEST_CASE("majority truth table") {
  Netlist n = majority();
  CHECK(simulate(n, BitVec::from_bits("110")).to_bits() == "1");
  CHECK(simulate(n, BitVec::from_bits("000")).to_bits() == "0");
  CHECK(simulate(n, BitVec::from_bits("100")).to_bits() == "0");
  CHECK(simulate(n, BitVec::from_bits("111")).to_bits() == "1");
}

TEST_CASE("simulate_full covers every net") {
  Netlist n = majority();
  Assignment full = simulate_full(n, bind_inputs(n, BitVec::from_bits("110")));
  for (NetId id = 0; id < n.num_nets(); ++id) CHECK(full.has(id));
  CHECK(full.get(n.find("n1")) == 1);  // a1 & a2
  CHECK(full.get(n.find("n2")) == 0);  // a1 & a3
}

TEST_CASE("locked design at the secret matches on every pattern") {
  Netlist n = majority();
  LockRecord rec;
  Netlist locked = lock_xor(n, 2, /*seed=*/9, rec);
  REQUIRE(rec.key.width() == 2);
  for (uint64_t p = 0; p < 8; ++p) {
    BitVec x = BitVec::from_u64(p, 3);
    CHECK(simulate(locked, x, rec.key) == simulate(n, x));
  }
}

TEST_CASE("simulate validates widths") {
  Netlist n = majority();
  CHECK_THROWS_AS(simulate(n, BitVec::from_bits("10")), Error);
}

TEST_CASE("bit table layout") {
  BitTable t(3, 130);
  CHECK(t.rows() == 3);
  CHECK(t.patterns() == 130);
  t.set(1, 64, 1);
  t.set(2, 129, 1);
  CHECK(t.get(1, 64) == 1);
  CHECK(t.get(1, 65) == 0);
  CHECK(t.get(2, 129) == 1);
  BitVec col = t.column(64);
  CHECK(col.to_bits() == "010");
  t.set_column(0, BitVec::from_bits("111"));
  CHECK(t.get(0, 0) == 1);
  CHECK(t.get(1, 0) == 1);
  CHECK(t.get(2, 0) == 1);
}

TEST_CASE("batch kernels agree with the scalar reference") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    Netlist n = testing::gen_random_netlist(seed, 12, 150, 5);
    size_t npat = 257;  // straddles word boundaries
    Rng rng(seed * 77 + 1);
    BitTable in(n.sources().size(), npat);
    for (size_t r = 0; r < in.rows(); ++r)
      for (size_t p = 0; p < npat; ++p) in.set(r, p, rng.bit());

    BitTable a = simulate_batch_scalar(n, n.sources(), in, n.outputs);
    BitTable b = simulate_batch_serial(n, n.sources(), in, n.outputs);
    BitTable c = simulate_batch(n, n.sources(), in, n.outputs);
    for (size_t p = 0; p < npat; ++p) {
      CHECK(a.column(p) == b.column(p));
      CHECK(b.column(p) == c.column(p));
    }
  }
}

TEST_CASE("batch matches per-pattern simulate") {
  Netlist n = testing::gen_random_netlist(4, 10, 80, 4);
  size_t npat = 100;
  Rng rng(99);
  BitTable in(n.sources().size(), npat);
  std::vector<BitVec> xs;
  for (size_t p = 0; p < npat; ++p) {
    BitVec x = rng.bits(n.inputs.size());
    xs.push_back(x);
    in.set_column(p, x);  // no key inputs on this host
  }
  BitTable out = simulate_batch(n, n.sources(), in, n.outputs);
  for (size_t p = 0; p < npat; ++p) CHECK(out.column(p) == simulate(n, xs[p]));
}
