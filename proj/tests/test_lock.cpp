// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "gatelock/analyze.hpp"
#include "gatelock/attacks.hpp"
#include "gatelock/bench_io.hpp"
#include "gatelock/equiv.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/lock.hpp"
#include "gatelock/sim.hpp"
#include "support.hpp"

using namespace gatelock;

namespace {

Netlist majority() {
  return read_bench_file(GATELOCK_SOURCE_DIR "/benches/majority.bench");
}

Netlist cipher_host() { return testing::gen_random_netlist(21, 36, 300, 6); }

// Input patterns where locked@key differs from the original (exhaustive).
std::vector<uint64_t> corrupted_patterns(const Netlist& orig,
                                         const Netlist& locked,
                                         const BitVec& key) {
  std::vector<uint64_t> out;
  size_t n = orig.inputs.size();
  REQUIRE(n <= 12);
  for (uint64_t p = 0; p < (1ull << n); ++p) {
    BitVec x = BitVec::from_u64(p, n);
    if (simulate(orig, x) != simulate(locked, x, key)) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("xor locking: zero keys is the identity") {
  Netlist n = majority();
  LockRecord rec;
  Netlist locked = lock_xor(n, 0, 3, rec);
  CHECK(structurally_equal(n, locked));
  CHECK(rec.nok == 0);
}

TEST_CASE("xor locking on the majority fixture") {
  Netlist n = majority();
  LockRecord rec;
  Netlist locked = lock_xor(n, 2, 9, rec);

  CHECK(rec.scheme == "xor");
  CHECK(rec.nok == 2);
  CHECK(rec.nok == expected_nok(rec));
  CHECK(rec.key.width() == 2);
  CHECK(rec.sites.size() == 2);
  REQUIRE(rec.key_inputs.size() == 2);
  CHECK(locked.keys.size() == 2);
  CHECK(locked.net(locked.keys[0]).name == rec.key_inputs[0]);

  // Secret key: identical on every input.
  CHECK(corrupted_patterns(n, locked, rec.key).empty());

  // Any single-bit flip is observable somewhere (placement guarantees it).
  for (size_t i = 0; i < 2; ++i) {
    BitVec wrong = rec.key;
    wrong.flip(i);
    CHECK_FALSE(corrupted_patterns(n, locked, wrong).empty());
  }

  // The gate type at each site hides the key polarity: XOR carries key
  // bit 0, XNOR key bit 1.
  auto dm = locked.driver_map();
  for (size_t i = 0; i < 2; ++i) {
    NetId site = locked.find(rec.sites[i]);
    REQUIRE(site != kNoNet);
    const Gate& g = locked.gates[dm[site]];
    CHECK(g.kind == (rec.key.get(i) ? GateKind::Xnor : GateKind::Xor));
  }
}

TEST_CASE("lut locking stores the truth table MSB-first") {
  Netlist n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = OR(a, b, c)\n");
  LutConfig cfg;
  cfg.m = 3;
  LockRecord rec;
  Netlist locked = lock_lut(n, cfg, 1, 4, rec);

  CHECK(rec.scheme == "lut");
  REQUIRE(rec.luts.size() == 1);
  CHECK(rec.luts[0].segment.to_bits() == "11111110");
  CHECK(rec.nok == 8);
  CHECK(rec.nok == expected_nok(rec));
  CHECK(rec.key == rec.luts[0].segment);
  CHECK(locked.keys.size() == 8);
  CHECK(corrupted_patterns(n, locked, rec.key).empty());

  // One-input gates become programmable BUF/NOT cells.
  Netlist b = parse_bench("INPUT(a)\nOUTPUT(y)\ny = BUF(a)\n");
  LockRecord rb;
  lock_lut(b, LutConfig{}, 1, 5, rb);
  REQUIRE(rb.luts.size() == 1);
  CHECK(rb.luts[0].segment.to_bits() == "10");

  Netlist v = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
  LockRecord rv;
  lock_lut(v, LutConfig{}, 1, 6, rv);
  REQUIRE(rv.luts.size() == 1);
  CHECK(rv.luts[0].segment.to_bits() == "01");

  // Config bounds are enforced.
  LutConfig badm;
  badm.m = 1;
  LockRecord rx;
  CHECK_THROWS_WITH_AS(lock_lut(b, badm, 1, 7, rx),
                       doctest::Contains("LUT size"), Error);
}

TEST_CASE("lut locking: flipping a live row corrupts its minterms") {
  Netlist n = majority();
  LutConfig cfg;
  cfg.m = 3;
  LockRecord rec;
  Netlist locked = lock_lut(n, cfg, 1, 8, rec);
  REQUIRE(rec.luts.size() == 1);
  size_t m = rec.luts[0].inputs.size();

  for (size_t j = 0; j < rec.key.width(); ++j) {
    BitVec wrong = rec.key;
    wrong.flip(j);
    // Key bit j programs row 2^m - 1 - j; some reaching minterm must show.
    auto bad = corrupted_patterns(n, locked, wrong);
    CHECK_FALSE(bad.empty());
    CAPTURE(j);
    CAPTURE(m);
  }
}

TEST_CASE("antisat locking") {
  Netlist n = majority();
  LockRecord rec;
  Netlist locked = lock_antisat(n, 3, 12, rec);

  CHECK(rec.scheme == "antisat");
  CHECK(rec.nok == 6);  // 2n keys
  CHECK(rec.nok == expected_nok(rec));
  REQUIRE(rec.key.width() == 6);
  CHECK(rec.key.slice(0, 3) == rec.key.slice(3, 3));  // K1 = K2
  CHECK(corrupted_patterns(n, locked, rec.key).empty());

  // Flipping one K1 bit corrupts exactly one input pattern.
  BitVec wrong = rec.key;
  wrong.flip(1);
  CHECK(corrupted_patterns(n, locked, wrong).size() == 1);
}

TEST_CASE("ttlock implements single-pattern stripping") {
  Netlist n = majority();
  BitVec pattern = BitVec::from_bits("101");
  LockRecord rec;
  Netlist locked = lock_ttlock(n, 3, pattern, 15, rec);

  CHECK(rec.scheme == "ttlock");
  CHECK(rec.nok == 3);
  CHECK(rec.key == pattern);
  REQUIRE(rec.protected_pattern.has_value());
  CHECK(*rec.protected_pattern == pattern);
  CHECK(rec.protected_inputs.size() == 3);
  CHECK_FALSE(rec.cs1.empty());
  CHECK_FALSE(rec.cs2.empty());
  CHECK(locked.has(rec.cs1));
  CHECK(locked.has(rec.cs2));

  CHECK(corrupted_patterns(n, locked, rec.key).empty());

  // Every wrong key corrupts exactly the stripped pattern and itself.
  for (uint64_t k = 0; k < 8; ++k) {
    BitVec key = BitVec::from_u64(k, 3);
    if (key == pattern) continue;
    auto bad = corrupted_patterns(n, locked, key);
    std::vector<uint64_t> want{pattern.to_u64(), k};
    std::sort(want.begin(), want.end());
    CHECK(bad == want);
  }

  // Without an explicit pattern, one is sampled from the seed.
  LockRecord r2;
  lock_ttlock(n, 3, std::nullopt, 16, r2);
  REQUIRE(r2.protected_pattern.has_value());
  CHECK(r2.key == *r2.protected_pattern);
}

TEST_CASE("cipher-xor locking") {
  Netlist host = cipher_host();
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  REQUIRE(spec.has_value());
  LockRecord rec;
  Netlist locked = lock_cipher_xor(host, *spec, 37, rec);

  CHECK(rec.scheme == "cipher-xor");
  CHECK(rec.nok == 64);
  CHECK(rec.nok == expected_nok(rec));
  CHECK(locked.keys.size() == 64);
  REQUIRE(rec.cipher.has_value());
  CHECK(rec.cipher->spec_name == "simon-32-64-32");
  CHECK(rec.cipher->y == reference_encrypt(*spec, rec.cipher->k, rec.cipher->x));
  CHECK(rec.key == rec.cipher->k);
  CHECK(rec.sites.size() == 32);
  CHECK(rec.boundary_nets.size() == 32);

  EquivOptions right;
  right.key_b = rec.key;
  CHECK(check_equivalence(host, locked, right).verdict ==
        EquivVerdict::Equivalent);

  BitVec wrong = rec.key;
  wrong.flip(11);
  EquivOptions bad;
  bad.key_b = wrong;
  EquivResult r = check_equivalence(host, locked, bad);
  REQUIRE(r.verdict == EquivVerdict::Inequivalent);
  CHECK(simulate(host, r.counterexample) !=
        simulate(locked, r.counterexample, wrong));
}

TEST_CASE("compound locking") {
  Netlist host = cipher_host();
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  LutConfig cfg;  // defaults: m = 4, boundary-cover policy
  LockRecord rec;
  Netlist locked = lock_compound(host, *spec, cfg, 44, rec);

  CHECK(rec.scheme == "compound");
  size_t lut_keys = 0;
  for (const LutRecord& l : rec.luts) lut_keys += size_t(1) << l.inputs.size();
  CHECK(rec.nok == 64 + lut_keys);
  CHECK(rec.nok == expected_nok(rec));
  CHECK(locked.keys.size() == rec.nok);
  CHECK(rec.key.width() == rec.nok);
  REQUIRE(rec.cipher.has_value());
  REQUIRE(rec.protected_pattern.has_value());
  CHECK(*rec.protected_pattern == rec.cipher->y);

  // Key layout: cipher key first, then the LUT segments in record order.
  CHECK(rec.key.slice(0, 64) == rec.cipher->k);
  size_t off = 64;
  for (const LutRecord& l : rec.luts) {
    CHECK(rec.key.slice(off, l.segment.width()) == l.segment);
    off += l.segment.width();
  }

  EquivOptions right;
  right.key_b = rec.key;
  CHECK(check_equivalence(host, locked, right).verdict ==
        EquivVerdict::Equivalent);

  // Among the first LUT's rows, the one its inputs actually address under
  // the secret is live: flipping its key bit breaks equivalence. The other
  // rows are decoys the correct cipher key never addresses, so flipping
  // them provably changes nothing.
  size_t live_flips = 0, alias_flips = 0;
  for (size_t j = 0; j < rec.luts[0].keys.size(); ++j) {
    BitVec wrong = rec.key;
    wrong.flip(64 + j);
    EquivOptions bad;
    bad.key_b = wrong;
    EquivVerdict v = check_equivalence(host, locked, bad).verdict;
    REQUIRE(v != EquivVerdict::Unknown);
    if (v == EquivVerdict::Inequivalent)
      ++live_flips;
    else
      ++alias_flips;
  }
  CHECK(live_flips >= 1);
  CHECK(alias_flips >= 1);

  // A wrong cipher-key bit breaks it too.
  BitVec wrong2 = rec.key;
  wrong2.flip(20);
  EquivOptions bad2;
  bad2.key_b = wrong2;
  CHECK(check_equivalence(host, locked, bad2).verdict ==
        EquivVerdict::Inequivalent);

  // The removal signature is gone: no clean cipher boundary remains.
  CipherOutputScan scan = find_cipher_outputs(locked);
  CHECK_FALSE(scan.valid);
}

TEST_CASE("forced lut width is honored") {
  Netlist host = cipher_host();
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  LutConfig cfg;
  cfg.m = 4;
  cfg.count = 24;
  cfg.forced = true;
  LockRecord rec;
  lock_compound(host, *spec, cfg, 45, rec);
  CHECK(rec.luts.size() == 24);
  for (const LutRecord& l : rec.luts) CHECK(l.inputs.size() == 4);
  CHECK(rec.nok == 448);
}

TEST_CASE("lut obfuscation of the cipher boundary destroys the scan") {
  Netlist host = cipher_host();
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  LockRecord rec;
  Netlist locked = lock_cipher_xor(host, *spec, 51, rec);

  CipherOutputScan before = find_cipher_outputs(locked);
  REQUIRE(before.valid);
  std::set<std::string> bset(before.candidates.begin(),
                             before.candidates.end());
  std::set<std::string> truth(rec.boundary_nets.begin(),
                              rec.boundary_nets.end());
  CHECK(bset == truth);

  // Obfuscate LUTs across the boundary: half on boundary-net drivers
  // (cipher side), half on the consuming site gates (host side).
  std::vector<std::string> targets;
  for (size_t i = 0; i < 4; ++i) targets.push_back(rec.boundary_nets[i]);
  for (size_t i = 0; i < 4; ++i) targets.push_back(rec.sites[8 + i]);
  LutConfig cfg;
  LockRecord rec2 = rec;
  obfuscate_with_luts(locked, targets, cfg, 52, rec2);
  locked.validate();

  // The scan no longer yields a usable boundary: LUT leaf keys on the
  // consumer side escape every candidate support, so step 1 of the
  // removal attack rejects the cut.
  CipherOutputScan after = find_cipher_outputs(locked);
  CHECK_FALSE(after.valid);
  CHECK_FALSE(after.reason.empty());

  // Still functional at the extended secret.
  EquivOptions eo;
  eo.key_b = rec2.key;
  CHECK(check_equivalence(host, locked, eo).verdict ==
        EquivVerdict::Equivalent);
}

TEST_CASE("obfuscate_with_luts with no targets is the identity") {
  Netlist n = majority();
  Netlist copy = n;
  LockRecord rec;
  obfuscate_with_luts(copy, {}, LutConfig{}, 1, rec);
  CHECK(structurally_equal(n, copy));
  CHECK(rec.luts.empty());
}

TEST_CASE("records round-trip through json") {
  Netlist host = cipher_host();
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  LutConfig cfg;
  LockRecord rec;
  lock_compound(host, *spec, cfg, 61, rec);

  LockRecord back = LockRecord::from_json_text(rec.to_json());
  CHECK(back.scheme == rec.scheme);
  CHECK(back.seed == rec.seed);
  CHECK(back.key_prefix == rec.key_prefix);
  CHECK(back.nok == rec.nok);
  CHECK(back.key == rec.key);
  CHECK(back.key_inputs == rec.key_inputs);
  CHECK(back.sites == rec.sites);
  REQUIRE(back.protected_pattern.has_value());
  CHECK(*back.protected_pattern == *rec.protected_pattern);
  CHECK(back.protected_inputs == rec.protected_inputs);
  CHECK(back.protected_output == rec.protected_output);
  CHECK(back.cs1 == rec.cs1);
  CHECK(back.cs2 == rec.cs2);
  REQUIRE(back.cipher.has_value());
  CHECK(back.cipher->spec_name == rec.cipher->spec_name);
  CHECK(back.cipher->x == rec.cipher->x);
  CHECK(back.cipher->k == rec.cipher->k);
  CHECK(back.cipher->y == rec.cipher->y);
  CHECK(back.boundary_nets == rec.boundary_nets);
  REQUIRE(back.luts.size() == rec.luts.size());
  for (size_t i = 0; i < rec.luts.size(); ++i) {
    CHECK(back.luts[i].output == rec.luts[i].output);
    CHECK(back.luts[i].inputs == rec.luts[i].inputs);
    CHECK(back.luts[i].segment == rec.luts[i].segment);
    CHECK(back.luts[i].keys == rec.luts[i].keys);
    CHECK(back.luts[i].pads == rec.luts[i].pads);
  }
}

TEST_CASE("locking is deterministic in the seed") {
  Netlist host = cipher_host();
  auto spec = CipherSpec::parse_name("simon-32-64-32");

  LockRecord r1, r2, r3;
  Netlist a = lock_compound(host, *spec, LutConfig{}, 77, r1);
  Netlist b = lock_compound(host, *spec, LutConfig{}, 77, r2);
  Netlist c = lock_compound(host, *spec, LutConfig{}, 78, r3);
  CHECK(emit_bench(a) == emit_bench(b));
  CHECK(r1.to_json() == r2.to_json());
  CHECK(emit_bench(a) != emit_bench(c));

  LockRecord rx1, rx2;
  Netlist x1 = lock_xor(host, 8, 5, rx1);
  Netlist x2 = lock_xor(host, 8, 5, rx2);
  CHECK(emit_bench(x1) == emit_bench(x2));
  CHECK(rx1.to_json() == rx2.to_json());
}

TEST_CASE("locking rejects unusable inputs") {
  Netlist tiny = majority();
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  LockRecord rec;
  // 3 primary inputs cannot feed a 32-bit protected pattern.
  CHECK_THROWS_AS(lock_compound(tiny, *spec, LutConfig{}, 1, rec), Error);
  CHECK_THROWS_AS(lock_cipher_xor(tiny, *spec, 1, rec), Error);

  // Key inputs on the way in are rejected.
  LockRecord r1, r2;
  Netlist once = lock_xor(majority(), 1, 2, r1);
  CHECK_THROWS_AS(lock_xor(once, 1, 3, r2), Error);

  // More sites than gates cannot be honored.
  LockRecord r3;
  CHECK_THROWS_AS(lock_xor(majority(), 5, 2, r3), Error);
}
