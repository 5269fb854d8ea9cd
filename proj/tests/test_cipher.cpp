// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>
#include <string>

#include "gatelock/bench_io.hpp"
#include "gatelock/cipher.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/sim.hpp"

using namespace gatelock;

namespace {
BitVec encrypt_via_circuit(const Netlist& circuit, const BitVec& x,
                           const BitVec& k) {
  return simulate(circuit, BitVec::concat(x, k));
}
}  // namespace

TEST_CASE("known-answer fixtures pass through reference and circuit") {
  for (const char* rel : {"/kat/simon.txt", "/kat/present.txt"}) {
    std::vector<KatVector> vecs =
        parse_kat_file(read_text_file(std::string(GATELOCK_SOURCE_DIR) + rel));
    REQUIRE(!vecs.empty());

    std::set<std::string> built;
    for (const KatVector& v : vecs) {
      CAPTURE(v.spec.name());
      CHECK(reference_encrypt(v.spec, v.key, v.plaintext) == v.ciphertext);
      // One circuit check per distinct spec keeps this fast.
      if (built.insert(v.spec.name()).second) {
        Netlist c = build_unrolled_circuit(v.spec);
        CHECK(encrypt_via_circuit(c, v.plaintext, v.key) == v.ciphertext);
      }
    }
  }
}

TEST_CASE("designers' simon 32/64 vector, spelled out") {
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  REQUIRE(spec.has_value());
  BitVec key = BitVec::from_hex("1918111009080100", 64);
  BitVec pt = BitVec::from_hex("65656877", 32);
  CHECK(reference_encrypt(*spec, key, pt).to_hex() == "c69be9bb");
}

TEST_CASE("spec lookup and naming") {
  CHECK(CipherSpec::all_full_strength().size() == 13);

  auto s = CipherSpec::lookup(CipherFamily::Simon, 32, 64);
  REQUIRE(s.has_value());
  CHECK(s->rounds == 32);
  CHECK(s->is_full_strength());
  CHECK(s->name() == "simon-32-64-32");

  auto reduced = CipherSpec::parse_name("simon-32-64-4");
  REQUIRE(reduced.has_value());
  CHECK(reduced->rounds == 4);
  CHECK_FALSE(reduced->is_full_strength());
  CHECK(*reduced == s->with_rounds(4));

  CHECK(CipherSpec::lookup(CipherFamily::Simon, 32, 128) == std::nullopt);
  CHECK(CipherSpec::parse_name("simon-32-64") == std::nullopt);
  CHECK(CipherSpec::parse_name("feal-32-64-8") == std::nullopt);
  CHECK(CipherSpec::parse_name("present-64-80-31").has_value());
  CHECK(CipherSpec::parse_name("ascon-128-128-12").has_value());

  for (int bs : {32, 48, 64, 96, 128}) CHECK(is_supported_block_size(bs));
  CHECK_FALSE(is_supported_block_size(56));
}

TEST_CASE("circuit matches reference on random pairs") {
  // Full-strength spot checks here; the acceptance suite covers every row.
  for (const char* name : {"simon-32-64-32", "present-64-80-31"}) {
    auto spec = CipherSpec::parse_name(name);
    REQUIRE(spec.has_value());
    Netlist c = build_unrolled_circuit(*spec);
    REQUIRE(c.inputs.size() == size_t(spec->block_bits + spec->key_bits));
    REQUIRE(c.outputs.size() == size_t(spec->block_bits));
    Rng rng(0xc1bce5);
    for (int t = 0; t < 8; ++t) {
      BitVec k = rng.bits(spec->key_bits);
      BitVec x = rng.bits(spec->block_bits);
      CHECK(encrypt_via_circuit(c, x, k) ==
            reference_encrypt(*spec, k, x));
    }
  }

  // Reduced rounds follow the same construction path.
  auto r4 = CipherSpec::parse_name("simon-32-64-4");
  Netlist c4 = build_unrolled_circuit(*r4);
  Rng rng(7);
  for (int t = 0; t < 16; ++t) {
    BitVec k = rng.bits(64);
    BitVec x = rng.bits(32);
    CHECK(encrypt_via_circuit(c4, x, k) == reference_encrypt(*r4, k, x));
  }
}

TEST_CASE("keystream cipher complements with the plaintext") {
  // The sponge mode XORs the keystream onto the block, so flipping every
  // plaintext bit flips every ciphertext bit.
  auto spec = CipherSpec::parse_name("ascon-128-128-12");
  REQUIRE(spec.has_value());
  Rng rng(99);
  for (int t = 0; t < 4; ++t) {
    BitVec k = rng.bits(128);
    BitVec x = rng.bits(128);
    BitVec xb = x;
    for (size_t i = 0; i < xb.width(); ++i) xb.flip(i);
    BitVec a = reference_encrypt(*spec, k, x);
    BitVec b = reference_encrypt(*spec, k, xb);
    for (size_t i = 0; i < a.width(); ++i) CHECK(a.get(i) != b.get(i));
  }
}

TEST_CASE("plaintext specialization pins x and keeps k") {
  auto spec = CipherSpec::parse_name("simon-32-64-8");
  Netlist c = build_unrolled_circuit(*spec);
  Rng rng(3);
  BitVec x = rng.bits(32);
  Netlist s = specialize_plaintext(c, x);
  CHECK(s.sources().size() == 64);
  for (int t = 0; t < 8; ++t) {
    BitVec k = rng.bits(64);
    CHECK(simulate(s, k) == reference_encrypt(*spec, k, x));
  }
}

TEST_CASE("pattern triples are deterministic and self-consistent") {
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  PatternTriple a = sample_pattern_triple(*spec, 42);
  PatternTriple b = sample_pattern_triple(*spec, 42);
  CHECK(a.x == b.x);
  CHECK(a.k == b.k);
  CHECK(a.y == b.y);
  CHECK(a.y == reference_encrypt(*spec, a.k, a.x));

  PatternTriple c = sample_pattern_triple(*spec, 43);
  CHECK((a.x != c.x || a.k != c.k));
}

TEST_CASE("avalanche: one key bit flips near half the ciphertext") {
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  Rng rng(5);
  double total = 0;
  int trials = 32;
  for (int t = 0; t < trials; ++t) {
    BitVec k = rng.bits(64);
    BitVec x = rng.bits(32);
    BitVec k2 = k;
    k2.flip(rng.below(64));
    BitVec a = reference_encrypt(*spec, k, x);
    BitVec b = reference_encrypt(*spec, k2, x);
    size_t diff = 0;
    for (size_t i = 0; i < a.width(); ++i) diff += a.get(i) != b.get(i);
    total += double(diff) / a.width();
  }
  double avg = total / trials;
  CHECK(avg > 0.25);
  CHECK(avg < 0.75);
}

TEST_CASE("component tables match their published formulas") {
  using namespace cipher_detail;

  const uint8_t want_present[16] = {0xC, 5, 6, 0xB, 9,   0,   0xA, 0xD,
                                    3,   0xE, 0xF, 8, 4, 7,   1,   2};
  for (int i = 0; i < 16; ++i) CHECK(kPresentSbox[i] == want_present[i]);

  // pLayer: bit i of the state moves to 16*i mod 63 (63 is fixed).
  for (int i = 0; i < 63; ++i) CHECK(present_perm(uint8_t(i)) == 16 * i % 63);
  CHECK(present_perm(63) == 63);
  // The permutation is a bijection.
  std::set<uint8_t> image;
  for (int i = 0; i < 64; ++i) image.insert(present_perm(uint8_t(i)));
  CHECK(image.size() == 64);

  for (uint8_t x = 0; x < 32; ++x)
    CHECK(ascon_sbox_formula(x) == kAsconSbox[x]);

  // z sequences: 62-periodic, known opening bits.
  CHECK(std::string(simon_z_sequence(0)).substr(0, 10) == "1111101000");
  CHECK(std::string(simon_z_sequence(2)).substr(0, 10) == "1010111101");
  for (int j = 0; j < 5; ++j)
    CHECK(std::string(simon_z_sequence(j)).size() == 62);
}

TEST_CASE("reference validates widths") {
  auto spec = CipherSpec::parse_name("simon-32-64-32");
  CHECK_THROWS_AS(reference_encrypt(*spec, BitVec(32), BitVec(32)), Error);
  CHECK_THROWS_AS(reference_encrypt(*spec, BitVec(64), BitVec(64)), Error);
}

TEST_CASE("kat parser rejects malformed rows") {
  CHECK_THROWS_AS(parse_kat_file("simon 32 64\n"), ParseError);
  CHECK_THROWS_AS(
      parse_kat_file("simon 32 64 32 1918111009080100 65656877 c69be9bb x\n"),
      ParseError);
  CHECK_THROWS_AS(parse_kat_file("nacl 32 64 32 00 00 00\n"), ParseError);
  CHECK(parse_kat_file("# only a comment\n\n").empty());
}
