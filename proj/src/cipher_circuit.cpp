// SPDX-License-Identifier: Apache-2.0
// Unrolled combinational realizations of the cipher references. Rotations
// and bit permutations are pure wiring; S-boxes become two-level
// sum-of-minterms networks; XOR with a constant becomes a NOT (or a fused
// XNOR) on the set bit positions.
#include <map>

#include "gatelock/cipher.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/transform.hpp"

namespace gatelock {

namespace {

using Wires = std::vector<NetId>;  // index 0 = MSB

struct CircuitBuilder {
  Netlist nl;
  NetId c0 = kNoNet, c1 = kNoNet;
  uint64_t ctr = 0;
  std::map<NetId, NetId> nots;  // shared literal complements

  NetId fresh() { return nl.add_internal("n" + std::to_string(ctr++)); }
  NetId g(GateKind k, std::vector<NetId> in) {
    NetId o = fresh();
    nl.add_gate(k, std::move(in), o);
    return o;
  }
  NetId const_net(int v) {
    NetId& c = v ? c1 : c0;
    if (c == kNoNet) c = g(v ? GateKind::Const1 : GateKind::Const0, {});
    return c;
  }
  NetId inv(NetId a) {
    auto it = nots.find(a);
    if (it != nots.end()) return it->second;
    NetId o = g(GateKind::Not, {a});
    nots.emplace(a, o);
    return o;
  }

  Wires word_from_bits(const BitVec& bits) {
    Wires w(bits.width());
    for (size_t i = 0; i < bits.width(); ++i) w[i] = const_net(bits.get(i));
    return w;
  }
  Wires word_from_u64(uint64_t v, int n) {
    return word_from_bits(BitVec::from_u64(v, n));
  }
  static Wires rotl(const Wires& a, int r) {
    int n = static_cast<int>(a.size());
    r %= n;
    Wires o(n);
    for (int i = 0; i < n; ++i) o[i] = a[(i + r) % n];
    return o;
  }
  static Wires rotr(const Wires& a, int r) {
    return rotl(a, static_cast<int>(a.size()) - r % static_cast<int>(a.size()));
  }
  Wires xor2(const Wires& a, const Wires& b) {
    Wires o(a.size());
    for (size_t i = 0; i < a.size(); ++i)
      o[i] = g(GateKind::Xor, {a[i], b[i]});
    return o;
  }
  // One n-ary gate per bit; constant mask folds into the gate polarity.
  Wires xorn(const std::vector<Wires>& terms, const BitVec& mask = {}) {
    Wires o(terms[0].size());
    for (size_t i = 0; i < o.size(); ++i) {
      std::vector<NetId> in;
      in.reserve(terms.size());
      for (const Wires& t : terms) in.push_back(t[i]);
      bool flip = mask.width() ? mask.get(i) != 0 : false;
      o[i] = g(flip ? GateKind::Xnor : GateKind::Xor, std::move(in));
    }
    return o;
  }
  Wires and2(const Wires& a, const Wires& b) {
    Wires o(a.size());
    for (size_t i = 0; i < a.size(); ++i)
      o[i] = g(GateKind::And, {a[i], b[i]});
    return o;
  }
  Wires xor_const(const Wires& a, const BitVec& bits) {
    Wires o(a.size());
    for (size_t i = 0; i < a.size(); ++i)
      o[i] = bits.get(i) ? inv(a[i]) : a[i];
    return o;
  }

  // Two-level network for one truth-table output column. `table[j]` is the
  // value on the input combination with MSB-first index j over `in`.
  NetId sop(const Wires& in, const std::vector<int>& table) {
    size_t k = in.size();
    std::vector<NetId> minterms;
    for (size_t j = 0; j < table.size(); ++j) {
      if (!table[j]) continue;
      std::vector<NetId> lits;
      lits.reserve(k);
      for (size_t t = 0; t < k; ++t) {
        bool one = (j >> (k - 1 - t)) & 1;
        lits.push_back(one ? in[t] : inv(in[t]));
      }
      minterms.push_back(lits.size() == 1 ? lits[0]
                                          : g(GateKind::And, std::move(lits)));
    }
    if (minterms.empty()) return const_net(0);
    if (minterms.size() == table.size()) return const_net(1);
    if (minterms.size() == 1) return minterms[0];
    return g(GateKind::Or, std::move(minterms));
  }

  // All outputs of a w-in/w-out S-box given as a value table.
  Wires sbox(const Wires& in, const uint8_t* table, size_t width) {
    Wires out(width);
    size_t n = size_t{1} << width;
    for (size_t bit = 0; bit < width; ++bit) {
      std::vector<int> col(n);
      for (size_t j = 0; j < n; ++j)
        col[j] = (table[j] >> (width - 1 - bit)) & 1;
      out[bit] = sop(in, col);
    }
    return out;
  }
};

Wires slice(const Wires& w, size_t pos, size_t len) {
  return Wires(w.begin() + pos, w.begin() + pos + len);
}

Netlist build_simon(const CipherSpec& spec) {
  auto pp = [&] {
    struct P { int n, m, z; };
    switch (spec.block_bits * 1000 + spec.key_bits) {
      case 32064: return P{16, 4, 0};
      case 48072: return P{24, 3, 0};
      case 48096: return P{24, 4, 1};
      case 64096: return P{32, 3, 2};
      case 64128: return P{32, 4, 3};
      case 96096: return P{48, 2, 2};
      case 96144: return P{48, 3, 3};
      case 128128: return P{64, 2, 2};
      case 128192: return P{64, 3, 3};
      case 128256: return P{64, 4, 4};
    }
    throw Error("no SIMON parameters for " + spec.name());
  }();
  int n = pp.n, m = pp.m;
  const char* z = cipher_detail::simon_z_sequence(pp.z);

  CircuitBuilder cb;
  Wires xin(spec.block_bits), kin(spec.key_bits);
  for (int i = 0; i < spec.block_bits; ++i)
    xin[i] = cb.nl.add_net("x[" + std::to_string(spec.block_bits - 1 - i) + "]",
                           NetRole::Input);
  for (int i = 0; i < spec.key_bits; ++i)
    kin[i] = cb.nl.add_net("k[" + std::to_string(spec.key_bits - 1 - i) + "]",
                           NetRole::Input);

  std::vector<Wires> k(std::max(spec.rounds, m));
  for (int j = 0; j < m; ++j) k[m - 1 - j] = slice(kin, j * n, n);
  uint64_t c = (n == 64 ? ~0ULL : (1ULL << n) - 1) ^ 3;
  for (int i = m; i < spec.rounds; ++i) {
    Wires tmp = CircuitBuilder::rotr(k[i - 1], 3);
    if (m == 4) tmp = cb.xor2(tmp, k[i - 3]);
    uint64_t zc = c ^ static_cast<uint64_t>(z[(i - m) % 62] - '0');
    k[i] = cb.xorn({k[i - m], tmp, CircuitBuilder::rotr(tmp, 1)},
                   BitVec::from_u64(zc, n));
  }

  Wires x = slice(xin, 0, n), y = slice(xin, n, n);
  for (int i = 0; i < spec.rounds; ++i) {
    Wires fx = cb.xor2(cb.and2(CircuitBuilder::rotl(x, 1),
                               CircuitBuilder::rotl(x, 8)),
                       CircuitBuilder::rotl(x, 2));
    Wires nx = cb.xorn({y, fx, k[i]});
    y = x;
    x = nx;
  }

  Wires ct = x;
  ct.insert(ct.end(), y.begin(), y.end());
  for (int i = 0; i < spec.block_bits; ++i) {
    NetId o = cb.nl.add_net("y[" + std::to_string(spec.block_bits - 1 - i) + "]",
                            NetRole::Internal);
    cb.nl.add_gate(GateKind::Buf, {ct[i]}, o);
    cb.nl.mark_output(o);
  }
  return std::move(cb.nl);
}

Netlist build_present(const CipherSpec& spec) {
  using cipher_detail::kPresentSbox;
  using cipher_detail::present_perm;
  int kl = spec.key_bits;
  CircuitBuilder cb;
  Wires state(64), kreg(kl);
  for (int i = 0; i < 64; ++i)
    state[i] = cb.nl.add_net("x[" + std::to_string(63 - i) + "]", NetRole::Input);
  for (int i = 0; i < kl; ++i)
    kreg[i] = cb.nl.add_net("k[" + std::to_string(kl - 1 - i) + "]",
                            NetRole::Input);

  auto apply_perm = [&](const Wires& src) {
    Wires dst(64);
    for (int b = 0; b < 64; ++b)  // b is the low-endian bit number
      dst[63 - present_perm(static_cast<uint8_t>(b))] = src[63 - b];
    return dst;
  };

  for (int i = 1; i <= spec.rounds; ++i) {
    state = cb.xor2(state, slice(kreg, 0, 64));
    Wires after(64);
    for (int nib = 0; nib < 16; ++nib) {
      Wires in = slice(state, 4 * nib, 4);
      Wires out = cb.sbox(in, kPresentSbox, 4);
      for (int t = 0; t < 4; ++t) after[4 * nib + t] = out[t];
    }
    state = apply_perm(after);

    kreg = CircuitBuilder::rotl(kreg, 61);
    Wires top = cb.sbox(slice(kreg, 0, 4), kPresentSbox, 4);
    for (int t = 0; t < 4; ++t) kreg[t] = top[t];
    if (kl == 128) {
      Wires second = cb.sbox(slice(kreg, 4, 4), kPresentSbox, 4);
      for (int t = 0; t < 4; ++t) kreg[4 + t] = second[t];
    }
    // Round counter lands in key bits 19..15 (80-bit) or 66..62 (128-bit).
    int top_counter_bit = kl == 80 ? 19 : 66;
    BitVec ctr_bits = BitVec::from_u64(static_cast<uint64_t>(i), 5);
    for (int t = 0; t < 5; ++t)
      if (ctr_bits.get(t)) {
        int idx = kl - 1 - (top_counter_bit - t);
        kreg[idx] = cb.inv(kreg[idx]);
      }
  }
  state = cb.xor2(state, slice(kreg, 0, 64));

  for (int i = 0; i < 64; ++i) {
    NetId o = cb.nl.add_net("y[" + std::to_string(63 - i) + "]",
                            NetRole::Internal);
    cb.nl.add_gate(GateKind::Buf, {state[i]}, o);
    cb.nl.mark_output(o);
  }
  return std::move(cb.nl);
}

Netlist build_ascon(const CipherSpec& spec) {
  using cipher_detail::kAsconSbox;
  const AsconConstants& cc = ascon_constants();
  CircuitBuilder cb;
  Wires xin(128), kin(128);
  for (int i = 0; i < 128; ++i)
    xin[i] = cb.nl.add_net("x[" + std::to_string(127 - i) + "]", NetRole::Input);
  for (int i = 0; i < 128; ++i)
    kin[i] = cb.nl.add_net("k[" + std::to_string(127 - i) + "]", NetRole::Input);

  Wires s[5];
  s[0] = cb.word_from_u64(cc.iv, 64);
  s[1] = slice(kin, 0, 64);
  s[2] = slice(kin, 64, 64);
  s[3] = cb.word_from_u64(cc.nonce[0], 64);
  s[4] = cb.word_from_u64(cc.nonce[1], 64);

  static const uint64_t rc[12] = {0xf0, 0xe1, 0xd2, 0xc3, 0xb4, 0xa5,
                                  0x96, 0x87, 0x78, 0x69, 0x5a, 0x4b};
  for (int r = 12 - spec.rounds; r < 12; ++r) {
    s[2] = cb.xor_const(s[2], BitVec::from_u64(rc[r], 64));
    for (int col = 0; col < 64; ++col) {
      Wires in = {s[0][col], s[1][col], s[2][col], s[3][col], s[4][col]};
      Wires out = cb.sbox(in, kAsconSbox, 5);
      for (int w = 0; w < 5; ++w) s[w][col] = out[w];
    }
    static const int rot[5][2] = {{19, 28}, {61, 39}, {1, 6}, {10, 17}, {7, 41}};
    for (int w = 0; w < 5; ++w)
      s[w] = cb.xorn({s[w], CircuitBuilder::rotr(s[w], rot[w][0]),
                      CircuitBuilder::rotr(s[w], rot[w][1])});
  }
  s[3] = cb.xor2(s[3], slice(kin, 0, 64));   // unused by the keystream but
  s[4] = cb.xor2(s[4], slice(kin, 64, 64));  // kept: stripped as dead logic
  Wires ks = slice(s[0], 0, 64);
  ks.insert(ks.end(), s[1].begin(), s[1].end());
  Wires ct = cb.xor2(xin, ks);

  for (int i = 0; i < 128; ++i) {
    NetId o = cb.nl.add_net("y[" + std::to_string(127 - i) + "]",
                            NetRole::Internal);
    cb.nl.add_gate(GateKind::Buf, {ct[i]}, o);
    cb.nl.mark_output(o);
  }
  // The final whitening of the bottom state rows never reaches y; drop it.
  return simplify(std::move(cb.nl));
}

}  // namespace

Netlist build_unrolled_circuit(const CipherSpec& spec) {
  if (spec.rounds < 1) throw Error("cipher needs at least one round");
  switch (spec.family) {
    case CipherFamily::Simon: return build_simon(spec);
    case CipherFamily::Present: return build_present(spec);
    case CipherFamily::Ascon:
      if (spec.rounds > 12) throw Error("the permutation has at most 12 rounds");
      return build_ascon(spec);
  }
  throw Error("unknown cipher family");
}

Netlist specialize_plaintext(const Netlist& cipher, const BitVec& x) {
  if (cipher.inputs.size() < x.width())
    throw Error("circuit has fewer x inputs than pattern bits");
  Assignment fixed(cipher);
  for (size_t i = 0; i < x.width(); ++i) {
    NetId id = cipher.find("x[" + std::to_string(x.width() - 1 - i) + "]");
    if (id == kNoNet)
      throw Error("circuit lacks input x[" +
                  std::to_string(x.width() - 1 - i) + "]");
    fixed.set(id, x.get(i));
  }
  return simplify(propagate_constants(cipher, fixed));
}

}  // namespace gatelock
