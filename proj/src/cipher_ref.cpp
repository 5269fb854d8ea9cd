// SPDX-License-Identifier: Apache-2.0
// Software references for the three cipher families. Bit conventions:
// patterns are MSB-first; a block splits into words high-to-low.
#include <array>
#include <sstream>

#include "gatelock/cipher.hpp"
#include "gatelock/errors.hpp"

namespace gatelock {

const char* to_string(CipherFamily f) {
  switch (f) {
    case CipherFamily::Simon: return "simon";
    case CipherFamily::Present: return "present";
    case CipherFamily::Ascon: return "ascon";
  }
  return "?";
}

bool is_supported_block_size(int bits) {
  for (int b : kSupportedBlockBits)
    if (b == bits) return true;
  return false;
}

namespace cipher_detail {

const uint8_t kPresentSbox[16] = {0xc, 0x5, 0x6, 0xb, 0x9, 0x0, 0xa, 0xd,
                                  0x3, 0xe, 0xf, 0x8, 0x4, 0x7, 0x1, 0x2};

const uint8_t kAsconSbox[32] = {4,  11, 31, 20, 26, 21, 9,  2,  27, 5,  8,
                                18, 29, 3,  6,  28, 30, 19, 7,  14, 0,  13,
                                17, 24, 16, 12, 1,  25, 22, 10, 15, 23};

uint8_t present_perm(uint8_t bit) {
  return bit == 63 ? 63 : static_cast<uint8_t>((16 * bit) % 63);
}

uint8_t ascon_sbox_formula(uint8_t in) {
  // x0 is the most significant of the five bits.
  int x0 = (in >> 4) & 1, x1 = (in >> 3) & 1, x2 = (in >> 2) & 1,
      x3 = (in >> 1) & 1, x4 = in & 1;
  x0 ^= x4;
  x4 ^= x3;
  x2 ^= x1;
  int t0 = ~x0 & x1, t1 = ~x1 & x2, t2 = ~x2 & x3, t3 = ~x3 & x4,
      t4 = ~x4 & x0;
  x0 ^= t1;
  x1 ^= t2;
  x2 ^= t3;
  x3 ^= t4;
  x4 ^= t0;
  x1 ^= x0;
  x0 ^= x4;
  x3 ^= x2;
  x2 = ~x2;
  return static_cast<uint8_t>(((x0 & 1) << 4) | ((x1 & 1) << 3) |
                              ((x2 & 1) << 2) | ((x3 & 1) << 1) | (x4 & 1));
}

const char* simon_z_sequence(int j) {
  static const char* z[5] = {
      "11111010001001010110000111001101111101000100101011000011100110",
      "10001110111110010011000010110101000111011111001001100001011010",
      "10101111011100000011010010011000101000010001111110010110110011",
      "11011011101011000110010111100000010010001010011100110100001111",
      "11010001111001101011011000100000010111000011001010010011101111"};
  return z[j];
}

}  // namespace cipher_detail

namespace {

struct SimonParams {
  int word_bits;   // n
  int key_words;   // m
  int z_index;
  int rounds;      // full-strength T
};

std::optional<SimonParams> simon_params(int block_bits, int key_bits) {
  struct Row { int bs, kl, z, T; };
  static const Row rows[] = {
      {32, 64, 0, 32},   {48, 72, 0, 36},  {48, 96, 1, 36},  {64, 96, 2, 42},
      {64, 128, 3, 44},  {96, 96, 2, 52},  {96, 144, 3, 54}, {128, 128, 2, 68},
      {128, 192, 3, 69}, {128, 256, 4, 72}};
  for (const Row& r : rows)
    if (r.bs == block_bits && r.kl == key_bits)
      return SimonParams{block_bits / 2, key_bits / (block_bits / 2), r.z, r.T};
  return std::nullopt;
}

uint64_t word_mask(int n) { return n == 64 ? ~0ULL : (1ULL << n) - 1; }
uint64_t rotl(uint64_t x, int r, int n) {
  uint64_t m = word_mask(n);
  r %= n;
  return ((x << r) | ((x & m) >> (n - r))) & m;
}
uint64_t rotr(uint64_t x, int r, int n) { return rotl(x, n - r, n); }

BitVec simon_encrypt(const SimonParams& p, const BitVec& key,
                     const BitVec& block) {
  int n = p.word_bits, m = p.key_words;
  const char* z = cipher_detail::simon_z_sequence(p.z_index);
  std::vector<uint64_t> k(p.rounds > m ? p.rounds : m);
  // Key words high-to-low: k[m-1] is the leftmost word of the pattern.
  for (int j = 0; j < m; ++j)
    k[m - 1 - j] = key.slice(static_cast<size_t>(j) * n, n).to_u64();
  uint64_t c = word_mask(n) ^ 3;  // 2^n - 4
  for (int i = m; i < p.rounds; ++i) {
    uint64_t tmp = rotr(k[i - 1], 3, n);
    if (m == 4) tmp ^= k[i - 3];
    tmp ^= rotr(tmp, 1, n);
    k[i] = (k[i - m] ^ tmp ^ c ^ static_cast<uint64_t>(z[(i - m) % 62] - '0')) &
           word_mask(n);
  }
  uint64_t x = block.slice(0, n).to_u64();
  uint64_t y = block.slice(n, n).to_u64();
  for (int i = 0; i < p.rounds; ++i) {
    uint64_t fx = (rotl(x, 1, n) & rotl(x, 8, n)) ^ rotl(x, 2, n);
    uint64_t nx = (y ^ fx ^ k[i]) & word_mask(n);
    y = x;
    x = nx;
  }
  return BitVec::concat(BitVec::from_u64(x, n), BitVec::from_u64(y, n));
}

using u128 = unsigned __int128;

u128 rotl128(u128 x, int r, int width) {
  u128 mask = width == 128 ? ~static_cast<u128>(0)
                           : ((static_cast<u128>(1) << width) - 1);
  r %= width;
  return ((x << r) | ((x & mask) >> (width - r))) & mask;
}

BitVec present_encrypt(int key_bits, int rounds, const BitVec& key,
                       const BitVec& block) {
  using cipher_detail::kPresentSbox;
  using cipher_detail::present_perm;
  u128 kreg = 0;
  for (size_t i = 0; i < key.width(); ++i)
    kreg = (kreg << 1) | static_cast<unsigned>(key.get(i));
  uint64_t state = block.to_u64();

  auto round_key = [&]() {
    return static_cast<uint64_t>(kreg >> (key_bits - 64));
  };
  for (int i = 1; i <= rounds; ++i) {
    state ^= round_key();
    uint64_t t = 0;
    for (int w = 0; w < 16; ++w)
      t |= static_cast<uint64_t>(kPresentSbox[(state >> (4 * w)) & 0xf])
           << (4 * w);
    uint64_t q = 0;
    for (int b = 0; b < 64; ++b)
      if ((t >> b) & 1) q |= 1ULL << present_perm(static_cast<uint8_t>(b));
    state = q;

    kreg = rotl128(kreg, 61, key_bits);
    if (key_bits == 80) {
      int top = static_cast<int>(kreg >> 76) & 0xf;
      kreg = (kreg & ~(static_cast<u128>(0xf) << 76)) |
             (static_cast<u128>(kPresentSbox[top]) << 76);
      kreg ^= static_cast<u128>(i) << 15;
    } else {  // 128
      int t1 = static_cast<int>(kreg >> 124) & 0xf;
      int t2 = static_cast<int>(kreg >> 120) & 0xf;
      kreg = (kreg & ~(static_cast<u128>(0xff) << 120)) |
             (static_cast<u128>(kPresentSbox[t1]) << 124) |
             (static_cast<u128>(kPresentSbox[t2]) << 120);
      kreg ^= static_cast<u128>(i) << 62;
    }
  }
  state ^= round_key();
  return BitVec::from_u64(state, 64);
}

const uint64_t kAsconRoundConst[12] = {0xf0, 0xe1, 0xd2, 0xc3, 0xb4, 0xa5,
                                       0x96, 0x87, 0x78, 0x69, 0x5a, 0x4b};

uint64_t ror64(uint64_t x, int r) { return (x >> r) | (x << (64 - r)); }

BitVec ascon_encrypt(int rounds, const BitVec& key, const BitVec& block) {
  const AsconConstants& cc = ascon_constants();
  uint64_t s[5];
  s[0] = cc.iv;
  s[1] = key.slice(0, 64).to_u64();
  s[2] = key.slice(64, 64).to_u64();
  s[3] = cc.nonce[0];
  s[4] = cc.nonce[1];
  // Reduced variants keep the tail of the constant schedule, matching how
  // the permutation family indexes fewer rounds.
  for (int r = 12 - rounds; r < 12; ++r) {
    s[2] ^= kAsconRoundConst[r];
    s[0] ^= s[4];
    s[4] ^= s[3];
    s[2] ^= s[1];
    uint64_t t[5];
    for (int i = 0; i < 5; ++i) t[i] = ~s[i] & s[(i + 1) % 5];
    for (int i = 0; i < 5; ++i) s[i] ^= t[(i + 1) % 5];
    s[1] ^= s[0];
    s[0] ^= s[4];
    s[3] ^= s[2];
    s[2] = ~s[2];
    s[0] ^= ror64(s[0], 19) ^ ror64(s[0], 28);
    s[1] ^= ror64(s[1], 61) ^ ror64(s[1], 39);
    s[2] ^= ror64(s[2], 1) ^ ror64(s[2], 6);
    s[3] ^= ror64(s[3], 10) ^ ror64(s[3], 17);
    s[4] ^= ror64(s[4], 7) ^ ror64(s[4], 41);
  }
  s[3] ^= key.slice(0, 64).to_u64();
  s[4] ^= key.slice(64, 64).to_u64();
  uint64_t hi = block.slice(0, 64).to_u64() ^ s[0];
  uint64_t lo = block.slice(64, 64).to_u64() ^ s[1];
  return BitVec::concat(BitVec::from_u64(hi, 64), BitVec::from_u64(lo, 64));
}

}  // namespace

const AsconConstants& ascon_constants() {
  static const AsconConstants c;
  return c;
}

std::optional<CipherSpec> CipherSpec::lookup(CipherFamily f, int block_bits,
                                             int key_bits) {
  switch (f) {
    case CipherFamily::Simon: {
      auto p = simon_params(block_bits, key_bits);
      if (!p) return std::nullopt;
      return CipherSpec{f, block_bits, key_bits, p->rounds};
    }
    case CipherFamily::Present:
      if (block_bits == 64 && (key_bits == 80 || key_bits == 128))
        return CipherSpec{f, block_bits, key_bits, 31};
      return std::nullopt;
    case CipherFamily::Ascon:
      if (block_bits == 128 && key_bits == 128)
        return CipherSpec{f, block_bits, key_bits, 12};
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<CipherSpec> CipherSpec::parse_name(std::string_view name) {
  std::vector<std::string> parts;
  size_t p = 0;
  while (true) {
    size_t d = name.find('-', p);
    parts.emplace_back(name.substr(p, d == std::string_view::npos ? d : d - p));
    if (d == std::string_view::npos) break;
    p = d + 1;
  }
  if (parts.size() != 3 && parts.size() != 4) return std::nullopt;
  CipherFamily fam;
  if (parts[0] == "simon") fam = CipherFamily::Simon;
  else if (parts[0] == "present") fam = CipherFamily::Present;
  else if (parts[0] == "ascon") fam = CipherFamily::Ascon;
  else return std::nullopt;
  int bs, kl, rounds;
  try {
    bs = std::stoi(parts[1]);
    kl = std::stoi(parts[2]);
    rounds = parts.size() == 4 ? std::stoi(parts[3]) : -1;
  } catch (...) {
    return std::nullopt;
  }
  auto spec = lookup(fam, bs, kl);
  if (!spec) return std::nullopt;
  if (parts.size() == 3) return spec;  // full-strength rounds
  if (rounds < 1) return std::nullopt;
  if (fam == CipherFamily::Ascon && rounds > 12) return std::nullopt;
  return spec->with_rounds(rounds);
}

std::vector<CipherSpec> CipherSpec::all_full_strength() {
  std::vector<CipherSpec> v;
  for (auto [bs, kl] : {std::pair{32, 64}, {48, 72}, {48, 96}, {64, 96},
                        {64, 128}, {96, 96}, {96, 144}, {128, 128}, {128, 192},
                        {128, 256}})
    v.push_back(*lookup(CipherFamily::Simon, bs, kl));
  v.push_back(*lookup(CipherFamily::Present, 64, 80));
  v.push_back(*lookup(CipherFamily::Present, 64, 128));
  v.push_back(*lookup(CipherFamily::Ascon, 128, 128));
  return v;
}

CipherSpec CipherSpec::with_rounds(int r) const {
  CipherSpec s = *this;
  s.rounds = r;
  return s;
}

bool CipherSpec::is_full_strength() const {
  auto base = lookup(family, block_bits, key_bits);
  return base && base->rounds == rounds;
}

std::string CipherSpec::name() const {
  std::ostringstream os;
  os << to_string(family) << "-" << block_bits << "-" << key_bits << "-"
     << rounds;
  return os.str();
}

BitVec reference_encrypt(const CipherSpec& spec, const BitVec& key,
                         const BitVec& block) {
  if (static_cast<int>(key.width()) != spec.key_bits)
    throw Error("key width " + std::to_string(key.width()) +
                " does not match " + spec.name());
  if (static_cast<int>(block.width()) != spec.block_bits)
    throw Error("block width " + std::to_string(block.width()) +
                " does not match " + spec.name());
  switch (spec.family) {
    case CipherFamily::Simon: {
      auto p = simon_params(spec.block_bits, spec.key_bits);
      SimonParams sp = *p;
      sp.rounds = spec.rounds;
      return simon_encrypt(sp, key, block);
    }
    case CipherFamily::Present:
      return present_encrypt(spec.key_bits, spec.rounds, key, block);
    case CipherFamily::Ascon:
      return ascon_encrypt(spec.rounds, key, block);
  }
  throw Error("unknown cipher family");
}

PatternTriple sample_pattern_triple(const CipherSpec& spec, uint64_t seed) {
  Rng rng(seed);
  PatternTriple t;
  t.x = rng.bits(spec.block_bits);
  t.k = rng.bits(spec.key_bits);
  t.y = reference_encrypt(spec, t.k, t.x);
  return t;
}

std::vector<KatVector> parse_kat_file(std::string_view text) {
  std::vector<KatVector> out;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (size_t h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string fam, key, pt, ct;
    int bs, kl, rounds;
    if (!(ls >> fam)) continue;  // blank
    if (!(ls >> bs >> kl >> rounds >> key >> pt >> ct))
      throw ParseError("malformed KAT entry", lineno);
    std::string extra;
    if (ls >> extra) throw ParseError("trailing tokens in KAT entry", lineno);
    auto spec = CipherSpec::parse_name(fam + "-" + std::to_string(bs) + "-" +
                                       std::to_string(kl) + "-" +
                                       std::to_string(rounds));
    if (!spec) throw ParseError("unknown cipher '" + fam + "'", lineno);
    KatVector v;
    v.spec = *spec;
    try {
      v.key = BitVec::from_hex(key, kl);
      v.plaintext = BitVec::from_hex(pt, bs);
      v.ciphertext = BitVec::from_hex(ct, bs);
    } catch (const Error& e) {
      throw ParseError(std::string(e.what()), lineno);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace gatelock
