// SPDX-License-Identifier: Apache-2.0
// gatelock: generate, lock, attack and verify combinational netlists.
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gatelock/analyze.hpp"
#include "gatelock/attacks.hpp"
#include "gatelock/bench_io.hpp"
#include "gatelock/cipher.hpp"
#include "gatelock/equiv.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/lock.hpp"
#include "gatelock/netlist.hpp"
#include "gatelock/sim.hpp"
#include "gatelock/verilog_io.hpp"

namespace {

using namespace gatelock;
using nlohmann::json;

// Exit codes: 0 success, 1 negative result, 2 usage/error, 3 inconclusive.
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kInconclusive = 3;

int usage_error(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  return kUsage;
}

int outcome_exit(AttackOutcome o) {
  switch (o) {
    case AttackOutcome::KeyRecovered:
    case AttackOutcome::DesignExtracted:
      return kOk;
    case AttackOutcome::NoSolution:
      return kNegative;
    case AttackOutcome::NotApplicable:
      return kInconclusive;
  }
  return kUsage;
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() &&
         s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// Bench by default; structural Verilog for *.v.
Netlist read_netlist(const std::string& path, const std::string& prefix) {
  if (ends_with(path, ".v"))
    return read_verilog_file(path, VerilogReadOptions{prefix});
  return read_bench_file(path, BenchReadOptions{prefix});
}

std::vector<std::string> net_names(const Netlist& n,
                                   const std::vector<NetId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (NetId id : ids) out.push_back(n.net(id).name);
  return out;
}

// Transcript file: {"format", "inputs", "outputs", "pairs": [[x, y], ...]}
// with patterns as 0/1 strings, MSB-first over the name lists.
constexpr const char* kTranscriptFormat = "gatelock-oracle-transcript-v1";

Oracle load_transcript(const std::string& path) {
  json j = json::parse(read_text_file(path));
  if (j.value("format", "") != kTranscriptFormat)
    throw Error(path + ": not a " + std::string(kTranscriptFormat) +
                " document");
  auto inputs = j.at("inputs").get<std::vector<std::string>>();
  auto outputs = j.at("outputs").get<std::vector<std::string>>();
  std::vector<std::pair<BitVec, BitVec>> pairs;
  for (const json& p : j.at("pairs"))
    pairs.emplace_back(BitVec::from_bits(p.at(0).get<std::string>()),
                       BitVec::from_bits(p.at(1).get<std::string>()));
  return Oracle::from_transcript(std::move(inputs), std::move(outputs),
                                 std::move(pairs));
}

void save_transcript(const std::string& path, const Oracle& o) {
  json j;
  j["format"] = kTranscriptFormat;
  j["inputs"] = o.input_names();
  j["outputs"] = o.output_names();
  json pairs = json::array();
  for (const auto& [x, y] : o.transcript())
    pairs.push_back(json::array({x.to_bits(), y.to_bits()}));
  j["pairs"] = std::move(pairs);
  write_text_file(path, j.dump(2) + "\n");
}

// All options of one invocation; every randomized job carries its own seed.
struct JobConfig {
  std::string in_path, out_path, report_path, record_path;
  std::string oracle_path, transcript_path, extracted_path, removal_path;
  std::string key_prefix;
  std::string scheme, attack, spec_name, hint_name;
  std::string key_text, fix_x, pattern_text, x_text;
  uint64_t seed = 0;
  size_t num_keys = 0, width = 0;
  LutConfig lut;
  double max_seconds = 0;
  int64_t max_conflicts = -1, max_iterations = -1;
  bool timing = false, expand_mux = false, as_json = false, as_hex = false;
  bool circuits = true;
  std::string save_transcript_path;
};

// ---------------------------------------------------------------- gen-cipher

int cmd_gen_cipher(const JobConfig& cfg) {
  auto spec = CipherSpec::parse_name(cfg.spec_name);
  if (!spec) return usage_error("unknown cipher spec: " + cfg.spec_name);
  Netlist c = build_unrolled_circuit(*spec);
  if (!cfg.fix_x.empty()) {
    BitVec x = BitVec::from_hex(cfg.fix_x, spec->block_bits);
    c = specialize_plaintext(c, x);
  }
  write_bench_file(cfg.out_path, c, BenchWriteOptions{cfg.expand_mux});
  std::printf("%s -> %s\n%s", spec->name().c_str(), cfg.out_path.c_str(),
              format_stats(stats(c)).c_str());
  return kOk;
}

// ---------------------------------------------------------------------- lock

int cmd_lock(const JobConfig& cfg) {
  Netlist orig = read_netlist(cfg.in_path, cfg.key_prefix);
  if (!orig.keys.empty())
    return usage_error(cfg.in_path + " already has key inputs");

  LockRecord rec;
  Netlist locked;
  if (cfg.scheme == "xor") {
    if (!cfg.num_keys) return usage_error("xor locking needs --keys");
    locked = lock_xor(orig, cfg.num_keys, cfg.seed, rec);
  } else if (cfg.scheme == "lut") {
    if (!cfg.lut.count) return usage_error("lut locking needs --count");
    locked = lock_lut(orig, cfg.lut, cfg.lut.count, cfg.seed, rec);
  } else if (cfg.scheme == "antisat") {
    if (!cfg.width) return usage_error("antisat locking needs --width");
    locked = lock_antisat(orig, cfg.width, cfg.seed, rec);
  } else if (cfg.scheme == "ttlock") {
    if (!cfg.width) return usage_error("ttlock locking needs --width");
    std::optional<BitVec> pattern;
    if (!cfg.pattern_text.empty())
      pattern = BitVec::parse(cfg.pattern_text, cfg.width);
    locked = lock_ttlock(orig, cfg.width, pattern, cfg.seed, rec);
  } else if (cfg.scheme == "cipher-xor" || cfg.scheme == "compound") {
    auto spec = CipherSpec::parse_name(cfg.spec_name);
    if (!spec)
      return usage_error(cfg.spec_name.empty()
                             ? cfg.scheme + " locking needs --cipher"
                             : "unknown cipher spec: " + cfg.spec_name);
    locked = cfg.scheme == "compound"
                 ? lock_compound(orig, *spec, cfg.lut, cfg.seed, rec)
                 : lock_cipher_xor(orig, *spec, cfg.seed, rec);
  } else {
    return usage_error("unknown scheme: " + cfg.scheme);
  }

  if (rec.nok != expected_nok(rec))
    throw Error("internal: key count " + std::to_string(rec.nok) +
                " disagrees with the scheme formula " +
                std::to_string(expected_nok(rec)));

  // Full miter self-check before anything is written.
  EquivOptions eo;
  eo.key_b = rec.key;
  EquivResult er = check_equivalence(orig, locked, eo);
  if (er.verdict != EquivVerdict::Equivalent)
    throw Error("internal: locked design is not equivalent at the secret key (" +
                std::string(to_string(er.verdict)) + ")");

  write_bench_file(cfg.out_path, locked, BenchWriteOptions{cfg.expand_mux});
  std::string record_path = cfg.record_path.empty()
                                ? cfg.out_path + ".record.json"
                                : cfg.record_path;
  write_text_file(record_path, rec.to_json() + "\n");

  std::printf("scheme %s  nok %zu  gates %zu -> %zu (+%zu)\n",
              rec.scheme.c_str(), rec.nok, orig.num_gates(),
              locked.num_gates(), locked.num_gates() - orig.num_gates());
  std::printf("locked  %s\nrecord  %s\n", cfg.out_path.c_str(),
              record_path.c_str());
  return kOk;
}

// -------------------------------------------------------------------- attack

int cmd_attack(JobConfig& cfg) {
  Netlist locked = read_netlist(cfg.in_path, cfg.key_prefix);

  if (cfg.attack == "scan") {
    CipherOutputScan s = find_cipher_outputs(locked);
    json j;
    j["attack"] = "scan";
    j["valid"] = s.valid;
    j["reason"] = s.reason;
    j["candidates"] = s.candidates;
    std::string text = j.dump(2) + "\n";
    if (cfg.report_path.empty())
      std::fputs(text.c_str(), stdout);
    else
      write_text_file(cfg.report_path, text);
    std::fprintf(stderr, "scan: %s (%zu candidates)%s%s\n",
                 s.valid ? "valid" : "invalid", s.candidates.size(),
                 s.reason.empty() ? "" : " — ", s.reason.c_str());
    return s.valid ? kOk : kNegative;
  }

  std::optional<Oracle> oracle;
  if (!cfg.oracle_path.empty()) {
    Netlist hidden = read_netlist(cfg.oracle_path, cfg.key_prefix);
    if (!hidden.keys.empty())
      return usage_error("oracle netlist " + cfg.oracle_path +
                         " still has key inputs; supply an activated design");
    oracle = Oracle::from_netlist(hidden);
  } else if (!cfg.transcript_path.empty()) {
    oracle = load_transcript(cfg.transcript_path);
  }

  AttackBudget budget;
  budget.max_seconds = cfg.max_seconds;
  budget.max_conflicts = cfg.max_conflicts;
  budget.max_iterations = cfg.max_iterations;
  budget.seed = cfg.seed;

  AttackReport rep;
  if (cfg.attack == "sat" || cfg.attack == "removal" ||
      cfg.attack == "brute-force") {
    if (!oracle)
      return usage_error(cfg.attack + " needs --oracle or --transcript");
    if (cfg.attack == "sat")
      rep = sat_attack(locked, *oracle, budget);
    else if (cfg.attack == "removal")
      rep = removal_attack(locked, *oracle, budget);
    else
      rep = brute_force_key_search(locked, *oracle, budget);
  } else if (cfg.attack == "algebraic") {
    AttackReport removal;  // empty without a prior artifact: not-applicable
    if (!cfg.removal_path.empty())
      removal = AttackReport::from_json_text(read_text_file(cfg.removal_path));
    std::optional<CipherSpec> hint;
    if (!cfg.hint_name.empty()) {
      hint = CipherSpec::parse_name(cfg.hint_name);
      if (!hint) return usage_error("unknown cipher spec: " + cfg.hint_name);
    }
    rep = algebraic_attack(locked, removal, hint, budget);
  } else {
    return usage_error("unknown attack: " + cfg.attack);
  }

  if (rep.extracted && !cfg.extracted_path.empty()) {
    write_bench_file(cfg.extracted_path, *rep.extracted,
                     BenchWriteOptions{cfg.expand_mux});
    rep.extracted_path = cfg.extracted_path;
  }
  if (!cfg.save_transcript_path.empty() && oracle)
    save_transcript(cfg.save_transcript_path, *oracle);

  std::string text = rep.to_json(cfg.timing) + "\n";
  if (cfg.report_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_text_file(cfg.report_path, text);
  std::fprintf(stderr, "%s: %s%s%s\n", rep.attack.c_str(),
               to_string(rep.outcome), rep.notes.empty() ? "" : " — ",
               rep.notes.c_str());
  return outcome_exit(rep.outcome);
}

// -------------------------------------------------------------------- verify

int cmd_verify(const JobConfig& cfg) {
  Netlist orig = read_netlist(cfg.in_path, cfg.key_prefix);
  Netlist locked = read_netlist(cfg.out_path, cfg.key_prefix);
  if (!orig.keys.empty())
    return usage_error("the reference design must not have key inputs");

  BitVec key;
  if (!cfg.record_path.empty()) {
    key = LockRecord::from_json_text(read_text_file(cfg.record_path)).key;
  } else if (!cfg.key_text.empty()) {
    key = BitVec::parse(cfg.key_text);
  } else {
    return usage_error("verify needs --key or --record");
  }
  if (key.width() != locked.keys.size())
    return usage_error("key is " + std::to_string(key.width()) +
                       " bits; the locked design has " +
                       std::to_string(locked.keys.size()) + " key inputs");

  EquivOptions eo;
  eo.key_b = key;
  eo.limits.max_conflicts = cfg.max_conflicts;
  eo.limits.max_seconds = cfg.max_seconds > 0 ? cfg.max_seconds : -1;
  EquivResult er = check_equivalence(orig, locked, eo);
  switch (er.verdict) {
    case EquivVerdict::Equivalent:
      std::printf("equivalent\n");
      return kOk;
    case EquivVerdict::Inequivalent:
      std::printf("inequivalent on x=%s\n", er.counterexample.to_bits().c_str());
      return kNegative;
    case EquivVerdict::Unknown:
      std::printf("unknown (budget exhausted after %lld conflicts)\n",
                  static_cast<long long>(er.conflicts));
      return kInconclusive;
  }
  return kUsage;
}

// --------------------------------------------------------------------- stats

int cmd_stats(const JobConfig& cfg) {
  Netlist n = read_netlist(cfg.in_path, cfg.key_prefix);
  NetlistStats s = stats(n);
  if (!cfg.as_json) {
    std::fputs(format_stats(s).c_str(), stdout);
    return kOk;
  }
  json j;
  j["inputs"] = s.num_inputs;
  j["keys"] = s.num_keys;
  j["outputs"] = s.num_outputs;
  j["gates"] = s.num_gates;
  j["nets"] = s.num_nets;
  j["depth"] = s.depth;
  json kinds;
  for (const auto& [kind, count] : s.by_kind) kinds[to_string(kind)] = count;
  j["by_kind"] = std::move(kinds);
  std::printf("%s\n", j.dump(2).c_str());
  return kOk;
}

// ------------------------------------------------------------------ simulate

int cmd_simulate(const JobConfig& cfg) {
  Netlist n = read_netlist(cfg.in_path, cfg.key_prefix);
  BitVec x = BitVec::parse(cfg.x_text, n.inputs.size());
  std::optional<BitVec> key;
  if (!cfg.key_text.empty()) {
    key = BitVec::parse(cfg.key_text, n.keys.size());
  } else if (!n.keys.empty()) {
    std::string names;
    for (const std::string& s : net_names(n, n.keys))
      names += (names.empty() ? "" : ", ") + s;
    return usage_error("unassigned key inputs: " + names);
  }
  BitVec y = simulate(n, x, key);
  std::printf("%s\n", cfg.as_hex ? y.to_hex().c_str() : y.to_bits().c_str());
  return kOk;
}

// ----------------------------------------------------------------- kat-check

int cmd_kat_check(const JobConfig& cfg) {
  std::vector<KatVector> vecs = parse_kat_file(read_text_file(cfg.in_path));
  if (vecs.empty()) return usage_error(cfg.in_path + " holds no vectors");

  size_t failures = 0;
  auto report = [&](const char* what, const CipherSpec& spec, bool ok) {
    std::printf("%-8s %-18s %s\n", what, spec.name().c_str(),
                ok ? "ok" : "MISMATCH");
    if (!ok) ++failures;
  };

  std::map<std::string, Netlist> circuits;
  for (const KatVector& v : vecs) {
    BitVec ref = reference_encrypt(v.spec, v.key, v.plaintext);
    report("ref", v.spec, ref == v.ciphertext);
    if (!cfg.circuits) continue;
    auto [it, fresh] = circuits.try_emplace(v.spec.name());
    if (fresh) it->second = build_unrolled_circuit(v.spec);
    BitVec y = simulate(it->second, BitVec::concat(v.plaintext, v.key));
    report("circuit", v.spec, y == v.ciphertext);
  }

  if (!cfg.out_path.empty()) {
    Netlist b = read_netlist(cfg.out_path, cfg.key_prefix);
    size_t matched = 0;
    for (const KatVector& v : vecs) {
      size_t bs = v.plaintext.width(), kl = v.key.width();
      if (b.inputs.size() != bs + kl || b.outputs.size() != bs) continue;
      ++matched;
      BitVec y = simulate(b, BitVec::concat(v.plaintext, v.key));
      report("bench", v.spec, y == v.ciphertext);
    }
    if (!matched)
      return usage_error("no vector matches the interface of " + cfg.out_path);
  }

  std::printf("%zu vectors, %zu failures\n", vecs.size(), failures);
  return failures ? kNegative : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gate-level logic locking toolchain"};
  app.require_subcommand(1);
  JobConfig cfg;
  std::function<int()> job;

  auto add_prefix = [&](CLI::App* sc) {
    sc->add_option("--key-prefix", cfg.key_prefix,
                   "key-input name prefix (default $GATELOCK_KEY_PREFIX or "
                   "'keyinput')");
  };
  auto add_budget = [&](CLI::App* sc) {
    sc->add_option("--max-seconds", cfg.max_seconds, "wall-clock budget");
    sc->add_option("--max-conflicts", cfg.max_conflicts,
                   "cumulative solver conflict budget");
  };

  CLI::App* gen = app.add_subcommand(
      "gen-cipher", "emit an unrolled block cipher as a bench file");
  gen->add_option("spec", cfg.spec_name, "cipher name, e.g. simon-32-64-32")
      ->required();
  gen->add_option("-o,--out", cfg.out_path, "bench file to write")->required();
  gen->add_option("--fix-x", cfg.fix_x,
                  "specialize the plaintext to this hex block");
  gen->add_flag("--expand-mux", cfg.expand_mux,
                "rewrite MUX gates for strict ISCAS consumers");
  gen->callback([&] { job = [&] { return cmd_gen_cipher(cfg); }; });

  CLI::App* lock = app.add_subcommand("lock", "lock a netlist");
  lock->add_option("scheme", cfg.scheme,
                   "xor | lut | antisat | ttlock | cipher-xor | compound")
      ->required();
  lock->add_option("input", cfg.in_path, "netlist to lock")
      ->required()
      ->check(CLI::ExistingFile);
  lock->add_option("-o,--out", cfg.out_path, "locked bench to write")
      ->required();
  lock->add_option("--record", cfg.record_path,
                   "lock record path (default <out>.record.json)");
  lock->add_option("--seed", cfg.seed, "seed fixing every random choice")
      ->required();
  lock->add_option("--keys", cfg.num_keys, "xor: number of key gates");
  lock->add_option("--width", cfg.width, "antisat/ttlock: input width");
  lock->add_option("--pattern", cfg.pattern_text,
                   "ttlock: protected pattern (default: sampled)");
  lock->add_option("--cipher", cfg.spec_name,
                   "cipher-xor/compound: cipher spec name");
  lock->add_option("--m", cfg.lut.m, "lut/compound: maximum LUT inputs");
  lock->add_option("--count", cfg.lut.count,
                   "lut/compound: LUT placements (0 = scheme default)");
  lock->add_flag("--forced", cfg.lut.forced, "pad every LUT to exactly m inputs");
  lock->add_flag("--expand-mux", cfg.expand_mux,
                 "rewrite MUX gates for strict ISCAS consumers");
  add_prefix(lock);
  lock->callback([&] { job = [&] { return cmd_lock(cfg); }; });

  CLI::App* atk = app.add_subcommand("attack", "attack a locked netlist");
  atk->add_option("name", cfg.attack,
                  "sat | removal | algebraic | brute-force | scan")
      ->required();
  atk->add_option("locked", cfg.in_path, "locked netlist")
      ->required()
      ->check(CLI::ExistingFile);
  atk->add_option("--oracle", cfg.oracle_path,
                  "activated (key-free) netlist standing in for the chip")
      ->check(CLI::ExistingFile);
  atk->add_option("--transcript", cfg.transcript_path,
                  "recorded query transcript (JSON)")
      ->check(CLI::ExistingFile);
  atk->add_option("-o,--report", cfg.report_path,
                  "attack report path (default: stdout)");
  atk->add_option("--extracted", cfg.extracted_path,
                  "removal: where to write the recovered bench");
  atk->add_option("--removal-report", cfg.removal_path,
                  "algebraic: report of the prior removal run")
      ->check(CLI::ExistingFile);
  atk->add_option("--hint", cfg.hint_name,
                  "algebraic: cipher spec believed to be inside");
  atk->add_option("--save-transcript", cfg.save_transcript_path,
                  "write the queries answered during this run");
  atk->add_option("--seed", cfg.seed, "probe/validation seed")->required();
  atk->add_option("--max-iterations", cfg.max_iterations,
                  "distinguishing-input iteration budget");
  atk->add_flag("--timing", cfg.timing, "include wall-clock time in the report");
  atk->add_flag("--expand-mux", cfg.expand_mux,
                "rewrite MUX gates in written benches");
  add_budget(atk);
  add_prefix(atk);
  atk->callback([&] { job = [&] { return cmd_attack(cfg); }; });

  CLI::App* ver = app.add_subcommand(
      "verify", "prove a locked design equivalent under a key");
  ver->add_option("original", cfg.in_path, "reference netlist")
      ->required()
      ->check(CLI::ExistingFile);
  ver->add_option("locked", cfg.out_path, "locked netlist")
      ->required()
      ->check(CLI::ExistingFile);
  ver->add_option("--key", cfg.key_text, "key bits (0b... / 0x... / 0/1 string)");
  ver->add_option("--record", cfg.record_path, "lock record holding the key")
      ->check(CLI::ExistingFile);
  add_budget(ver);
  add_prefix(ver);
  ver->callback([&] { job = [&] { return cmd_verify(cfg); }; });

  CLI::App* st = app.add_subcommand("stats", "print netlist statistics");
  st->add_option("input", cfg.in_path, "netlist")
      ->required()
      ->check(CLI::ExistingFile);
  st->add_flag("--json", cfg.as_json, "machine-readable output");
  add_prefix(st);
  st->callback([&] { job = [&] { return cmd_stats(cfg); }; });

  CLI::App* sim = app.add_subcommand("simulate", "evaluate one input pattern");
  sim->add_option("input", cfg.in_path, "netlist")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("-x,--x", cfg.x_text, "primary-input pattern, MSB-first")
      ->required();
  sim->add_option("--key", cfg.key_text, "key-input pattern, MSB-first");
  sim->add_flag("--hex", cfg.as_hex, "print the output pattern in hex");
  add_prefix(sim);
  sim->callback([&] { job = [&] { return cmd_simulate(cfg); }; });

  CLI::App* kat = app.add_subcommand(
      "kat-check", "validate ciphers against known-answer vectors");
  kat->add_option("vectors", cfg.in_path, "KAT fixture file")
      ->required()
      ->check(CLI::ExistingFile);
  kat->add_flag("--circuits,!--no-circuits", cfg.circuits,
                "also check the unrolled circuits (default on)");
  kat->add_option("--bench", cfg.out_path,
                  "additionally check this bench against matching vectors")
      ->check(CLI::ExistingFile);
  add_prefix(kat);
  kat->callback([&] { job = [&] { return cmd_kat_check(cfg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return job ? job() : kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
}
