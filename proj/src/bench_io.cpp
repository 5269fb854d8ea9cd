// SPDX-License-Identifier: Apache-2.0
#include "gatelock/bench_io.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gatelock/errors.hpp"

namespace gatelock {

std::string default_key_prefix() {
  const char* env = std::getenv("GATELOCK_KEY_PREFIX");
  if (env && *env) return env;
  return "keyinput";
}

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         c == '[' || c == ']' || c == '.';
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

struct PendingGate {
  std::string out;
  std::string kind;
  std::vector<std::string> args;
  int line;
};

}  // namespace

Netlist parse_bench(std::string_view text, const BenchReadOptions& opt) {
  std::string key_prefix =
      opt.key_prefix.empty() ? default_key_prefix() : opt.key_prefix;

  std::vector<std::pair<std::string, int>> decl_inputs, decl_outputs;
  std::vector<PendingGate> pending;

  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;

    if (size_t h = line.find('#'); h != std::string_view::npos)
      line = line.substr(0, h);
    line = strip(line);
    if (line.empty()) continue;

    auto parse_call = [&](std::string_view s, std::string& fn,
                          std::vector<std::string>& args) {
      size_t open = s.find('(');
      size_t close = s.rfind(')');
      if (open == std::string_view::npos || close == std::string_view::npos ||
          close < open || !strip(s.substr(close + 1)).empty())
        throw ParseError("malformed line '" + std::string(s) + "'", lineno);
      fn = std::string(strip(s.substr(0, open)));
      std::string_view inner = s.substr(open + 1, close - open - 1);
      size_t p = 0;
      while (true) {
        size_t comma = inner.find(',', p);
        std::string_view piece = comma == std::string_view::npos
                                     ? inner.substr(p)
                                     : inner.substr(p, comma - p);
        piece = strip(piece);
        if (!piece.empty()) {
          for (char c : piece)
            if (!is_name_char(c))
              throw ParseError("invalid net name '" + std::string(piece) + "'",
                               lineno);
          args.emplace_back(piece);
        } else if (comma != std::string_view::npos || !args.empty()) {
          throw ParseError("empty operand", lineno);
        }
        if (comma == std::string_view::npos) break;
        p = comma + 1;
      }
    };

    size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      std::string fn;
      std::vector<std::string> args;
      parse_call(line, fn, args);
      for (char& c : fn)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (args.size() != 1)
        throw ParseError(fn + " takes exactly one net", lineno);
      if (fn == "INPUT")
        decl_inputs.emplace_back(args[0], lineno);
      else if (fn == "OUTPUT")
        decl_outputs.emplace_back(args[0], lineno);
      else
        throw ParseError("unknown declaration '" + fn + "'", lineno);
      continue;
    }

    PendingGate g;
    g.line = lineno;
    std::string_view lhs = strip(line.substr(0, eq));
    if (lhs.empty()) throw ParseError("missing assignment target", lineno);
    for (char c : lhs)
      if (!is_name_char(c))
        throw ParseError("invalid net name '" + std::string(lhs) + "'", lineno);
    g.out = std::string(lhs);
    parse_call(strip(line.substr(eq + 1)), g.kind, g.args);
    pending.push_back(std::move(g));
  }

  Netlist n;
  for (auto& [name, ln] : decl_inputs) {
    if (n.has(name))
      throw ParseError("duplicate definition of '" + name + "'", ln);
    bool is_key = name.rfind(key_prefix, 0) == 0;
    n.add_net(name, is_key ? NetRole::Key : NetRole::Input);
  }
  for (auto& g : pending) {
    if (n.has(g.out))
      throw ParseError("duplicate definition of '" + g.out + "'", g.line);
    n.add_net(g.out, NetRole::Internal);
  }
  for (auto& [name, ln] : decl_outputs) {
    NetId id = n.find(name);
    if (id == kNoNet)
      throw ParseError("OUTPUT(" + name + ") is never defined", ln);
    if (n.net(id).role != NetRole::Internal)
      throw ParseError("OUTPUT(" + name + ") conflicts with its earlier role",
                       ln);
    n.mark_output(id);
  }
  for (auto& g : pending) {
    auto kind = gate_kind_from_string(g.kind);
    if (!kind) {
      std::string u = g.kind;
      for (char& c : u)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (u == "DFF" || u == "DFFSR" || u == "LATCH")
        throw ParseError("sequential element " + u +
                             " is not supported (combinational netlists only)",
                         g.line);
      throw ParseError("unknown gate kind '" + g.kind + "'", g.line);
    }
    if (!arity_ok(*kind, g.args.size()))
      throw ParseError(std::string(to_string(*kind)) + " with " +
                           std::to_string(g.args.size()) + " inputs",
                       g.line);
    std::vector<NetId> in;
    in.reserve(g.args.size());
    for (auto& a : g.args) {
      NetId id = n.find(a);
      if (id == kNoNet)
        throw ParseError("undefined net '" + a + "'", g.line);
      in.push_back(id);
    }
    n.add_gate(*kind, std::move(in), n.find(g.out));
  }
  n.validate();
  return n;
}

std::string emit_bench(const Netlist& n, const BenchWriteOptions& opt) {
  Netlist expanded;
  const Netlist* src = &n;
  if (opt.expand_mux) {
    bool any = false;
    for (const Gate& g : n.gates)
      if (g.kind == GateKind::Mux2) { any = true; break; }
    if (any) {
      expanded = n;  // rewrite in place on the copy
      std::vector<Gate> out;
      for (Gate& g : expanded.gates) {
        if (g.kind != GateKind::Mux2) {
          out.push_back(std::move(g));
          continue;
        }
        NetId d0 = g.inputs[0], d1 = g.inputs[1], s = g.inputs[2];
        std::string base = expanded.net(g.output).name;
        NetId ns = expanded.add_internal(base + "$ns");
        NetId a0 = expanded.add_internal(base + "$a0");
        NetId a1 = expanded.add_internal(base + "$a1");
        out.push_back(Gate{GateKind::Not, {s}, ns});
        out.push_back(Gate{GateKind::And, {d0, ns}, a0});
        out.push_back(Gate{GateKind::And, {d1, s}, a1});
        out.push_back(Gate{GateKind::Or, {a0, a1}, g.output});
      }
      expanded.gates = std::move(out);
      src = &expanded;
    }
  }

  std::ostringstream os;
  for (NetId id : src->inputs) os << "INPUT(" << src->net(id).name << ")\n";
  for (NetId id : src->keys) os << "INPUT(" << src->net(id).name << ")\n";
  for (NetId id : src->outputs) os << "OUTPUT(" << src->net(id).name << ")\n";
  for (uint32_t g : src->topo_order()) {
    const Gate& gate = src->gates[g];
    os << src->net(gate.output).name << " = " << to_string(gate.kind) << "(";
    for (size_t i = 0; i < gate.inputs.size(); ++i) {
      if (i) os << ", ";
      os << src->net(gate.inputs[i]).name;
    }
    os << ")\n";
  }
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("write to '" + path + "' failed");
}

Netlist read_bench_file(const std::string& path, const BenchReadOptions& opt) {
  try {
    return parse_bench(read_text_file(path), opt);
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_bench_file(const std::string& path, const Netlist& n,
                      const BenchWriteOptions& opt) {
  write_text_file(path, emit_bench(n, opt));
}

}  // namespace gatelock
