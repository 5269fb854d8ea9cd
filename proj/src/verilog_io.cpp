// SPDX-License-Identifier: Apache-2.0
#include "gatelock/verilog_io.hpp"

#include <cctype>

#include "gatelock/bench_io.hpp"
#include "gatelock/errors.hpp"

namespace gatelock {

namespace {

struct Token {
  std::string text;
  int line;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  size_t i = 0;
  auto isident = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
           c == '\'';
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') { ++line; ++i; continue; }
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      i += 2;
      while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) {
        if (text[i] == '\n') ++line;
        ++i;
      }
      if (i + 1 >= text.size()) throw ParseError("unterminated comment", line);
      i += 2;
      continue;
    }
    if (isident(c)) {
      size_t j = i;
      while (j < text.size() && isident(text[j])) ++j;
      out.push_back({std::string(text.substr(i, j - i)), line});
      i = j;
      continue;
    }
    if (std::string("()[]:;,=").find(c) != std::string::npos) {
      out.push_back({std::string(1, c), line});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line);
  }
  return out;
}

struct Instance {
  GateKind kind;
  std::vector<std::string> nets;  // output first
  int line;
};

}  // namespace

Netlist parse_verilog(std::string_view text, const VerilogReadOptions& opt) {
  std::string key_prefix =
      opt.key_prefix.empty() ? default_key_prefix() : opt.key_prefix;
  std::vector<Token> toks = tokenize(text);
  size_t p = 0;
  auto peek = [&]() -> const Token& {
    static Token eof{"", 0};
    return p < toks.size() ? toks[p] : eof;
  };
  auto next = [&]() -> Token {
    if (p >= toks.size()) throw ParseError("unexpected end of file");
    return toks[p++];
  };
  auto expect = [&](const std::string& s) {
    Token t = next();
    if (t.text != s)
      throw ParseError("expected '" + s + "', got '" + t.text + "'", t.line);
  };
  auto is_ident = [](const std::string& s) {
    return !s.empty() && (std::isalpha(static_cast<unsigned char>(s[0])) ||
                          s[0] == '_' || s[0] == '$');
  };

  if (peek().text != "module") throw ParseError("expected 'module'", peek().line);
  next();
  Token name = next();
  if (!is_ident(name.text)) throw ParseError("bad module name", name.line);
  if (peek().text == "(") {
    int depth = 0;
    while (true) {
      Token t = next();
      if (t.text == "(") ++depth;
      if (t.text == ")" && --depth == 0) break;
    }
  }
  expect(";");

  // name -> expanded bit names (single entry for scalars)
  struct Decl { std::vector<std::string> bits; };
  std::vector<std::pair<std::string, Decl>> in_decls, out_decls;
  std::vector<Instance> instances;
  std::vector<std::pair<std::string, std::string>> assigns;  // lhs, rhs
  std::vector<std::pair<std::string, int>> const_assigns;    // lhs, 0/1

  auto parse_range = [&]() -> std::pair<long, long> {
    expect("[");
    Token hi = next();
    expect(":");
    Token lo = next();
    expect("]");
    try {
      return {std::stol(hi.text), std::stol(lo.text)};
    } catch (...) {
      throw ParseError("bad range bound", hi.line);
    }
  };
  auto expand = [&](const std::string& base, bool has_range,
                    std::pair<long, long> r) {
    Decl d;
    if (!has_range) {
      d.bits.push_back(base);
    } else {
      long step = r.first >= r.second ? -1 : 1;
      for (long i = r.first;; i += step) {
        d.bits.push_back(base + "[" + std::to_string(i) + "]");
        if (i == r.second) break;
      }
    }
    return d;
  };
  // Net reference: name or name[idx].
  auto net_ref = [&]() -> std::string {
    Token t = next();
    if (!is_ident(t.text))
      throw ParseError("expected net name, got '" + t.text + "'", t.line);
    std::string s = t.text;
    if (peek().text == "[") {
      next();
      Token idx = next();
      expect("]");
      s += "[" + idx.text + "]";
    }
    return s;
  };

  while (true) {
    Token t = next();
    if (t.text == "endmodule") break;
    if (t.text == "input" || t.text == "output" || t.text == "wire") {
      bool has_range = peek().text == "[";
      std::pair<long, long> r{0, 0};
      if (has_range) r = parse_range();
      while (true) {
        Token id = next();
        if (!is_ident(id.text))
          throw ParseError("bad declaration name '" + id.text + "'", id.line);
        Decl d = expand(id.text, has_range, r);
        if (t.text == "input")
          in_decls.emplace_back(id.text, d);
        else if (t.text == "output")
          out_decls.emplace_back(id.text, d);
        // wires are implicit; nothing to record
        Token sep = next();
        if (sep.text == ";") break;
        if (sep.text != ",")
          throw ParseError("expected ',' or ';' in declaration", sep.line);
      }
      continue;
    }
    if (t.text == "assign") {
      std::string lhs = net_ref();
      expect("=");
      Token rhs = peek();
      if (rhs.text == "1'b0" || rhs.text == "1'b1") {
        next();
        const_assigns.emplace_back(lhs, rhs.text == "1'b1" ? 1 : 0);
      } else {
        assigns.emplace_back(lhs, net_ref());
      }
      expect(";");
      continue;
    }
    auto kind = gate_kind_from_string(t.text);
    if (!kind || *kind == GateKind::Mux2 || *kind == GateKind::Const0 ||
        *kind == GateKind::Const1) {
      if (t.text == "always" || t.text == "reg" || t.text == "initial")
        throw ParseError("behavioral construct '" + t.text +
                             "' is not supported (structural subset only)",
                         t.line);
      throw ParseError("unsupported construct '" + t.text + "'", t.line);
    }
    Instance inst;
    inst.kind = *kind;
    inst.line = t.line;
    if (peek().text != "(") {
      Token iname = next();  // optional instance name
      if (!is_ident(iname.text))
        throw ParseError("bad instance name '" + iname.text + "'", iname.line);
    }
    expect("(");
    while (true) {
      inst.nets.push_back(net_ref());
      Token sep = next();
      if (sep.text == ")") break;
      if (sep.text != ",")
        throw ParseError("expected ',' or ')' in instance", sep.line);
    }
    expect(";");
    if (inst.nets.size() < 2)
      throw ParseError("gate instance needs an output and inputs", inst.line);
    if (!arity_ok(inst.kind, inst.nets.size() - 1))
      throw ParseError(std::string(to_string(inst.kind)) + " with " +
                           std::to_string(inst.nets.size() - 1) + " inputs",
                       inst.line);
    instances.push_back(std::move(inst));
  }

  Netlist n;
  for (auto& [base, d] : in_decls) {
    bool is_key = base.rfind(key_prefix, 0) == 0;
    for (auto& b : d.bits) n.add_net(b, is_key ? NetRole::Key : NetRole::Input);
  }
  std::vector<std::string> po_names;
  for (auto& [base, d] : out_decls)
    for (auto& b : d.bits) {
      if (n.has(b)) throw ParseError("port '" + b + "' declared twice");
      n.add_net(b, NetRole::Internal);
      po_names.push_back(b);
    }
  auto ensureexists = [&](const std::string& nm) -> NetId {
    NetId id = n.find(nm);
    return id != kNoNet ? id : n.add_net(nm, NetRole::Internal);
  };
  for (auto& inst : instances) {
    std::vector<NetId> in;
    NetId out = ensureexists(inst.nets[0]);
    for (size_t i = 1; i < inst.nets.size(); ++i)
      in.push_back(ensureexists(inst.nets[i]));
    n.add_gate(inst.kind, std::move(in), out);
  }
  for (auto& [lhs, rhs] : assigns)
    n.add_gate(GateKind::Buf, {ensureexists(rhs)}, ensureexists(lhs));
  for (auto& [lhs, v] : const_assigns)
    n.add_gate(v ? GateKind::Const1 : GateKind::Const0, {}, ensureexists(lhs));
  for (auto& nm : po_names) n.mark_output(n.find(nm));
  n.validate();
  return n;
}

Netlist read_verilog_file(const std::string& path,
                          const VerilogReadOptions& opt) {
  try {
    return parse_verilog(read_text_file(path), opt);
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace gatelock
