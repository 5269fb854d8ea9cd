// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "gatelock/netlist.hpp"

namespace gatelock {

// Name prefix marking key inputs; overridable via $GATELOCK_KEY_PREFIX.
std::string default_key_prefix();

struct BenchReadOptions {
  std::string key_prefix;  // empty = default_key_prefix()
};

struct BenchWriteOptions {
  // Rewrite MUX gates into AND/OR/NOT for strict ISCAS consumers. CONST0/
  // CONST1 are kept either way (no combinational equivalent exists).
  bool expand_mux = false;
};

// Combinational ISCAS-89 bench dialect:
//   INPUT(a) / OUTPUT(y) declarations, `y = KIND(a, b, ...)` assignments,
//   `#` comments. DFF and other sequential elements are rejected.
//   Extensions: MUX(d0, d1, sel), CONST0(), CONST1().
// INPUT names starting with the key prefix become key inputs.
Netlist parse_bench(std::string_view text, const BenchReadOptions& opt = {});
std::string emit_bench(const Netlist& n, const BenchWriteOptions& opt = {});

Netlist read_bench_file(const std::string& path,
                        const BenchReadOptions& opt = {});
void write_bench_file(const std::string& path, const Netlist& n,
                      const BenchWriteOptions& opt = {});

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace gatelock
