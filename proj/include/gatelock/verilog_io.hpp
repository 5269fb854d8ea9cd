// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "gatelock/netlist.hpp"

namespace gatelock {

struct VerilogReadOptions {
  std::string key_prefix;  // empty = default_key_prefix()
};

// Read-only structural subset: one module; input/output/wire declarations
// (scalar or vector [msb:lsb], expanded MSB-first to name[i] nets); primitive
// instances and/nand/or/nor/xor/xnor/not/buf (output first); continuous
// assigns of a net, 1'b0 or 1'b1. No always blocks, expressions or
// hierarchy. Inputs whose name starts with the key prefix are key inputs.
Netlist parse_verilog(std::string_view text,
                      const VerilogReadOptions& opt = {});
Netlist read_verilog_file(const std::string& path,
                          const VerilogReadOptions& opt = {});

}  // namespace gatelock
