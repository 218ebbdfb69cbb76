#pragma once

// Structural Verilog-2001 emission of netlists as 7-series primitive
// instances, plus an exhaustive self-checking testbench.

#include <string>
#include <string_view>

#include "fabricmul/netlist.hpp"

namespace fabricmul {

/// True for `[A-Za-z_][A-Za-z0-9_$]*` that is not a Verilog keyword.
bool is_hdl_identifier(std::string_view name);

/// One module, one instance per cell in natural cell-id order. Throws
/// ValidationError for an invalid netlist, IdentifierError for a bad name.
std::string emit_verilog(const Netlist& netlist, std::string_view module_name);

/// Testbench `<module_name>_tb` sweeping all 2^(2*width) operand pairs against
/// a behavioral `a * b`; prints "PASS: n/n" or "FAIL: k errors".
/// Throws PortConventionError when ports are not A*/B*/P* per `width`.
std::string emit_testbench(const Netlist& netlist, std::string_view module_name, int width);

}  // namespace fabricmul
