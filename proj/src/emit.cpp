#include "fabricmul/emit.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "fabricmul/error.hpp"

namespace fabricmul {

namespace {

constexpr std::string_view kKeywords[] = {
    "always", "and", "assign", "automatic", "begin", "buf", "bufif0", "bufif1", "case", "casex",
    "casez", "cell", "cmos", "config", "deassign", "default", "defparam", "design", "disable",
    "edge", "else", "end", "endcase", "endconfig", "endfunction", "endgenerate", "endmodule",
    "endprimitive", "endspecify", "endtable", "endtask", "event", "for", "force", "forever", "fork",
    "function", "generate", "genvar", "highz0", "highz1", "if", "ifnone", "incdir", "include",
    "initial", "inout", "input", "instance", "integer", "join", "large", "liblist", "library",
    "localparam", "macromodule", "medium", "module", "nand", "negedge", "nmos", "nor",
    "noshowcancelled", "not", "notif0", "notif1", "or", "output", "parameter", "pmos", "posedge",
    "primitive", "pull0", "pull1", "pulldown", "pullup", "pulsestyle_ondetect",
    "pulsestyle_onevent", "rcmos", "real", "realtime", "reg", "release", "repeat", "rnmos", "rpmos",
    "rtran", "rtranif0", "rtranif1", "scalared", "showcancelled", "signed", "small", "specify",
    "specparam", "strong0", "strong1", "supply0", "supply1", "table", "task", "time", "tran",
    "tranif0", "tranif1", "tri", "tri0", "tri1", "triand", "trior", "trireg", "unsigned", "use",
    "vectored", "wait", "wand", "weak0", "weak1", "while", "wire", "wor", "xnor", "xor", "uwire",
};

bool is_keyword(std::string_view name) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), name) != std::end(kKeywords);
}

std::string sanitize(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    const auto u = static_cast<unsigned char>(c);
    out += (std::isalnum(u) || c == '_' || c == '$') ? c : '_';
  }
  if (out.empty() || !(std::isalpha(static_cast<unsigned char>(out.front())) || out.front() == '_'))
    out.insert(0, "n_");
  if (is_keyword(out)) out += '_';
  return out;
}

/// Orders "lut2" before "lut10" by comparing digit runs numerically.
bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      auto na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

/// Module-scope identifiers for nets, instances and filler wires. Nets and
/// instances share one namespace; clashes get `_1`, `_2`, ... suffixes in
/// first-claim order.
class NameTable {
 public:
  std::string claim(std::string_view raw) {
    const std::string base = sanitize(raw);
    std::string name = base;
    for (int k = 1; used_.contains(name); ++k) name = fmt::format("{}_{}", base, k);
    used_.insert(name);
    return name;
  }

 private:
  std::set<std::string> used_;
};

struct Names {
  std::unordered_map<std::string, std::string> net;
  std::unordered_map<std::string, std::string> cell;
  std::vector<std::size_t> cell_order;
  NameTable table;
};

Names assign_names(const Netlist& netlist, const std::vector<Net>& nets) {
  Names names;
  for (const auto& net : nets) names.net.emplace(net.id, names.table.claim(net.id));
  for (std::size_t i = 0; i < netlist.cells().size(); ++i) names.cell_order.push_back(i);
  std::stable_sort(names.cell_order.begin(), names.cell_order.end(), [&](std::size_t x, std::size_t y) {
    return natural_less(netlist.cells()[x].id, netlist.cells()[y].id);
  });
  for (std::size_t i : names.cell_order) {
    const auto& id = netlist.cells()[i].id;
    names.cell.emplace(id, names.table.claim(id));
  }
  return names;
}

void check_module_name(std::string_view module_name) {
  if (!is_hdl_identifier(module_name))
    throw IdentifierError(fmt::format("'{}' is not a legal Verilog identifier", module_name));
}

void check_ports(const Netlist& netlist, int width) {
  if (width < 1 || width > 16) throw PortConventionError(fmt::format("width {} unsupported", width));
  std::set<std::string> want_in, want_out;
  for (int i = 0; i < width; ++i) {
    want_in.insert(fmt::format("A{}", i));
    want_in.insert(fmt::format("B{}", i));
  }
  for (int i = 0; i < 2 * width; ++i) want_out.insert(fmt::format("P{}", i));
  const std::set<std::string> have_in(netlist.inputs().begin(), netlist.inputs().end());
  const std::set<std::string> have_out(netlist.outputs().begin(), netlist.outputs().end());
  if (have_in != want_in || netlist.inputs().size() != want_in.size())
    throw PortConventionError(
        fmt::format("inputs must be exactly A0..A{0} and B0..B{0}", width - 1));
  if (have_out != want_out || netlist.outputs().size() != want_out.size())
    throw PortConventionError(fmt::format("outputs must be exactly P0..P{}", 2 * width - 1));
}

}  // namespace

bool is_hdl_identifier(std::string_view name) {
  if (name.empty()) return false;
  const auto first = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(first) || name.front() == '_')) return false;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_' || c == '$')) return false;
  }
  return !is_keyword(name);
}

std::string emit_verilog(const Netlist& netlist, std::string_view module_name) {
  check_module_name(module_name);
  if (auto report = validate(netlist); !report.ok()) throw ValidationError(report.to_string());

  const auto nets = netlist.nets();
  Names names = assign_names(netlist, nets);

  std::string out = "// Generated by fabricmul. Do not edit.\n";
  out += fmt::format("module {} (\n", module_name);
  std::vector<std::string> ports;
  for (const auto& in : netlist.inputs()) ports.push_back(fmt::format("  input  wire {}", names.net.at(in)));
  for (const auto& o : netlist.outputs()) ports.push_back(fmt::format("  output wire {}", names.net.at(o)));
  out += fmt::format("{}\n);\n", fmt::join(ports, ",\n"));

  const std::set<std::string> port_nets = [&] {
    std::set<std::string> s(netlist.inputs().begin(), netlist.inputs().end());
    s.insert(netlist.outputs().begin(), netlist.outputs().end());
    return s;
  }();

  // Filler wires for unconnected CARRY4 bus bits.
  std::unordered_map<std::string, std::string> filler;  // "cell.pin" -> wire
  for (std::size_t i : names.cell_order) {
    const Cell& cell = netlist.cells()[i];
    if (cell.kind != CellKind::Carry4) continue;
    for (auto pin : output_pins(cell.kind))
      if (!cell.net_on(pin))
        filler.emplace(cell.id + "." + std::string(pin),
                       names.table.claim(fmt::format("{}_{}_nc", cell.id, pin)));
  }

  std::vector<std::string> wires;
  for (const auto& net : nets)
    if (!port_nets.contains(net.id)) wires.push_back(names.net.at(net.id));
  for (std::size_t i : names.cell_order) {
    const Cell& cell = netlist.cells()[i];
    if (cell.kind != CellKind::Carry4) continue;
    for (auto pin : output_pins(cell.kind))
      if (auto it = filler.find(cell.id + "." + std::string(pin)); it != filler.end())
        wires.push_back(it->second);
  }
  if (!wires.empty()) {
    out += "\n";
    for (const auto& w : wires) out += fmt::format("  wire {};\n", w);
  }

  auto net_of = [&](const Cell& cell, std::string_view pin) -> std::string {
    if (const auto* net = cell.net_on(pin)) return names.net.at(*net);
    if (auto it = filler.find(cell.id + "." + std::string(pin)); it != filler.end()) return it->second;
    return {};
  };

  bool first_const = true;
  for (std::size_t i : names.cell_order) {
    const Cell& cell = netlist.cells()[i];
    if (cell.kind != CellKind::Const0 && cell.kind != CellKind::Const1) continue;
    const std::string net = net_of(cell, "O");
    if (net.empty()) continue;
    if (first_const) out += "\n";
    first_const = false;
    out += fmt::format("  assign {} = 1'b{};\n", net, cell.kind == CellKind::Const1 ? 1 : 0);
  }

  for (std::size_t i : names.cell_order) {
    const Cell& cell = netlist.cells()[i];
    const std::string& inst = names.cell.at(cell.id);
    std::vector<std::string> conns;
    switch (cell.kind) {
      case CellKind::Const0:
      case CellKind::Const1:
        continue;
      case CellKind::Lut6:
      case CellKind::Lut6_2: {
        for (auto pin : output_pins(cell.kind))
          conns.push_back(fmt::format(".{}({})", pin, net_of(cell, pin)));
        for (auto pin : input_pins(cell.kind))
          conns.push_back(fmt::format(".{}({})", pin, net_of(cell, pin)));
        out += fmt::format("\n  {} #(\n    .INIT(64'h{:016X})\n  ) {} (\n", to_string(cell.kind),
                           cell.init.value(), inst);
        break;
      }
      case CellKind::Carry4: {
        auto bus = [&](const char* stem) {
          std::vector<std::string> bits;
          for (int k = 3; k >= 0; --k) bits.push_back(net_of(cell, fmt::format("{}{}", stem, k)));
          return fmt::format("{{{}}}", fmt::join(bits, ", "));
        };
        const std::string* ci = cell.net_on("CI");
        const bool chained = netlist.is_dedicated(*ci);
        conns.push_back(fmt::format(".CO({})", bus("CO")));
        conns.push_back(fmt::format(".O({})", bus("O")));
        conns.push_back(fmt::format(".CI({})", chained ? names.net.at(*ci) : "1'b0"));
        conns.push_back(fmt::format(".CYINIT({})", chained ? "1'b0" : names.net.at(*ci)));
        conns.push_back(fmt::format(".DI({})", bus("DI")));
        conns.push_back(fmt::format(".S({})", bus("S")));
        out += fmt::format("\n  CARRY4 {} (\n", inst);
        break;
      }
    }
    out += fmt::format("    {}\n  );\n", fmt::join(conns, ",\n    "));
  }
  out += "\nendmodule\n";
  return out;
}

std::string emit_testbench(const Netlist& netlist, std::string_view module_name, int width) {
  check_module_name(module_name);
  check_ports(netlist, width);
  const auto nets = netlist.nets();
  const Names names = assign_names(netlist, nets);
  const unsigned vectors = 1u << (2 * width);

  std::vector<std::string> conns;
  for (int i = 0; i < width; ++i) conns.push_back(fmt::format(".{}(a[{}])", names.net.at(fmt::format("A{}", i)), i));
  for (int i = 0; i < width; ++i) conns.push_back(fmt::format(".{}(b[{}])", names.net.at(fmt::format("B{}", i)), i));
  for (int i = 0; i < 2 * width; ++i) conns.push_back(fmt::format(".{}(p[{}])", names.net.at(fmt::format("P{}", i)), i));

  std::string out = "// Generated by fabricmul. Do not edit.\n";
  out += "`timescale 1ns / 1ps\n";
  out += fmt::format("module {}_tb;\n", module_name);
  out += fmt::format("  reg  [{}:0] a;\n", width - 1);
  out += fmt::format("  reg  [{}:0] b;\n", width - 1);
  out += fmt::format("  reg  [{}:0] expected;\n", 2 * width - 1);
  out += fmt::format("  wire [{}:0] p;\n", 2 * width - 1);
  out += "  integer i;\n  integer errors;\n\n";
  out += fmt::format("  {} dut (\n    {}\n  );\n\n", module_name, fmt::join(conns, ",\n    "));
  out += "  initial begin\n";
  out += "    errors = 0;\n";
  out += fmt::format("    for (i = 0; i < {}; i = i + 1) begin\n", vectors);
  out += "      {b, a} = i;\n";
  out += "      expected = a * b;\n";
  out += "      #1;\n";
  out += "      if (p !== expected) begin\n";
  out += "        errors = errors + 1;\n";
  out += "        $display(\"MISMATCH a=%0d b=%0d p=%0d expected=%0d\", a, b, p, expected);\n";
  out += "      end\n";
  out += "    end\n";
  out += "    if (errors == 0)\n";
  out += fmt::format("      $display(\"PASS: {0}/{0}\");\n", vectors);
  out += "    else\n";
  out += "      $display(\"FAIL: %0d errors\", errors);\n";
  out += "    $finish;\n";
  out += "  end\n";
  out += "endmodule\n";
  return out;
}

}  // namespace fabricmul
