#include <algorithm>

#include <fmt/format.h>

#include "fabricmul/designs.hpp"
#include "fabricmul/error.hpp"
#include "json.hpp"

namespace fabricmul {

const char* to_string(InitSource source) noexcept {
  return source == InitSource::Published ? "published" : "derived";
}

namespace {

constexpr const char* kVcc = "VCC";
constexpr const char* kGnd = "GND";

std::map<std::string, std::string> lut_pins(const std::array<Pin, 6>& pins) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < pins.size(); ++i)
    out[fmt::format("I{}", i)] = pins[i].is_tied_high() ? kVcc : pins[i].signal_name();
  return out;
}

void add_operand_ports(Netlist& netlist, int width) {
  for (int i = 0; i < width; ++i) netlist.add_input(fmt::format("A{}", i));
  for (int i = 0; i < width; ++i) netlist.add_input(fmt::format("B{}", i));
  for (int i = 0; i < 2 * width; ++i) netlist.add_output(fmt::format("P{}", i));
}

}  // namespace

Netlist build_proposed_mult4(InitSource source) {
  Netlist netlist;
  add_operand_ports(netlist, 4);
  netlist.add_cell("gnd", CellKind::Const0, {{"O", kGnd}});
  netlist.add_cell("vcc", CellKind::Const1, {{"O", kVcc}});

  for (const auto& row : proposed_design_table().rows) {
    const Init64 init = source == InitSource::Published ? row.published : derived_init(row);
    auto pins = lut_pins(row.pins);
    if (row.dual()) {
      pins["O6"] = row.output(OutputTap::O6)->signal;
      pins["O5"] = row.output(OutputTap::O5)->signal;
      netlist.add_cell(fmt::format("lut{}", row.lut), CellKind::Lut6_2, std::move(pins), init);
    } else {
      pins["O"] = row.outputs.front().signal;
      netlist.add_cell(fmt::format("lut{}", row.lut), CellKind::Lut6, std::move(pins), init);
    }
  }

  // Chain A adds the column-3..6 propagate/generate pairs on top of C0.
  std::map<std::string, std::string> chain_a{{"CI", "C0"}, {"CO3", "carry_a_co3"}};
  for (int i = 0; i < 4; ++i) {
    chain_a[fmt::format("S{}", i)] = fmt::format("Prop{}", i);
    chain_a[fmt::format("DI{}", i)] = fmt::format("Gen{}", i);
    chain_a[fmt::format("O{}", i)] = fmt::format("P{}", 3 + i);
  }
  netlist.add_cell("carry_a", CellKind::Carry4, std::move(chain_a));
  netlist.set_dedicated("carry_a_co3");

  // Chain B only exposes the incoming carry on O0 (S0 = 0), giving P7.
  std::map<std::string, std::string> chain_b{{"CI", "carry_a_co3"}, {"O0", "P7"}};
  for (int i = 0; i < 4; ++i) {
    chain_b[fmt::format("S{}", i)] = kGnd;
    chain_b[fmt::format("DI{}", i)] = kGnd;
  }
  netlist.add_cell("carry_b", CellKind::Carry4, std::move(chain_b));
  return netlist;
}

Netlist build_array_mult(int width) {
  if (width < 2 || width > 8)
    throw RangeError(fmt::format("array multiplier width {} outside [2, 8]", width));

  struct Pending {
    std::string id;
    std::array<std::string, 3> in;  // unused entries are tied high
    std::string out;
    std::string function;
  };
  std::vector<Pending> pending;
  int serial = 0;
  auto fresh = [&](const std::string& stem) { return fmt::format("{}_{}", stem, serial++); };

  auto pp = [&](int i, int j) {
    // Partial product a_j * b_i, weight i + j.
    const std::string net = fmt::format("pp{}_{}", i, j);
    pending.push_back({net, {fmt::format("A{}", j), fmt::format("B{}", i), ""}, net, "x & y"});
    return net;
  };

  std::map<int, std::string> acc;  // weight -> current sum net
  for (int j = 0; j < width; ++j) acc[j] = pp(0, j);

  for (int i = 1; i < width; ++i) {
    std::string carry;
    for (int j = 0; j < width; ++j) {
      const int weight = i + j;
      std::vector<std::string> operands{pp(i, j)};
      if (auto it = acc.find(weight); it != acc.end()) operands.push_back(it->second);
      if (!carry.empty()) operands.push_back(carry);
      if (operands.size() == 1) {
        acc[weight] = operands.front();
        continue;
      }
      const bool full = operands.size() == 3;
      const std::string stem = fmt::format("{}{}_{}", full ? "fa" : "ha", i, weight);
      const std::string sum = fresh(stem + "_s");
      const std::string cout = fresh(stem + "_c");
      std::array<std::string, 3> in{operands[0], operands[1], full ? operands[2] : ""};
      pending.push_back({stem + "_sum", in, sum, full ? "x ^ y ^ z" : "x ^ y"});
      pending.push_back(
          {stem + "_carry", in, cout, full ? "x & y | x & z | y & z" : "x & y"});
      acc[weight] = sum;
      carry = cout;
    }
    if (!carry.empty()) acc[i + width] = carry;
  }

  // Final column sums become the product outputs.
  std::map<std::string, std::string> rename;
  for (const auto& [weight, net] : acc) rename[net] = fmt::format("P{}", weight);
  auto renamed = [&](const std::string& net) {
    auto it = rename.find(net);
    return it == rename.end() ? net : it->second;
  };

  Netlist netlist;
  add_operand_ports(netlist, width);
  netlist.add_cell("vcc", CellKind::Const1, {{"O", kVcc}});
  for (const auto& cell : pending) {
    PinBinding local;
    std::array<Pin, 6> pins{Pin::tied_high(), Pin::tied_high(), Pin::tied_high(),
                            Pin::tied_high(), Pin::tied_high(), Pin::tied_high()};
    const char* names[3] = {"x", "y", "z"};
    for (std::size_t k = 0; k < 3; ++k) {
      if (cell.in[k].empty()) continue;
      local.pins[k] = Pin::signal(names[k]);
      pins[k] = Pin::signal(renamed(cell.in[k]));
    }
    const Init64 init = derive_init(BoolExpr::parse(cell.function), local);
    auto pin_map = lut_pins(pins);
    pin_map["O"] = renamed(cell.out);
    netlist.add_cell(cell.id, CellKind::Lut6, std::move(pin_map), init);
  }
  return netlist;
}

// ---------------------------------------------------------------------------
// Oracle and verification

unsigned oracle_mult(unsigned a, unsigned b, int width) {
  if (width < 1 || width > 16) throw RangeError(fmt::format("operand width {} unsupported", width));
  const unsigned limit = 1u << width;
  if (a >= limit || b >= limit)
    throw RangeError(fmt::format("operands ({}, {}) do not fit in {} bits", a, b, width));
  return a * b;
}

VerificationReport verify_exhaustive(const Netlist& netlist, int width) {
  if (width < 1 || 4 * width > 64)
    throw PortConventionError(fmt::format("width {} unsupported", width));

  // Position of each operand / product bit in the packed simulator vectors.
  auto positions = [&](const std::vector<std::string>& ports, const std::string& prefix, int count,
                       const char* what) {
    std::vector<int> pos(static_cast<std::size_t>(count), -1);
    for (std::size_t p = 0; p < ports.size(); ++p) {
      const std::string& name = ports[p];
      if (!name.starts_with(prefix)) continue;
      const std::string digits = name.substr(prefix.size());
      if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) continue;
      const int idx = std::stoi(digits);
      if (idx < count && std::to_string(idx) == digits) pos[static_cast<std::size_t>(idx)] = static_cast<int>(p);
    }
    for (int i = 0; i < count; ++i)
      if (pos[static_cast<std::size_t>(i)] < 0)
        throw PortConventionError(fmt::format("{} port {}{} is missing", what, prefix, i));
    return pos;
  };

  if (netlist.inputs().size() != static_cast<std::size_t>(2 * width))
    throw PortConventionError(fmt::format("expected {} inputs A0..A{} B0..B{}, found {}", 2 * width,
                                          width - 1, width - 1, netlist.inputs().size()));
  if (netlist.outputs().size() != static_cast<std::size_t>(2 * width))
    throw PortConventionError(fmt::format("expected {} outputs P0..P{}, found {}", 2 * width,
                                          2 * width - 1, netlist.outputs().size()));
  const auto a_pos = positions(netlist.inputs(), "A", width, "input");
  const auto b_pos = positions(netlist.inputs(), "B", width, "input");
  const auto p_pos = positions(netlist.outputs(), "P", 2 * width, "output");

  const Simulator sim(netlist);
  VerificationReport report;
  report.width = width;
  const unsigned limit = 1u << width;
  for (unsigned b = 0; b < limit; ++b) {
    for (unsigned a = 0; a < limit; ++a) {
      std::uint64_t packed = 0;
      for (int i = 0; i < width; ++i) {
        if ((a >> i) & 1u) packed |= std::uint64_t{1} << a_pos[static_cast<std::size_t>(i)];
        if ((b >> i) & 1u) packed |= std::uint64_t{1} << b_pos[static_cast<std::size_t>(i)];
      }
      const std::uint64_t raw = sim.evaluate_packed(packed);
      unsigned product = 0;
      for (int k = 0; k < 2 * width; ++k)
        if ((raw >> p_pos[static_cast<std::size_t>(k)]) & 1u) product |= 1u << k;
      const unsigned expected = oracle_mult(a, b, width);
      ++report.total;
      if (product == expected) {
        ++report.passed;
      } else {
        report.failures.push_back({a, b, expected, product});
      }
    }
  }
  return report;
}

std::string VerificationReport::to_text() const {
  std::string out = fmt::format("{}/{} {}\n", passed, total, all_pass() ? "PASS" : "FAIL");
  for (const auto& f : failures)
    out += fmt::format("  mismatch a={} b={} expected={} actual={}\n", f.a, f.b, f.expected, f.actual);
  return out;
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["width"] = width;
  doc["total"] = total;
  doc["passed"] = passed;
  doc["pass"] = all_pass();
  auto failures_json = nlohmann::ordered_json::array();
  for (const auto& f : failures)
    failures_json.push_back({{"a", f.a}, {"b", f.b}, {"expected", f.expected}, {"actual", f.actual}});
  doc["failures"] = std::move(failures_json);
  return doc.dump(2) + "\n";
}

}  // namespace fabricmul
