#include "fabricmul/netlist.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <unordered_map>

#include <fmt/format.h>

#include "fabricmul/error.hpp"
#include "fabricmul/primitives.hpp"

namespace fabricmul {

namespace {

constexpr std::array<std::string_view, 6> kLutInputs{"I0", "I1", "I2", "I3", "I4", "I5"};
constexpr std::array<std::string_view, 1> kLut6Outputs{"O"};
constexpr std::array<std::string_view, 2> kLut6_2Outputs{"O6", "O5"};
constexpr std::array<std::string_view, 9> kCarry4Inputs{"CI",  "S0",  "S1",  "S2", "S3",
                                                        "DI0", "DI1", "DI2", "DI3"};
constexpr std::array<std::string_view, 8> kCarry4Outputs{"O0",  "O1",  "O2",  "O3",
                                                         "CO0", "CO1", "CO2", "CO3"};
constexpr std::array<std::string_view, 1> kConstOutputs{"O"};

bool has_pin(std::span<const std::string_view> pins, std::string_view pin) {
  return std::find(pins.begin(), pins.end(), pin) != pins.end();
}

}  // namespace

std::string_view to_string(CellKind kind) noexcept {
  switch (kind) {
    case CellKind::Lut6: return "LUT6";
    case CellKind::Lut6_2: return "LUT6_2";
    case CellKind::Carry4: return "CARRY4";
    case CellKind::Const0: return "CONST0";
    case CellKind::Const1: return "CONST1";
  }
  return "?";
}

std::optional<CellKind> parse_cell_kind(std::string_view text) noexcept {
  for (CellKind k : {CellKind::Lut6, CellKind::Lut6_2, CellKind::Carry4, CellKind::Const0,
                     CellKind::Const1})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

std::span<const std::string_view> input_pins(CellKind kind) noexcept {
  switch (kind) {
    case CellKind::Lut6:
    case CellKind::Lut6_2: return kLutInputs;
    case CellKind::Carry4: return kCarry4Inputs;
    default: return {};
  }
}

std::span<const std::string_view> output_pins(CellKind kind) noexcept {
  switch (kind) {
    case CellKind::Lut6: return kLut6Outputs;
    case CellKind::Lut6_2: return kLut6_2Outputs;
    case CellKind::Carry4: return kCarry4Outputs;
    default: return kConstOutputs;
  }
}

bool is_lut(CellKind kind) noexcept { return kind == CellKind::Lut6 || kind == CellKind::Lut6_2; }

const std::string* Cell::net_on(std::string_view pin) const {
  auto it = pins.find(std::string(pin));
  return it == pins.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Netlist

void Netlist::add_input(std::string name) { inputs_.push_back(std::move(name)); }
void Netlist::add_output(std::string name) { outputs_.push_back(std::move(name)); }

Cell& Netlist::add_cell(std::string id, CellKind kind, std::map<std::string, std::string> pins,
                        Init64 init) {
  if (id.empty()) throw Error("cell id must not be empty");
  if (find_cell(id)) throw Error(fmt::format("duplicate cell id '{}'", id));
  for (const auto& [pin, net] : pins) {
    if (!has_pin(input_pins(kind), pin) && !has_pin(output_pins(kind), pin))
      throw Error(fmt::format("cell '{}' of kind {} has no pin '{}'", id, to_string(kind), pin));
    if (net.empty()) throw Error(fmt::format("cell '{}' pin {} names an empty net", id, pin));
  }
  cells_.push_back(Cell{std::move(id), kind, is_lut(kind) ? init : Init64(), std::move(pins)});
  return cells_.back();
}

void Netlist::set_dedicated(std::string net, bool dedicated) {
  if (dedicated) {
    dedicated_.insert(std::move(net));
  } else {
    dedicated_.erase(net);
  }
}

void Netlist::set_init(std::string_view cell_id, Init64 init) {
  for (auto& cell : cells_) {
    if (cell.id == cell_id) {
      if (!is_lut(cell.kind)) throw Error(fmt::format("cell '{}' is not a LUT", cell_id));
      cell.init = init;
      return;
    }
  }
  throw Error(fmt::format("no cell '{}'", cell_id));
}

const Cell* Netlist::find_cell(std::string_view id) const {
  for (const auto& cell : cells_)
    if (cell.id == id) return &cell;
  return nullptr;
}

std::vector<Net> Netlist::nets() const {
  std::vector<Net> out;
  std::unordered_map<std::string, std::size_t> index;
  auto get = [&](const std::string& id) -> Net& {
    auto [it, inserted] = index.try_emplace(id, out.size());
    if (inserted) {
      out.push_back(Net{});
      out.back().id = id;
      out.back().dedicated = dedicated_.contains(id);
    }
    return out[it->second];
  };

  for (const auto& name : inputs_) get(name).drivers.push_back(Driver{true, {}});
  for (const auto& cell : cells_) {
    for (auto pin : output_pins(cell.kind))
      if (const auto* net = cell.net_on(pin))
        get(*net).drivers.push_back(Driver{false, PinRef{cell.id, std::string(pin)}});
    for (auto pin : input_pins(cell.kind))
      if (const auto* net = cell.net_on(pin))
        get(*net).loads.push_back(PinRef{cell.id, std::string(pin)});
  }
  for (const auto& name : outputs_) get(name).primary_output = true;
  return out;
}

// ---------------------------------------------------------------------------
// Validation

const char* to_string(Violation::Kind kind) noexcept {
  switch (kind) {
    case Violation::Kind::MultipleDrivers: return "multiple-drivers";
    case Violation::Kind::UndrivenNet: return "undriven-net";
    case Violation::Kind::Cycle: return "cycle";
    case Violation::Kind::DanglingPin: return "dangling-pin";
  }
  return "?";
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += fmt::format("{}: {}", fabricmul::to_string(v.kind), v.message);
  }
  return out;
}

namespace {

/// For each cell, indices of the cells driving its inputs (deduplicated).
std::vector<std::vector<std::size_t>> cell_fanin(const Netlist& netlist) {
  std::unordered_map<std::string, std::size_t> driver_of;
  const auto& cells = netlist.cells();
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (auto pin : output_pins(cells[i].kind))
      if (const auto* net = cells[i].net_on(pin)) driver_of.try_emplace(*net, i);

  std::vector<std::vector<std::size_t>> fanin(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (auto pin : input_pins(cells[i].kind)) {
      const auto* net = cells[i].net_on(pin);
      if (!net) continue;
      auto it = driver_of.find(*net);
      if (it != driver_of.end()) fanin[i].push_back(it->second);
    }
    std::sort(fanin[i].begin(), fanin[i].end());
    fanin[i].erase(std::unique(fanin[i].begin(), fanin[i].end()), fanin[i].end());
  }
  return fanin;
}

/// Strongly connected components that form cycles (size > 1 or self-loop).
std::vector<std::vector<std::size_t>> cyclic_components(
    const std::vector<std::vector<std::size_t>>& fanin) {
  const std::size_t n = fanin.size();
  std::vector<int> idx(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  int counter = 0;

  std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : fanin[v]) {
      if (idx[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      std::vector<std::size_t> component;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      const bool self_loop =
          std::find(fanin[v].begin(), fanin[v].end(), v) != fanin[v].end();
      if (component.size() > 1 || self_loop) {
        std::sort(component.begin(), component.end());
        out.push_back(std::move(component));
      }
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (idx[v] < 0) strongconnect(v);
  return out;
}

}  // namespace

ValidationReport validate(const Netlist& netlist) {
  ValidationReport report;
  for (const auto& net : netlist.nets()) {
    if (net.drivers.size() > 1) {
      std::vector<std::string> who;
      for (const auto& d : net.drivers)
        who.push_back(d.primary_input ? "input" : d.pin.cell + "." + d.pin.pin);
      report.violations.push_back({Violation::Kind::MultipleDrivers,
                                   {net.id},
                                   fmt::format("net '{}' has {} drivers ({})", net.id,
                                               net.drivers.size(), fmt::join(who, ", "))});
    } else if (net.drivers.empty() && (net.primary_output || !net.loads.empty())) {
      report.violations.push_back({Violation::Kind::UndrivenNet,
                                   {net.id},
                                   fmt::format("net '{}' has no driver", net.id)});
    }
  }

  for (const auto& cell : netlist.cells()) {
    for (auto pin : input_pins(cell.kind)) {
      if (!cell.net_on(pin)) {
        report.violations.push_back(
            {Violation::Kind::DanglingPin,
             {cell.id},
             fmt::format("input pin {}.{} is not connected", cell.id, pin)});
      }
    }
  }

  for (const auto& component : cyclic_components(cell_fanin(netlist))) {
    std::vector<std::string> ids;
    for (std::size_t i : component) ids.push_back(netlist.cells()[i].id);
    report.violations.push_back({Violation::Kind::Cycle, ids,
                                 fmt::format("combinational cycle through {}",
                                             fmt::join(ids, ", "))});
  }
  return report;
}

std::vector<std::size_t> topological_order(const Netlist& netlist, std::mt19937_64* rng) {
  if (auto report = validate(netlist); !report.ok()) throw ValidationError(report.to_string());

  const auto fanin = cell_fanin(netlist);
  const std::size_t n = fanin.size();
  std::vector<std::vector<std::size_t>> fanout(n);
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    pending[v] = fanin[v].size();
    for (std::size_t u : fanin[v]) fanout[u].push_back(v);
  }

  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (pending[v] == 0) ready.push_back(v);

  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t pick = 0;
    if (rng) pick = std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(*rng);
    const std::size_t v = ready[pick];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
    order.push_back(v);
    for (std::size_t w : fanout[v])
      if (--pending[w] == 0) ready.push_back(w);
  }
  return order;
}

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(const Netlist& netlist) {
  const auto order = topological_order(netlist);
  compile(netlist, order);
}

Simulator::Simulator(const Netlist& netlist, std::span<const std::size_t> cell_order) {
  if (auto report = validate(netlist); !report.ok()) throw ValidationError(report.to_string());
  if (cell_order.size() != netlist.cells().size())
    throw Error("cell order does not cover every cell");
  compile(netlist, cell_order);
}

void Simulator::compile(const Netlist& netlist, std::span<const std::size_t> order) {
  if (netlist.inputs().size() > 64 || netlist.outputs().size() > 64)
    throw Error("packed evaluation supports at most 64 inputs and outputs");

  std::unordered_map<std::string, int> net_index;
  for (const auto& net : netlist.nets())
    net_index.emplace(net.id, static_cast<int>(net_index.size()));
  net_count_ = net_index.size();

  input_names_ = netlist.inputs();
  output_names_ = netlist.outputs();
  for (const auto& name : input_names_) input_nets_.push_back(net_index.at(name));
  for (const auto& name : output_names_) output_nets_.push_back(net_index.at(name));

  std::vector<bool> produced(net_count_, false);
  for (int idx : input_nets_) produced[static_cast<std::size_t>(idx)] = true;

  for (std::size_t ci : order) {
    const Cell& cell = netlist.cells().at(ci);
    Op op{cell.kind, cell.init, {}, {}};
    for (auto pin : input_pins(cell.kind)) {
      const int idx = net_index.at(*cell.net_on(pin));
      if (!produced[static_cast<std::size_t>(idx)])
        throw Error(fmt::format("cell order evaluates '{}' before its input {} is driven",
                                cell.id, pin));
      op.in.push_back(idx);
    }
    for (auto pin : output_pins(cell.kind)) {
      const auto* net = cell.net_on(pin);
      const int idx = net ? net_index.at(*net) : -1;
      if (idx >= 0) produced[static_cast<std::size_t>(idx)] = true;
      op.out.push_back(idx);
    }
    ops_.push_back(std::move(op));
  }
}

std::uint64_t Simulator::evaluate_packed(std::uint64_t inputs) const {
  std::vector<char> value(net_count_, 0);
  for (std::size_t i = 0; i < input_nets_.size(); ++i)
    value[static_cast<std::size_t>(input_nets_[i])] = static_cast<char>((inputs >> i) & 1u);

  auto read = [&](int idx) { return value[static_cast<std::size_t>(idx)] != 0; };
  auto write = [&](int idx, bool bit) {
    if (idx >= 0) value[static_cast<std::size_t>(idx)] = bit ? 1 : 0;
  };

  for (const Op& op : ops_) {
    switch (op.kind) {
      case CellKind::Const0: write(op.out[0], false); break;
      case CellKind::Const1: write(op.out[0], true); break;
      case CellKind::Lut6:
      case CellKind::Lut6_2: {
        LutInputs in;
        for (std::size_t i = 0; i < 6; ++i) in[i] = read(op.in[i]);
        if (op.kind == CellKind::Lut6) {
          write(op.out[0], lut6_eval(op.init, in));
        } else {
          const auto o = lut6_2_eval(op.init, in);
          write(op.out[0], o.o6);
          write(op.out[1], o.o5);
        }
        break;
      }
      case CellKind::Carry4: {
        Carry4Bits s, di;
        for (std::size_t i = 0; i < 4; ++i) {
          s[i] = read(op.in[1 + i]);
          di[i] = read(op.in[5 + i]);
        }
        const auto o = carry4_eval(read(op.in[0]), s, di);
        for (std::size_t i = 0; i < 4; ++i) {
          write(op.out[i], o.o[i]);
          write(op.out[4 + i], o.co[i]);
        }
        break;
      }
    }
  }

  std::uint64_t out = 0;
  for (std::size_t j = 0; j < output_nets_.size(); ++j)
    if (read(output_nets_[j])) out |= std::uint64_t{1} << j;
  return out;
}

std::map<std::string, bool> Simulator::evaluate(const std::map<std::string, bool>& inputs) const {
  std::uint64_t packed = 0;
  for (std::size_t i = 0; i < input_names_.size(); ++i) {
    auto it = inputs.find(input_names_[i]);
    if (it == inputs.end())
      throw Error(fmt::format("missing value for primary input '{}'", input_names_[i]));
    if (it->second) packed |= std::uint64_t{1} << i;
  }
  const std::uint64_t result = evaluate_packed(packed);
  std::map<std::string, bool> out;
  for (std::size_t j = 0; j < output_names_.size(); ++j)
    out[output_names_[j]] = ((result >> j) & 1u) != 0;
  return out;
}

std::map<std::string, bool> evaluate(const Netlist& netlist,
                                     const std::map<std::string, bool>& inputs) {
  return Simulator(netlist).evaluate(inputs);
}

// ---------------------------------------------------------------------------
// Resources

std::map<std::string, std::size_t> ResourceReport::breakdown() const {
  return {{"LUT6", lut6}, {"LUT6_2", lut6_2}, {"CARRY4", carry4}};
}

ResourceReport resources(const Netlist& netlist) {
  ResourceReport r;
  for (const auto& cell : netlist.cells()) {
    switch (cell.kind) {
      case CellKind::Lut6: ++r.lut6; break;
      case CellKind::Lut6_2: ++r.lut6_2; break;
      case CellKind::Carry4: ++r.carry4; break;
      default: break;
    }
  }
  return r;
}

}  // namespace fabricmul
