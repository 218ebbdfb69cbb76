#include <fmt/format.h>

#include "fabricmul/error.hpp"
#include "fabricmul/netlist.hpp"
#include "json.hpp"

namespace fabricmul {

using ojson = nlohmann::ordered_json;

namespace {

ojson pin_ref_json(const PinRef& ref) { return ojson{{"cell", ref.cell}, {"pin", ref.pin}}; }

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw SchemaError(fmt::format("{}: {}", path, what));
}

const ojson& field(const ojson& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path, fmt::format("missing field '{}'", key));
  return *it;
}

std::string string_at(const ojson& value, const std::string& path) {
  if (!value.is_string()) schema_fail(path, "expected a string");
  return value.get<std::string>();
}

const ojson& array_at(const ojson& value, const std::string& path) {
  if (!value.is_array()) schema_fail(path, "expected an array");
  return value;
}

PinRef pin_ref_from(const ojson& value, const std::string& path) {
  if (!value.is_object()) schema_fail(path, "expected an object with 'cell' and 'pin'");
  return PinRef{string_at(field(value, "cell", path), path + ".cell"),
                string_at(field(value, "pin", path), path + ".pin")};
}

}  // namespace

std::string save_json(const Netlist& netlist) {
  ojson doc;
  doc["fabricmul_netlist"] = kNetlistFormatVersion;
  doc["inputs"] = netlist.inputs();
  doc["outputs"] = netlist.outputs();

  ojson cells = ojson::array();
  for (const auto& cell : netlist.cells()) {
    ojson c;
    c["id"] = cell.id;
    c["kind"] = std::string(to_string(cell.kind));
    if (is_lut(cell.kind)) c["init"] = cell.init.to_string();
    ojson pins = ojson::object();
    for (auto pin : input_pins(cell.kind))
      if (const auto* net = cell.net_on(pin)) pins[std::string(pin)] = *net;
    for (auto pin : output_pins(cell.kind))
      if (const auto* net = cell.net_on(pin)) pins[std::string(pin)] = *net;
    c["pins"] = std::move(pins);
    cells.push_back(std::move(c));
  }
  doc["cells"] = std::move(cells);

  ojson nets = ojson::array();
  for (const auto& net : netlist.nets()) {
    ojson n;
    n["id"] = net.id;
    if (net.drivers.empty()) {
      n["driver"] = nullptr;
    } else if (net.drivers.front().primary_input) {
      n["driver"] = ojson{{"input", net.id}};
    } else {
      n["driver"] = pin_ref_json(net.drivers.front().pin);
    }
    ojson loads = ojson::array();
    for (const auto& load : net.loads) loads.push_back(pin_ref_json(load));
    n["loads"] = std::move(loads);
    if (net.dedicated) n["dedicated"] = true;
    nets.push_back(std::move(n));
  }
  doc["nets"] = std::move(nets);
  return doc.dump(2) + "\n";
}

Netlist load_json(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(fmt::format("$: invalid JSON ({})", e.what()));
  }
  if (!doc.is_object()) schema_fail("$", "expected an object");

  const auto& version = field(doc, "fabricmul_netlist", "$");
  if (!version.is_number_integer()) schema_fail("$.fabricmul_netlist", "expected an integer");
  if (version.get<int>() != kNetlistFormatVersion)
    throw SchemaError(fmt::format("$.fabricmul_netlist: unsupported format version {} (expected {})",
                                  version.get<int>(), kNetlistFormatVersion));

  Netlist netlist;
  const auto& inputs = array_at(field(doc, "inputs", "$"), "$.inputs");
  for (std::size_t i = 0; i < inputs.size(); ++i)
    netlist.add_input(string_at(inputs[i], fmt::format("$.inputs[{}]", i)));
  const auto& outputs = array_at(field(doc, "outputs", "$"), "$.outputs");
  for (std::size_t i = 0; i < outputs.size(); ++i)
    netlist.add_output(string_at(outputs[i], fmt::format("$.outputs[{}]", i)));

  const auto& cells = array_at(field(doc, "cells", "$"), "$.cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string path = fmt::format("$.cells[{}]", i);
    const auto& c = cells[i];
    if (!c.is_object()) schema_fail(path, "expected an object");
    const std::string id = string_at(field(c, "id", path), path + ".id");
    const std::string kind_text = string_at(field(c, "kind", path), path + ".kind");
    const auto kind = parse_cell_kind(kind_text);
    if (!kind) schema_fail(path + ".kind", fmt::format("unknown cell kind '{}'", kind_text));

    Init64 init;
    if (is_lut(*kind)) {
      const std::string init_text = string_at(field(c, "init", path), path + ".init");
      try {
        init = Init64::parse(init_text);
      } catch (const ParseError& e) {
        schema_fail(path + ".init", e.what());
      }
    }

    const auto& pins = field(c, "pins", path);
    if (!pins.is_object()) schema_fail(path + ".pins", "expected an object");
    std::map<std::string, std::string> pin_map;
    for (const auto& [pin, net] : pins.items())
      pin_map[pin] = string_at(net, fmt::format("{}.pins.{}", path, pin));
    try {
      netlist.add_cell(id, *kind, std::move(pin_map), init);
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      schema_fail(path, e.what());
    }
  }

  // The net table is redundant with the cell pins; it must agree with them and
  // is the only carrier of the dedicated flag.
  const auto& nets = array_at(field(doc, "nets", "$"), "$.nets");
  std::map<std::string, Net> derived;
  for (auto& net : netlist.nets()) derived.emplace(net.id, std::move(net));
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const std::string path = fmt::format("$.nets[{}]", i);
    const auto& n = nets[i];
    if (!n.is_object()) schema_fail(path, "expected an object");
    const std::string id = string_at(field(n, "id", path), path + ".id");
    auto it = derived.find(id);
    if (it == derived.end()) schema_fail(path + ".id", fmt::format("net '{}' is not referenced", id));
    const Net& expect = it->second;

    const auto& driver = field(n, "driver", path);
    if (driver.is_null()) {
      if (!expect.drivers.empty()) schema_fail(path + ".driver", "null but the net is driven");
    } else if (driver.is_object() && driver.contains("input")) {
      const bool listed = std::any_of(expect.drivers.begin(), expect.drivers.end(),
                                      [](const Driver& d) { return d.primary_input; });
      if (!listed) schema_fail(path + ".driver", "net is not a primary input");
    } else {
      const PinRef ref = pin_ref_from(driver, path + ".driver");
      const bool listed = std::any_of(expect.drivers.begin(), expect.drivers.end(),
                                      [&](const Driver& d) { return !d.primary_input && d.pin == ref; });
      if (!listed)
        schema_fail(path + ".driver",
                    fmt::format("{}.{} does not drive net '{}'", ref.cell, ref.pin, id));
    }

    const auto& loads = array_at(field(n, "loads", path), path + ".loads");
    std::vector<PinRef> listed;
    for (std::size_t j = 0; j < loads.size(); ++j)
      listed.push_back(pin_ref_from(loads[j], fmt::format("{}.loads[{}]", path, j)));
    auto sorted_expect = expect.loads;
    std::sort(listed.begin(), listed.end());
    std::sort(sorted_expect.begin(), sorted_expect.end());
    if (listed != sorted_expect) schema_fail(path + ".loads", "loads disagree with cell pins");

    if (auto d = n.find("dedicated"); d != n.end()) {
      if (!d->is_boolean()) schema_fail(path + ".dedicated", "expected a boolean");
      if (d->get<bool>()) netlist.set_dedicated(id);
    }
  }
  return netlist;
}

}  // namespace fabricmul
