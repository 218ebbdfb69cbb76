#include <algorithm>

#include <fmt/format.h>

#include "fabricmul/designs.hpp"
#include "fabricmul/error.hpp"
#include "json.hpp"

namespace fabricmul {

namespace {

struct RowSpec {
  int lut;
  std::vector<std::pair<std::string, std::string>> outputs;  // signal, function; O6 first
  std::vector<std::string> printed_inputs;
  std::vector<std::string> resolved_inputs;
  const char* binding_note;
  std::uint64_t published;
};

// Intermediate symbols that live inside a single LUT and never become nets.
const std::vector<std::pair<std::string, std::string>> kIntermediates = {
    {"S2", "A3&B1 ^ A2&B2 ^ A1&B3"},
    {"C1", "A1&B2 & A2&B1"},
    {"C2", "A3&B1 & A2&B2 | A1&B3 & A2&B2 | A3&B1 & A1&B3"},
    {"C3", "S2 & C1"},
    {"S4", "A3&B2 ^ A2&B3 ^ C2"},
    {"C4", "A3&B2 & A2&B3 | A3&B2 & C2 | A2&B3 & C2"},
};

const std::vector<RowSpec> kRows = {
    {1,
     {{"P1", "A1&B0 ^ A0&B1"}, {"P0", "A0&B0"}},
     {"A0", "B1", "B0", "A1", "1", "1"},
     {},
     "",
     0x78887888A0A0A0A0ull},
    {2,
     {{"P2", "A2&B0 ^ A1&B1 ^ A0&B2 ^ (A0&B1 & A1&B0)"}},
     {"A2", "B0", "A0", "B1", "A1", "B2"},
     {},
     "",
     0xF8808080C8000000ull},
    {3,
     {{"C0", "A1&B1 & A0&B2 | A2&B0 & A1&B1 | A2&B0 & A0&B2 | (A0&B1 & A1&B0)"}},
     {"B2", "A2", "B0", "A0", "B1", "A1"},
     {},
     "",
     0x653F6AC06AC06AC0ull},
    {4,
     {{"S1", "A1&B2 ^ A2&B1 ^ (A1&B1 & A0&B2 & A2&B0)"}},
     {"A1", "B2", "A2", "A0", "B1", "B0"},
     {},
     "",
     0xF878888878788888ull},
    {5,
     {{"Prop0", "(S1 ^ A3&B0) ^ A0&B3"}, {"Gen0", "(S1 ^ A3&B0) & A0&B3"}},
     {"B3", "A0", "S1", "A3", "B0", "1"},
     {},
     "",
     0x8778787808808080ull},
    {6,
     {{"S3", "S2 ^ C1"}},
     {"B3", "A1", "B1", "A3", "B2", "A2"},
     {},
     "",
     0x47B7788878887888ull},
    {7,
     {{"Prop1", "S3 ^ (S1 & A3&B0)"}, {"Gen1", "S3 & (S1 & A3&B0)"}},
     {"B0", "S1", "A3", "B3", "1", "1"},
     {"B0", "S1", "A3", "S3", "1", "1"},
     "I3 is listed as B3, but both functions read S3 and never B3; I3 is bound to S3",
     0x7F807F8080008000ull},
    {8,
     {{"Prop2", "S4 ^ C3"}},
     {"A2", "B1", "B3", "A1", "B2", "A3"},
     {},
     "",
     0x8000000000000000ull},
    {9,
     {{"Gen2", "S4 & C3"}},
     {"A2", "B1", "B3", "A1", "B2", "A3"},
     {},
     "",
     0x37D760A008A0A0A0ull},
    {10,
     {{"Prop3", "A3&B3 ^ C4"}},
     {"B2", "B1", "A3", "A1", "A2", "B3"},
     {},
     "",
     0xE0A0800000000000ull},
    {11,
     {{"Gen3", "A3&B3 & C4"}},
     {"A2", "B1", "B2", "A1", "B3 A"},
     {"A2", "B1", "B2", "A1", "B3", "A3"},
     "the input list is garbled after A1 (\"B3 A\"); recovered as I4=B3, I5=A3, the only "
     "support signal of the function not otherwise listed",
     0x175F8080A0000000ull},
};

DesignTable make_table() {
  DesignTable table;
  std::map<std::string, BoolExpr> defs;
  for (const auto& [name, text] : kIntermediates) {
    table.intermediates.emplace(name, text);
    defs.emplace(name, BoolExpr::parse(text));
  }
  for (const auto& spec : kRows) {
    DesignRow row;
    row.lut = spec.lut;
    row.printed_inputs = spec.printed_inputs;
    const auto& resolved = spec.resolved_inputs.empty() ? spec.printed_inputs : spec.resolved_inputs;
    const PinBinding binding = PinBinding::from_list(resolved);
    row.pins = binding.pins;
    row.binding_note = spec.binding_note;
    row.published = Init64(spec.published);
    const bool dual = spec.outputs.size() == 2;
    for (std::size_t i = 0; i < spec.outputs.size(); ++i) {
      const auto& [signal, text] = spec.outputs[i];
      row.outputs.push_back(RowOutput{signal, dual && i == 1 ? OutputTap::O5 : OutputTap::O6, text,
                                      expand(BoolExpr::parse(text), defs)});
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

const RowOutput* DesignRow::output(OutputTap tap) const {
  for (const auto& o : outputs)
    if (o.tap == tap) return &o;
  return nullptr;
}

bool DesignRow::printed_matches_pins() const {
  if (printed_inputs.size() != pins.size()) return false;
  for (std::size_t i = 0; i < pins.size(); ++i)
    if (printed_inputs[i] != pins[i].to_string()) return false;
  return true;
}

const DesignTable& proposed_design_table() {
  static const DesignTable table = make_table();
  return table;
}

Init64 derived_init(const DesignRow& row) {
  if (row.dual())
    return derive_dual_init(row.output(OutputTap::O6)->function,
                            row.output(OutputTap::O5)->function, row.pins);
  return derive_init(row.outputs.front().function, PinBinding{row.pins, OutputTap::O6});
}

std::string design_table_json(const DesignTable& table) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["fabricmul_design_table"] = table.version;
  ojson inter = ojson::object();
  for (const auto& [name, text] : table.intermediates) inter[name] = text;
  doc["intermediates"] = std::move(inter);
  ojson rows = ojson::array();
  for (const auto& row : table.rows) {
    ojson r;
    r["lut"] = row.lut;
    r["primitive"] = row.dual() ? "LUT6_2" : "LUT6";
    ojson outs = ojson::array();
    for (const auto& o : row.outputs)
      outs.push_back({{"signal", o.signal},
                      {"tap", to_string(o.tap)},
                      {"function", o.printed},
                      {"expanded", o.function.to_string()}});
    r["outputs"] = std::move(outs);
    r["printed_inputs"] = row.printed_inputs;
    ojson pins = ojson::array();
    for (const auto& p : row.pins) pins.push_back(p.to_string());
    r["pins"] = std::move(pins);
    if (!row.binding_note.empty()) r["binding_note"] = row.binding_note;
    r["published_init"] = row.published.to_string();
    r["derived_init"] = derived_init(row).to_string();
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Reconciliation

namespace {

std::vector<std::string> pin_texts(const std::array<Pin, 6>& pins) {
  std::vector<std::string> out;
  for (const auto& p : pins) out.push_back(p.to_string());
  return out;
}

std::string describe_index(const std::array<Pin, 6>& pins, unsigned k) {
  std::vector<std::string> parts;
  for (unsigned i = 0; i < 6; ++i)
    parts.push_back(fmt::format("I{}={}={}", i, pins[i].to_string(), (k >> i) & 1u));
  return fmt::format("{}", fmt::join(parts, " "));
}

/// First input index consistent with the tied-high pins where the two
/// constants disagree (restricted to the low half when `low_only`).
std::optional<unsigned> first_difference(const std::array<Pin, 6>& pins, Init64 a, Init64 b,
                                         bool low_only) {
  unsigned tied = 0;
  for (unsigned i = 0; i < 6; ++i)
    if (pins[i].is_tied_high()) tied |= 1u << i;
  if (low_only) tied &= 31u;
  const unsigned limit = low_only ? 32 : 64;
  for (unsigned k = 0; k < limit; ++k)
    if ((k & tied) == tied && a.bit(k) != b.bit(k)) return k;
  return std::nullopt;
}

}  // namespace

ReconcileReport reconcile_inits(const DesignTable& table) {
  ReconcileReport report;
  // cross[i] lists rows whose function, derived under row i's binding,
  // reproduces row i's published constant.
  std::map<int, std::vector<int>> cross;

  for (const auto& row : table.rows) {
    RowReconciliation r;
    r.lut = row.lut;
    for (const auto& o : row.outputs) r.outputs.push_back(o.signal);
    r.derived = derived_init(row);
    r.published = row.published;
    r.low_half_only = row.dual();

    if (row.dual()) {
      r.match = r.derived.low_half() == r.published.low_half();
      if (r.match && r.derived.high_half() != r.published.high_half())
        r.notes.push_back(fmt::format("O5 half matches; upper half differs (derived 0x{:08X}, "
                                      "published 0x{:08X})",
                                      r.derived.high_half(), r.published.high_half()));
    } else {
      r.match = r.derived == r.published;
    }

    if (!row.printed_matches_pins()) {
      r.notes.push_back(fmt::format("input column reads [{}]; bound as [{}]: {}",
                                    fmt::join(row.printed_inputs, ", "),
                                    fmt::join(pin_texts(row.pins), ", "),
                                    row.binding_note));
      try {
        DesignRow literal = row;
        literal.pins = PinBinding::from_list(row.printed_inputs).pins;
        const Init64 literal_init = derived_init(literal);
        r.notes.push_back(fmt::format("the literal input list derives {} ({} the published value)",
                                      literal_init.to_string(),
                                      literal_init == row.published ? "equal to" : "not equal to"));
      } catch (const UnboundVariableError& e) {
        r.notes.push_back(fmt::format("the literal input list cannot realize the function: signal "
                                      "{} is unbound",
                                      e.name()));
      } catch (const Error& e) {
        r.notes.push_back(fmt::format("the literal input list is not a valid binding: {}", e.what()));
      }
      if (r.match)
        r.notes.push_back("the resolved binding reproduces the published constant");
    }

    if (!r.match) {
      if (auto k = first_difference(row.pins, r.derived, r.published, row.dual()))
        r.notes.push_back(fmt::format("first disagreement at index {} ({}): derived {}, published {}",
                                      *k, describe_index(row.pins, *k), r.derived.bit(*k) ? 1 : 0,
                                      r.published.bit(*k) ? 1 : 0));
      for (const auto& other : table.rows) {
        if (other.lut == row.lut) continue;
        DesignRow probe = other;
        probe.pins = row.pins;
        try {
          if (derived_init(probe) == row.published) {
            std::vector<std::string> sigs;
            for (const auto& o : other.outputs) sigs.push_back(o.signal);
            r.notes.push_back(fmt::format(
                "published constant equals the function of row {} ({}) derived under this row's "
                "binding",
                other.lut, fmt::join(sigs, ", ")));
            cross[row.lut].push_back(other.lut);
          }
        } catch (const Error&) {
          // The other row's function needs signals this binding lacks.
        }
      }
    }
    report.rows.push_back(std::move(r));
  }

  for (const auto& [lut, partners] : cross) {
    for (int other : partners) {
      if (other <= lut) continue;
      auto it = cross.find(other);
      if (it != cross.end() && std::find(it->second.begin(), it->second.end(), lut) != it->second.end())
        report.findings.push_back(
            fmt::format("rows {} and {}: each published constant is the other row's function "
                        "under its own binding; the two INIT entries appear exchanged",
                        lut, other));
    }
  }
  const std::size_t mismatched = report.rows.size() - report.match_count();
  report.findings.push_back(fmt::format("{} of {} rows match; {} mismatching row(s) use the derived "
                                        "constant in the shipped design",
                                        report.match_count(), report.rows.size(), mismatched));
  return report;
}

std::size_t ReconcileReport::match_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.match; }));
}

const RowReconciliation* ReconcileReport::row(int lut) const {
  for (const auto& r : rows)
    if (r.lut == lut) return &r;
  return nullptr;
}

std::string ReconcileReport::to_text() const {
  std::string out = fmt::format("{:<4} {:<12} {:<20} {:<20} {}\n", "LUT", "outputs", "derived",
                                "published", "status");
  for (const auto& r : rows) {
    const char* status = r.match ? (r.low_half_only ? "match (O5 half)" : "match") : "MISMATCH";
    out += fmt::format("{:<4} {:<12} {:<20} {:<20} {}\n", r.lut, fmt::format("{}", fmt::join(r.outputs, ",")),
                       r.derived.to_string(), r.published.to_string(), status);
    for (const auto& note : r.notes) out += fmt::format("       - {}\n", note);
  }
  out += "findings:\n";
  for (const auto& f : findings) out += fmt::format("  - {}\n", f);
  return out;
}

std::string ReconcileReport::to_json() const {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  ojson rows_json = ojson::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"lut", r.lut},
                         {"outputs", r.outputs},
                         {"derived", r.derived.to_string()},
                         {"published", r.published.to_string()},
                         {"match", r.match},
                         {"low_half_only", r.low_half_only},
                         {"notes", r.notes}});
  }
  doc["rows"] = std::move(rows_json);
  doc["matches"] = match_count();
  doc["findings"] = findings;
  return doc.dump(2) + "\n";
}

}  // namespace fabricmul
