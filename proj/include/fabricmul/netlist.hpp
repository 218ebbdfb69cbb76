#pragma once

// Single-bit netlists of LUT6 / LUT6_2 / CARRY4 cells.
//
// A netlist is built by adding primary inputs, primary outputs and cells; each
// cell maps its pin names onto net identifiers. Nets are implied by those
// references: a net exists once any pin, input or output names it. Nets are
// single bits; buses are a naming convention only.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fabricmul/truthtable.hpp"

namespace fabricmul {

enum class CellKind { Lut6, Lut6_2, Carry4, Const0, Const1 };

/// "LUT6", "LUT6_2", "CARRY4", "CONST0", "CONST1".
std::string_view to_string(CellKind kind) noexcept;
std::optional<CellKind> parse_cell_kind(std::string_view text) noexcept;

std::span<const std::string_view> input_pins(CellKind kind) noexcept;
std::span<const std::string_view> output_pins(CellKind kind) noexcept;
bool is_lut(CellKind kind) noexcept;

struct Cell {
  std::string id;
  CellKind kind = CellKind::Lut6;
  Init64 init;  ///< Meaningful for LUT kinds only.
  std::map<std::string, std::string> pins;  ///< pin name -> net id

  /// Net on `pin`, or nullptr when unconnected.
  const std::string* net_on(std::string_view pin) const;

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct PinRef {
  std::string cell;
  std::string pin;
  friend auto operator<=>(const PinRef&, const PinRef&) = default;
};

/// Source of a net: a primary input or a cell output pin.
struct Driver {
  bool primary_input = false;
  PinRef pin;  ///< Valid when !primary_input.
  friend bool operator==(const Driver&, const Driver&) = default;
};

struct Net {
  std::string id;
  std::vector<Driver> drivers;
  std::vector<PinRef> loads;
  bool primary_output = false;
  bool dedicated = false;
};

class Netlist {
 public:
  void add_input(std::string name);
  void add_output(std::string name);

  /// Throws Error on a duplicate cell id or a pin name the kind lacks.
  Cell& add_cell(std::string id, CellKind kind, std::map<std::string, std::string> pins,
                 Init64 init = Init64());

  /// Marks a net as a dedicated (hard-wired) carry connection.
  void set_dedicated(std::string net, bool dedicated = true);
  void set_init(std::string_view cell_id, Init64 init);

  const std::vector<std::string>& inputs() const noexcept { return inputs_; }
  const std::vector<std::string>& outputs() const noexcept { return outputs_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const std::set<std::string>& dedicated_nets() const noexcept { return dedicated_; }
  bool is_dedicated(std::string_view net) const { return dedicated_.contains(std::string(net)); }

  const Cell* find_cell(std::string_view id) const;

  /// All nets in order of first mention: inputs, cell pins, outputs.
  std::vector<Net> nets() const;

  friend bool operator==(const Netlist&, const Netlist&) = default;

 private:
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::vector<Cell> cells_;
  std::set<std::string> dedicated_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  enum class Kind { MultipleDrivers, UndrivenNet, Cycle, DanglingPin };
  Kind kind;
  std::vector<std::string> subjects;  ///< net ids, or cell ids for cycles
  std::string message;
};

const char* to_string(Violation::Kind kind) noexcept;

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::string to_string() const;
};

/// Violations are reported as data; this never throws.
ValidationReport validate(const Netlist& netlist);

/// Cell indices in a dependency-respecting order. Throws ValidationError if
/// the netlist does not validate. With `rng`, ties are broken randomly.
std::vector<std::size_t> topological_order(const Netlist& netlist, std::mt19937_64* rng = nullptr);

// ---------------------------------------------------------------------------
// Evaluation

/// A validated netlist compiled for repeated evaluation. Read-only after
/// construction, so one instance may be shared across threads.
class Simulator {
 public:
  /// Throws ValidationError when the netlist does not validate.
  explicit Simulator(const Netlist& netlist);
  Simulator(const Netlist& netlist, std::span<const std::size_t> cell_order);

  /// Bit i of `inputs` drives netlist.inputs()[i]; bit j of the result is
  /// netlist.outputs()[j]. Up to 64 inputs and outputs.
  std::uint64_t evaluate_packed(std::uint64_t inputs) const;

  /// Throws Error when a primary input is missing from `inputs`.
  std::map<std::string, bool> evaluate(const std::map<std::string, bool>& inputs) const;

 private:
  struct Op {
    CellKind kind;
    Init64 init;
    std::vector<int> in;   // net index per input pin, kind order
    std::vector<int> out;  // net index per output pin, -1 if unconnected
  };

  void compile(const Netlist& netlist, std::span<const std::size_t> order);

  std::vector<std::string> input_names_;
  std::vector<std::string> output_names_;
  std::vector<int> input_nets_;
  std::vector<int> output_nets_;
  std::vector<Op> ops_;
  std::size_t net_count_ = 0;
};

/// One-shot evaluation; validates on every call.
std::map<std::string, bool> evaluate(const Netlist& netlist, const std::map<std::string, bool>& inputs);

// ---------------------------------------------------------------------------
// Resources

struct ResourceReport {
  std::size_t lut6 = 0;
  std::size_t lut6_2 = 0;
  std::size_t carry4 = 0;

  std::size_t lut_count() const noexcept { return lut6 + lut6_2; }
  std::size_t carry4_count() const noexcept { return carry4; }
  std::map<std::string, std::size_t> breakdown() const;

  friend bool operator==(const ResourceReport&, const ResourceReport&) = default;
};

ResourceReport resources(const Netlist& netlist);

// ---------------------------------------------------------------------------
// JSON persistence

inline constexpr int kNetlistFormatVersion = 1;

std::string save_json(const Netlist& netlist);

/// Throws SchemaError (message carries a JSON path such as `$.cells[2].kind`)
/// on malformed input or an unsupported format version.
Netlist load_json(std::string_view text);

}  // namespace fabricmul
