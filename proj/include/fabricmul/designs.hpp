#pragma once

// The 11-LUT / 2-CARRY4 exact 4x4 multiplier, an array-multiplier baseline,
// the integer reference oracle, exhaustive verification and INIT
// reconciliation.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fabricmul/netlist.hpp"
#include "fabricmul/truthtable.hpp"

namespace fabricmul {

// ---------------------------------------------------------------------------
// Design table

struct RowOutput {
  std::string signal;
  OutputTap tap = OutputTap::O6;
  std::string printed;  ///< Function as listed, intermediates unexpanded.
  BoolExpr function;    ///< Intermediates expanded; over primary inputs, S1 and S3.
};

struct DesignRow {
  int lut = 0;
  std::vector<RowOutput> outputs;           ///< One entry, or O6 then O5 for dual-output rows.
  std::vector<std::string> printed_inputs;  ///< Input column exactly as listed.
  std::array<Pin, 6> pins{Pin::tied_high(), Pin::tied_high(), Pin::tied_high(),
                          Pin::tied_high(), Pin::tied_high(), Pin::tied_high()};
  std::string binding_note;  ///< Why `pins` departs from `printed_inputs`, if it does.
  Init64 published;

  bool dual() const noexcept { return outputs.size() == 2; }
  const RowOutput* output(OutputTap tap) const;
  bool printed_matches_pins() const;
};

struct DesignTable {
  int version = 1;
  std::map<std::string, std::string> intermediates;  ///< S2, C1..C4, S4 as listed.
  std::vector<DesignRow> rows;
};

/// The published 11-row LUT table of the proposed multiplier.
const DesignTable& proposed_design_table();

/// INIT derived from the row's function(s) under its resolved pin binding.
Init64 derived_init(const DesignRow& row);

std::string design_table_json(const DesignTable& table);

// ---------------------------------------------------------------------------
// Builders

enum class InitSource { Published, Derived };

const char* to_string(InitSource source) noexcept;

/// Inputs A0..A3, B0..B3; outputs P0..P7. Eight LUT6, three LUT6_2 and two
/// CARRY4 cells, plus one constant-0 and one constant-1 tie cell.
Netlist build_proposed_mult4(InitSource source);

/// LUT6-only array multiplier: one AND per partial product, one LUT per
/// half/full-adder output, ripple accumulation row by row. 2 <= width <= 8.
Netlist build_array_mult(int width);

/// Number of LUTs build_array_mult(width) produces: width^2 partial products
/// plus width*(width-1) two-LUT adders.
constexpr std::size_t array_mult_lut_count(int width) noexcept {
  const auto w = static_cast<std::size_t>(width);
  return w * w + 2 * w * (w - 1);
}

// ---------------------------------------------------------------------------
// Oracle and verification

/// a * b by integer arithmetic. Throws RangeError unless both fit `width` bits.
unsigned oracle_mult(unsigned a, unsigned b, int width = 4);

struct MismatchCase {
  unsigned a = 0;
  unsigned b = 0;
  unsigned expected = 0;
  unsigned actual = 0;
};

struct VerificationReport {
  int width = 0;
  std::size_t total = 0;
  std::size_t passed = 0;
  std::vector<MismatchCase> failures;

  bool all_pass() const noexcept { return failures.empty() && passed == total; }
  std::string to_text() const;
  std::string to_json() const;
};

/// Evaluates every (a, b) pair against oracle_mult. Inputs must be exactly
/// A0..A{w-1}, B0..B{w-1} and outputs P0..P{2w-1} (any order), else
/// PortConventionError.
VerificationReport verify_exhaustive(const Netlist& netlist, int width);

// ---------------------------------------------------------------------------
// Reconciliation

struct RowReconciliation {
  int lut = 0;
  std::vector<std::string> outputs;
  Init64 derived;
  Init64 published;
  bool match = false;
  bool low_half_only = false;  ///< Dual-output row: match judged on the O5 half.
  std::vector<std::string> notes;
};

struct ReconcileReport {
  std::vector<RowReconciliation> rows;
  std::vector<std::string> findings;  ///< Cross-row observations.

  std::size_t match_count() const noexcept;
  const RowReconciliation* row(int lut) const;
  std::string to_text() const;
  std::string to_json() const;
};

/// Compares derived and published constants row by row; never mutates the table.
ReconcileReport reconcile_inits(const DesignTable& table);

}  // namespace fabricmul
