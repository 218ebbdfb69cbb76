#pragma once

// Abstract delay analysis: LUT-level logic depth and weighted critical paths.
// Weights are unitless conventions, not calibrated nanoseconds.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fabricmul/netlist.hpp"

namespace fabricmul {

struct DelayModel {
  double lut6 = 1.0;
  double lut6_2 = 1.0;
  double carry4_stage = 1.0;  ///< Per CARRY4 stage traversed.
  double carry4_entry = 1.0;  ///< Entering a chain from general routing.
  double net_general = 0.0;
  double net_dedicated = 0.0;  ///< Hard-wired CO3 -> CI hop.

  /// Every primitive weight 1, every net weight 0.
  static DelayModel unit();
  /// Cheap carry stages, costly general routing, free dedicated carry hops.
  static DelayModel carry_cheap();
  /// LUTs 1, everything else 0; critical path then equals logic depth.
  static DelayModel lut_depth();

  /// "unit" or "carry-cheap"; throws Error otherwise.
  static DelayModel preset(std::string_view name);
  /// Object with any subset of the field names above; missing fields keep
  /// their unit-model value. Throws SchemaError on bad input.
  static DelayModel from_json(std::string_view text);
  std::string to_json() const;

  /// Throws Error if any weight is negative or not finite.
  void check() const;
};

struct PathStep {
  enum class Kind { Net, Cell };
  Kind kind;
  std::string id;
  double arrival;  ///< Cumulative weight after this step.
};

struct OutputTiming {
  std::string output;
  int depth = 0;
  double arrival = 0.0;
};

struct TimingReport {
  std::vector<OutputTiming> outputs;
  /// Starts at a primary-input net, ends at a primary-output net.
  std::vector<PathStep> critical_path;
  double critical_weight = 0.0;

  std::string to_text() const;
  std::string to_json() const;
};

/// Per output: most LUT cells on any input-to-output path. CARRY4 cells are
/// traversed but not counted. Throws ValidationError on an invalid netlist.
std::map<std::string, int> logic_depth(const Netlist& netlist);

/// Longest weighted input-to-output path. Equal-weight paths are resolved to
/// the lexicographically smallest cell-id sequence.
TimingReport critical_path(const Netlist& netlist, const DelayModel& model);

}  // namespace fabricmul
