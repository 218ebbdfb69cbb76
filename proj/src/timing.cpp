#include "fabricmul/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>

#include <fmt/format.h>

#include "fabricmul/error.hpp"
#include "json.hpp"

namespace fabricmul {

// ---------------------------------------------------------------------------
// DelayModel

DelayModel DelayModel::unit() { return DelayModel{}; }

DelayModel DelayModel::carry_cheap() {
  return DelayModel{.lut6 = 1.0,
                    .lut6_2 = 1.0,
                    .carry4_stage = 0.1,
                    .carry4_entry = 0.5,
                    .net_general = 1.0,
                    .net_dedicated = 0.0};
}

DelayModel DelayModel::lut_depth() {
  return DelayModel{.lut6 = 1.0,
                    .lut6_2 = 1.0,
                    .carry4_stage = 0.0,
                    .carry4_entry = 0.0,
                    .net_general = 0.0,
                    .net_dedicated = 0.0};
}

DelayModel DelayModel::preset(std::string_view name) {
  if (name == "unit") return unit();
  if (name == "carry-cheap") return carry_cheap();
  throw Error(fmt::format("unknown delay model preset '{}' (expected unit or carry-cheap)", name));
}

namespace {

struct WeightField {
  const char* key;
  double DelayModel::*member;
};

constexpr WeightField kFields[] = {
    {"lut6", &DelayModel::lut6},
    {"lut6_2", &DelayModel::lut6_2},
    {"carry4_stage", &DelayModel::carry4_stage},
    {"carry4_entry", &DelayModel::carry4_entry},
    {"net_general", &DelayModel::net_general},
    {"net_dedicated", &DelayModel::net_dedicated},
};

}  // namespace

DelayModel DelayModel::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(fmt::format("$: invalid JSON ({})", e.what()));
  }
  if (!doc.is_object()) throw SchemaError("$: delay model must be an object");
  DelayModel model = unit();
  for (const auto& [key, value] : doc.items()) {
    const auto* field = std::find_if(std::begin(kFields), std::end(kFields),
                                     [&](const WeightField& f) { return key == f.key; });
    if (field == std::end(kFields)) throw SchemaError(fmt::format("$.{}: unknown weight", key));
    if (!value.is_number()) throw SchemaError(fmt::format("$.{}: expected a number", key));
    model.*(field->member) = value.get<double>();
  }
  try {
    model.check();
  } catch (const Error& e) {
    throw SchemaError(fmt::format("$: {}", e.what()));
  }
  return model;
}

std::string DelayModel::to_json() const {
  nlohmann::ordered_json doc;
  for (const auto& f : kFields) doc[f.key] = this->*(f.member);
  return doc.dump(2) + "\n";
}

void DelayModel::check() const {
  for (const auto& f : kFields) {
    const double w = this->*(f.member);
    if (!std::isfinite(w) || w < 0.0)
      throw Error(fmt::format("weight {} must be finite and non-negative, got {}", f.key, w));
  }
}

// ---------------------------------------------------------------------------
// Timing graph

namespace {

constexpr double kNone = -std::numeric_limits<double>::infinity();

bool same_weight(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

struct Arc {
  int from;  // net index
  int to;    // net index
  std::size_t cell;
  double weight;  // includes the weight of the incoming net hop
};

/// Stage of a CARRY4 pin: CI is -1, S<i>/DI<i>/O<i>/CO<i> are i.
int carry_stage(std::string_view pin) {
  if (pin == "CI") return -1;
  return pin.back() - '0';
}

struct TimingGraph {
  std::vector<std::string> nets;
  std::unordered_map<std::string, int> index;
  std::vector<bool> is_input;
  std::vector<bool> is_output;
  std::vector<Arc> arcs;  // in topological order of their cells
  std::vector<std::string> cell_ids;

  TimingGraph(const Netlist& netlist, const DelayModel& model) {
    model.check();
    const auto order = topological_order(netlist);
    for (const auto& net : netlist.nets()) {
      index.emplace(net.id, static_cast<int>(nets.size()));
      nets.push_back(net.id);
      is_output.push_back(net.primary_output);
      is_input.push_back(std::any_of(net.drivers.begin(), net.drivers.end(),
                                     [](const Driver& d) { return d.primary_input; }));
    }
    for (const auto& cell : netlist.cells()) cell_ids.push_back(cell.id);

    auto hop = [&](const std::string& net) {
      return netlist.is_dedicated(net) ? model.net_dedicated : model.net_general;
    };

    for (std::size_t ci : order) {
      const Cell& cell = netlist.cells()[ci];
      for (auto out_pin : output_pins(cell.kind)) {
        const auto* out_net = cell.net_on(out_pin);
        if (!out_net) continue;
        for (auto in_pin : input_pins(cell.kind)) {
          const std::string& in_net = *cell.net_on(in_pin);
          double w = hop(in_net);
          if (cell.kind == CellKind::Lut6) {
            w += model.lut6;
          } else if (cell.kind == CellKind::Lut6_2) {
            w += model.lut6_2;
          } else if (cell.kind == CellKind::Carry4) {
            const int from = carry_stage(in_pin);
            const int to = carry_stage(out_pin);
            const bool is_sum = out_pin.front() == 'O' && out_pin.size() == 2;
            const bool is_data = in_pin.starts_with("DI");
            // O<i> = S<i> ^ c<i> does not see DI<i>; nothing flows downward.
            if (to < from || (is_data && is_sum && to == from)) continue;
            const int stages = from < 0 ? to + 1 : to - from + 1;
            const bool chained = in_pin == "CI" && netlist.is_dedicated(in_net);
            w += (chained ? 0.0 : model.carry4_entry) + model.carry4_stage * stages;
          } else {
            continue;
          }
          arcs.push_back({index.at(in_net), index.at(*out_net), ci, w});
        }
      }
    }
  }
};

/// Longest arrival at every net from any primary input.
std::vector<double> forward_arrival(const TimingGraph& g) {
  std::vector<double> arrival(g.nets.size(), kNone);
  for (std::size_t n = 0; n < g.nets.size(); ++n)
    if (g.is_input[n]) arrival[n] = 0.0;
  for (const Arc& a : g.arcs) {
    const double from = arrival[static_cast<std::size_t>(a.from)];
    if (from == kNone) continue;
    auto& to = arrival[static_cast<std::size_t>(a.to)];
    to = std::max(to, from + a.weight);
  }
  return arrival;
}

/// Longest remaining weight from every net to any primary output.
std::vector<double> backward_tail(const TimingGraph& g) {
  std::vector<double> tail(g.nets.size(), kNone);
  for (std::size_t n = 0; n < g.nets.size(); ++n)
    if (g.is_output[n]) tail[n] = 0.0;
  for (auto it = g.arcs.rbegin(); it != g.arcs.rend(); ++it) {
    const double to = tail[static_cast<std::size_t>(it->to)];
    if (to == kNone) continue;
    auto& from = tail[static_cast<std::size_t>(it->from)];
    from = std::max(from, to + it->weight);
  }
  return tail;
}

}  // namespace

std::map<std::string, int> logic_depth(const Netlist& netlist) {
  const TimingGraph g(netlist, DelayModel::lut_depth());
  const auto arrival = forward_arrival(g);
  std::map<std::string, int> out;
  for (const auto& name : netlist.outputs()) {
    const double a = arrival[static_cast<std::size_t>(g.index.at(name))];
    out[name] = a == kNone ? 0 : static_cast<int>(std::lround(a));
  }
  return out;
}

TimingReport critical_path(const Netlist& netlist, const DelayModel& model) {
  const TimingGraph g(netlist, model);
  const auto arrival = forward_arrival(g);
  const auto tail = backward_tail(g);
  const auto depth = logic_depth(netlist);

  TimingReport report;
  for (const auto& name : netlist.outputs()) {
    const double a = arrival[static_cast<std::size_t>(g.index.at(name))];
    report.outputs.push_back({name, depth.at(name), a == kNone ? 0.0 : a});
  }

  double total = kNone;
  for (std::size_t n = 0; n < g.nets.size(); ++n)
    if (g.is_input[n]) total = std::max(total, tail[n]);
  if (total == kNone) return report;  // no input reaches an output
  report.critical_weight = total;

  std::vector<std::vector<const Arc*>> fanout(g.nets.size());
  for (const Arc& a : g.arcs) fanout[static_cast<std::size_t>(a.from)].push_back(&a);

  // Greedy forward walk over optimal moves, always taking the smallest next
  // cell id. All frontier entries share the cell sequence walked so far.
  struct Entry {
    int net;
    double arrival;
    int parent;         // index into `trail`, -1 at the start
    const Arc* via;     // arc taken to reach `net`
  };
  std::vector<Entry> trail;
  std::vector<int> frontier;
  for (std::size_t n = 0; n < g.nets.size(); ++n) {
    if (g.is_input[n] && same_weight(tail[n], total)) {
      frontier.push_back(static_cast<int>(trail.size()));
      trail.push_back({static_cast<int>(n), 0.0, -1, nullptr});
    }
  }

  int finish = -1;
  while (finish < 0 && !frontier.empty()) {
    // Stopping here yields a proper prefix of any extension, which sorts first.
    for (int e : frontier) {
      const Entry& entry = trail[static_cast<std::size_t>(e)];
      if (g.is_output[static_cast<std::size_t>(entry.net)] && same_weight(entry.arrival, total)) {
        if (finish < 0 || g.nets[static_cast<std::size_t>(entry.net)] <
                              g.nets[static_cast<std::size_t>(trail[static_cast<std::size_t>(finish)].net)])
          finish = e;
      }
    }
    if (finish >= 0) break;

    const std::string* best_cell = nullptr;
    std::vector<std::pair<int, const Arc*>> moves;
    for (int e : frontier) {
      const Entry& entry = trail[static_cast<std::size_t>(e)];
      for (const Arc* a : fanout[static_cast<std::size_t>(entry.net)]) {
        const double rest = tail[static_cast<std::size_t>(a->to)];
        if (rest == kNone || !same_weight(entry.arrival + a->weight + rest, total)) continue;
        const std::string& cell = g.cell_ids[a->cell];
        if (!best_cell || cell < *best_cell) {
          best_cell = &cell;
          moves.clear();
        }
        if (cell == *best_cell) moves.emplace_back(e, a);
      }
    }
    std::vector<int> next;
    std::vector<int> seen_nets;
    for (const auto& [e, a] : moves) {
      if (std::find(seen_nets.begin(), seen_nets.end(), a->to) != seen_nets.end()) continue;
      seen_nets.push_back(a->to);
      const Entry& from = trail[static_cast<std::size_t>(e)];
      next.push_back(static_cast<int>(trail.size()));
      trail.push_back({a->to, from.arrival + a->weight, e, a});
    }
    frontier = std::move(next);
  }
  if (finish < 0) return report;

  std::vector<PathStep> reversed;
  for (int e = finish; e >= 0; e = trail[static_cast<std::size_t>(e)].parent) {
    const Entry& entry = trail[static_cast<std::size_t>(e)];
    reversed.push_back({PathStep::Kind::Net, g.nets[static_cast<std::size_t>(entry.net)], entry.arrival});
    if (entry.via)
      reversed.push_back({PathStep::Kind::Cell, g.cell_ids[entry.via->cell], entry.arrival});
  }
  report.critical_path.assign(reversed.rbegin(), reversed.rend());
  return report;
}

// ---------------------------------------------------------------------------
// Rendering

std::string TimingReport::to_text() const {
  std::string out = fmt::format("{:<10} {:>6} {:>10}\n", "output", "depth", "arrival");
  for (const auto& o : outputs) out += fmt::format("{:<10} {:>6} {:>10.3f}\n", o.output, o.depth, o.arrival);
  out += fmt::format("critical path weight: {:.3f}\n", critical_weight);
  for (const auto& step : critical_path)
    out += fmt::format("  {:<5} {:<16} {:>8.3f}\n", step.kind == PathStep::Kind::Net ? "net" : "cell",
                       step.id, step.arrival);
  return out;
}

std::string TimingReport::to_json() const {
  nlohmann::ordered_json doc;
  auto outs = nlohmann::ordered_json::array();
  for (const auto& o : outputs)
    outs.push_back({{"output", o.output}, {"depth", o.depth}, {"arrival", o.arrival}});
  doc["outputs"] = std::move(outs);
  doc["critical_weight"] = critical_weight;
  auto path = nlohmann::ordered_json::array();
  for (const auto& step : critical_path)
    path.push_back({{"kind", step.kind == PathStep::Kind::Net ? "net" : "cell"},
                    {"id", step.id},
                    {"arrival", step.arrival}});
  doc["critical_path"] = std::move(path);
  return doc.dump(2) + "\n";
}

}  // namespace fabricmul
