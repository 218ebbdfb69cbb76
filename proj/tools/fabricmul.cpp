// fabricmul: build, verify, analyze and emit LUT/CARRY4 multiplier netlists.
//
// Exit codes: 0 success, 1 operational error, 2 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "fabricmul/designs.hpp"
#include "fabricmul/emit.hpp"
#include "fabricmul/error.hpp"
#include "fabricmul/netlist.hpp"
#include "fabricmul/reference.hpp"
#include "fabricmul/timing.hpp"
#include "json.hpp"

namespace fm = fabricmul;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerifyFailed = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fm::Error(fmt::format("cannot open '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fm::Error(fmt::format("cannot write '{}'", path));
  out << text;
  if (!out) throw fm::Error(fmt::format("write to '{}' failed", path));
}

fm::Netlist load_netlist(const std::string& path) { return fm::load_json(read_file(path)); }

std::string resources_line(const fm::ResourceReport& r) {
  return fmt::format("LUT6+LUT6_2: {}, CARRY4: {}", r.lut_count(), r.carry4_count());
}

nlohmann::ordered_json resources_json(const fm::ResourceReport& r) {
  return {{"lut_count", r.lut_count()},
          {"carry4_count", r.carry4_count()},
          {"breakdown", {{"LUT6", r.lut6}, {"LUT6_2", r.lut6_2}, {"CARRY4", r.carry4}}}};
}

struct Options {
  bool json = false;
  // build
  std::string design = "proposed";
  int width = 4;
  std::string inits = "derived";
  std::string out;
  // shared
  std::string netlist;
  // timing
  std::string model = "unit";
  // emit
  std::string name;
  bool testbench = false;
  std::string out_dir = ".";
};

int run_build(const Options& o) {
  fm::Netlist netlist;
  if (o.design == "proposed") {
    if (o.width != 4) throw fm::Error("the proposed design is 4-bit only; use --width 4");
    netlist = fm::build_proposed_mult4(o.inits == "published" ? fm::InitSource::Published
                                                              : fm::InitSource::Derived);
  } else {
    netlist = fm::build_array_mult(o.width);
  }
  const std::string text = fm::save_json(netlist);
  if (o.out.empty()) {
    std::cout << text;
    return kExitOk;
  }
  write_file(o.out, text);
  const auto r = fm::resources(netlist);
  if (o.json) {
    nlohmann::ordered_json doc{{"written", o.out}, {"design", o.design}, {"width", o.width}};
    doc["resources"] = resources_json(r);
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << fmt::format("wrote {} ({})\n", o.out, resources_line(r));
  }
  return kExitOk;
}

int run_verify(const Options& o) {
  const auto report = fm::verify_exhaustive(load_netlist(o.netlist), o.width);
  std::cout << (o.json ? report.to_json() : report.to_text());
  if (!report.all_pass()) {
    std::cerr << fmt::format("error: verification failed: {} of {} cases mismatched\n",
                             report.failures.size(), report.total);
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int run_reconcile(const Options& o) {
  const auto report = fm::reconcile_inits(fm::proposed_design_table());
  std::cout << (o.json ? report.to_json() : report.to_text());
  return kExitOk;
}

int run_table(const Options&) {
  std::cout << fm::design_table_json(fm::proposed_design_table());
  return kExitOk;
}

int run_report(const Options& o) {
  const auto r = fm::resources(load_netlist(o.netlist));
  if (o.json) {
    nlohmann::ordered_json doc;
    doc["resources"] = resources_json(r);
    doc["reference"] = nlohmann::ordered_json::parse(fm::reference_tables_json());
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << resources_line(r) << "\n";
  std::cout << fmt::format("  LUT6: {}\n  LUT6_2: {}\n  CARRY4: {}\n", r.lut6, r.lut6_2, r.carry4);
  std::cout << fm::reference_resources_text();
  return kExitOk;
}

int run_timing(const Options& o) {
  fm::DelayModel model;
  if (o.model == "unit" || o.model == "carry-cheap") {
    model = fm::DelayModel::preset(o.model);
  } else {
    model = fm::DelayModel::from_json(read_file(o.model));
  }
  const auto report = fm::critical_path(load_netlist(o.netlist), model);
  if (o.json) {
    nlohmann::ordered_json doc;
    doc["model"] = nlohmann::ordered_json::parse(model.to_json());
    doc["timing"] = nlohmann::ordered_json::parse(report.to_json());
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << report.to_text();
  std::cout << "abstract weights only; see the reference delays below for measured figures\n";
  std::cout << fm::reference_critical_paths_text();
  return kExitOk;
}

int run_emit(const Options& o) {
  const auto netlist = load_netlist(o.netlist);
  const std::filesystem::path dir(o.out_dir);
  const auto module_path = (dir / (o.name + ".v")).string();
  write_file(module_path, fm::emit_verilog(netlist, o.name));
  std::vector<std::string> written{module_path};
  if (o.testbench) {
    const auto tb_path = (dir / (o.name + "_tb.v")).string();
    write_file(tb_path, fm::emit_testbench(netlist, o.name, o.width));
    written.push_back(tb_path);
  }
  if (o.json) {
    std::cout << nlohmann::ordered_json{{"written", written}}.dump(2) << "\n";
  } else {
    for (const auto& w : written) std::cout << "wrote " << w << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build, verify, analyze and emit LUT6/CARRY4 multiplier netlists"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "Build a multiplier netlist and write it as JSON");
  build->add_option("--design", o.design, "proposed | array")
      ->check(CLI::IsMember({"proposed", "array"}));
  build->add_option("--width", o.width, "Operand width (array: 2..8, proposed: 4)");
  build->add_option("--inits", o.inits, "LUT constants for the proposed design: published | derived")
      ->check(CLI::IsMember({"published", "derived"}));
  build->add_option("--out", o.out, "Output netlist file (stdout if omitted)");
  build->add_flag("--json", o.json, "Machine-readable summary");

  auto* verify = app.add_subcommand("verify", "Exhaustively check a netlist against a*b");
  verify->add_option("--netlist", o.netlist, "Netlist JSON file")->required();
  verify->add_option("--width", o.width, "Operand width");
  verify->add_flag("--json", o.json, "Machine-readable report");

  auto* reconcile = app.add_subcommand("reconcile", "Compare derived and published LUT constants");
  reconcile->add_flag("--json", o.json, "Machine-readable report");

  auto* table = app.add_subcommand("table", "Export the proposed design's LUT table as JSON");

  auto* report = app.add_subcommand("report", "Resource counts with reference figures");
  report->add_option("--netlist", o.netlist, "Netlist JSON file")->required();
  report->add_flag("--json", o.json, "Machine-readable report");

  auto* timing = app.add_subcommand("timing", "Logic depth and weighted critical path");
  timing->add_option("--netlist", o.netlist, "Netlist JSON file")->required();
  timing->add_option("--model", o.model, "unit | carry-cheap | delay-model JSON file");
  timing->add_flag("--json", o.json, "Machine-readable report");

  auto* emit = app.add_subcommand("emit", "Write structural Verilog (and a testbench)");
  emit->add_option("--netlist", o.netlist, "Netlist JSON file")->required();
  emit->add_option("--name", o.name, "Module name")->required();
  emit->add_flag("--testbench", o.testbench, "Also write <name>_tb.v");
  emit->add_option("--width", o.width, "Operand width for the testbench");
  emit->add_option("--out-dir", o.out_dir, "Directory for the generated files");
  emit->add_flag("--json", o.json, "Machine-readable summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (build->parsed()) return run_build(o);
    if (verify->parsed()) return run_verify(o);
    if (reconcile->parsed()) return run_reconcile(o);
    if (table->parsed()) return run_table(o);
    if (report->parsed()) return run_report(o);
    if (timing->parsed()) return run_timing(o);
    if (emit->parsed()) return run_emit(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
