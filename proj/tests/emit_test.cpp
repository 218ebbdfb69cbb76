#include "fabricmul/emit.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "fabricmul/designs.hpp"
#include "fabricmul/error.hpp"

using namespace fabricmul;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + needle.size())) ++n;
  return n;
}

std::size_t count_regex(const std::string& text, const std::string& pattern) {
  const std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), {}));
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_bus(std::string text) {
  std::vector<std::string> parts;
  if (text.front() != '{') return {text};
  text = text.substr(1, text.size() - 2);
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    parts.push_back(item);
  }
  return parts;
}

// Reads the emitted structural module back into a netlist. Deliberately
// independent of the emitter: it only knows the primitive port lists.
Netlist parse_structural(const std::string& v) {
  Netlist n;
  const std::regex port(R"((input|output)\s+wire\s+(\w+))");
  for (std::sregex_iterator it(v.begin(), v.end(), port), end; it != end; ++it) {
    if ((*it)[1] == "input") n.add_input((*it)[2]);
    else n.add_output((*it)[2]);
  }
  n.add_cell("lit0", CellKind::Const0, {{"O", "lit0"}});
  auto net = [](const std::string& s) { return s == "1'b0" ? std::string("lit0") : s; };

  const std::regex assign(R"(assign\s+(\w+)\s*=\s*1'b([01]);)");
  for (std::sregex_iterator it(v.begin(), v.end(), assign), end; it != end; ++it)
    n.add_cell("assign_" + (*it)[1].str(), (*it)[2] == "1" ? CellKind::Const1 : CellKind::Const0,
               {{"O", (*it)[1]}});

  const std::regex conn(R"(\.(\w+)\(([^()]*)\))");
  const std::regex lut(R"((LUT6_2|LUT6)\s*#\(\s*\.INIT\(64'h([0-9A-F]{16})\)\s*\)\s*(\w+)\s*\(([^;]*)\);)");
  for (std::sregex_iterator it(v.begin(), v.end(), lut), end; it != end; ++it) {
    std::map<std::string, std::string> pins;
    const std::string body = (*it)[4];
    for (std::sregex_iterator c(body.begin(), body.end(), conn); c != end; ++c) pins[(*c)[1]] = net((*c)[2]);
    n.add_cell((*it)[3], (*it)[1] == "LUT6" ? CellKind::Lut6 : CellKind::Lut6_2, pins,
               Init64(std::stoull((*it)[2], nullptr, 16)));
  }

  const std::regex carry(R"(CARRY4\s+(\w+)\s*\(([^;]*)\);)");
  for (std::sregex_iterator it(v.begin(), v.end(), carry), end; it != end; ++it) {
    std::map<std::string, std::string> raw;
    const std::string body = (*it)[2];
    for (std::sregex_iterator c(body.begin(), body.end(), conn); c != end; ++c) raw[(*c)[1]] = (*c)[2];
    std::map<std::string, std::string> pins;
    for (const char* bus : {"CO", "O", "DI", "S"}) {
      const auto bits = split_bus(raw.at(bus));
      for (int k = 0; k < 4; ++k) pins[bus + std::to_string(k)] = net(bits[3 - k]);
    }
    pins["CI"] = net(raw.at("CI") != "1'b0" ? raw.at("CI") : raw.at("CYINIT"));
    n.add_cell((*it)[1], CellKind::Carry4, pins);
  }
  return n;
}

}  // namespace

TEST(IdentifierTest, Rules) {
  EXPECT_TRUE(is_hdl_identifier("mult4"));
  EXPECT_TRUE(is_hdl_identifier("_x$1"));
  EXPECT_FALSE(is_hdl_identifier("4mult"));
  EXPECT_FALSE(is_hdl_identifier(""));
  EXPECT_FALSE(is_hdl_identifier("module"));
  EXPECT_FALSE(is_hdl_identifier("wire"));
  EXPECT_FALSE(is_hdl_identifier("a-b"));
}

TEST(EmitVerilogTest, InstanceCounts) {
  const auto v = emit_verilog(build_proposed_mult4(InitSource::Derived), "mult4");
  EXPECT_EQ(count_regex(v, R"(\n  LUT6 #\()"), 8u);
  EXPECT_EQ(count_regex(v, R"(\n  LUT6_2 #\()"), 3u);
  EXPECT_EQ(count_regex(v, R"(\n  CARRY4 )"), 2u);
  EXPECT_EQ(count(v, "module mult4 ("), 1u);
  EXPECT_EQ(count(v, "endmodule"), 1u);
  EXPECT_EQ(v.rfind("// Generated by fabricmul. Do not edit.\n", 0), 0u);
}

TEST(EmitVerilogTest, PublishedConstantsAppearVerbatim) {
  const auto v = emit_verilog(build_proposed_mult4(InitSource::Published), "mult4");
  EXPECT_NE(v.find(".INIT(64'h78887888A0A0A0A0)"), std::string::npos);
  EXPECT_NE(v.find(".INIT(64'hF8808080C8000000)"), std::string::npos);
}

TEST(EmitVerilogTest, CarryChainInputs) {
  const auto v = emit_verilog(build_proposed_mult4(InitSource::Derived), "mult4");
  EXPECT_NE(v.find(".CI(1'b0),\n    .CYINIT(C0)"), std::string::npos);
  EXPECT_NE(v.find(".CI(carry_a_co3),\n    .CYINIT(1'b0)"), std::string::npos);
  EXPECT_NE(v.find(".O({P6, P5, P4, P3})"), std::string::npos);
}

TEST(EmitVerilogTest, EmptyNetlist) {
  const auto v = emit_verilog(Netlist{}, "empty");
  EXPECT_NE(v.find("module empty"), std::string::npos);
  EXPECT_NE(v.find("endmodule"), std::string::npos);
  EXPECT_EQ(count(v, "LUT6"), 0u);
}

TEST(EmitVerilogTest, Deterministic) {
  const auto n = build_proposed_mult4(InitSource::Derived);
  const auto first = emit_verilog(n, "mult4");
  for (int i = 0; i < 5; ++i) EXPECT_EQ(emit_verilog(n, "mult4"), first);
  EXPECT_EQ(emit_verilog(load_json(save_json(n)), "mult4"), first);
}

TEST(EmitVerilogTest, MatchesGoldenFile) {
  const auto golden = read_text(std::string(FABRICMUL_GOLDEN_DIR) + "/mult4.v");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(emit_verilog(build_proposed_mult4(InitSource::Derived), "mult4"), golden);
}

TEST(EmitVerilogTest, ParsedBackModuleIsExact) {
  const auto parsed = parse_structural(emit_verilog(build_proposed_mult4(InitSource::Derived), "mult4"));
  ASSERT_TRUE(validate(parsed).ok()) << validate(parsed).to_string();
  const auto r = resources(parsed);
  EXPECT_EQ(r.lut_count(), 11u);
  EXPECT_EQ(r.carry4_count(), 2u);
  EXPECT_TRUE(verify_exhaustive(parsed, 4).all_pass());

  const auto array = parse_structural(emit_verilog(build_array_mult(3), "array3"));
  EXPECT_TRUE(verify_exhaustive(array, 3).all_pass());
}

TEST(EmitVerilogTest, ParsedBackMutationStillFails) {
  auto n = build_proposed_mult4(InitSource::Derived);
  n.set_init("lut6", n.find_cell("lut6")->init.with_bit_flipped(63));
  EXPECT_FALSE(verify_exhaustive(parse_structural(emit_verilog(n, "mult4")), 4).all_pass());
}

TEST(EmitVerilogTest, NamesAreSanitizedWithoutCollisions) {
  Netlist n;
  n.add_input("a.b");
  n.add_input("a_b");
  n.add_output("wire");
  n.add_cell("vcc", CellKind::Const1, {{"O", "VCC"}});
  n.add_cell("reg", CellKind::Lut6,
             {{"I0", "a.b"}, {"I1", "a_b"}, {"I2", "VCC"}, {"I3", "VCC"}, {"I4", "VCC"}, {"I5", "VCC"},
              {"O", "wire"}},
             Init64(0x8888888888888888ull));
  const auto v = emit_verilog(n, "sanitized");
  EXPECT_NE(v.find("input  wire a_b,"), std::string::npos);
  EXPECT_NE(v.find("input  wire a_b_1"), std::string::npos);
  EXPECT_NE(v.find("output wire wire_"), std::string::npos);
  EXPECT_NE(v.find(") reg_ ("), std::string::npos);
  EXPECT_EQ(v.find("a.b"), std::string::npos);
  const auto parsed = parse_structural(v);
  EXPECT_TRUE(validate(parsed).ok());
}

TEST(EmitVerilogTest, Errors) {
  EXPECT_THROW(emit_verilog(Netlist{}, "1bad"), IdentifierError);
  EXPECT_THROW(emit_verilog(Netlist{}, "module"), IdentifierError);
  Netlist broken;
  broken.add_output("y");
  EXPECT_THROW(emit_verilog(broken, "broken"), ValidationError);
}

TEST(EmitTestbenchTest, SweepsEveryVector) {
  const auto tb = emit_testbench(build_proposed_mult4(InitSource::Derived), "mult4", 4);
  EXPECT_NE(tb.find("module mult4_tb;"), std::string::npos);
  EXPECT_NE(tb.find("for (i = 0; i < 256; i = i + 1)"), std::string::npos);
  EXPECT_NE(tb.find("expected = a * b;"), std::string::npos);
  EXPECT_NE(tb.find("PASS: 256/256"), std::string::npos);
  EXPECT_NE(tb.find("mult4 dut ("), std::string::npos);
  EXPECT_NE(tb.find(".P7(p[7])"), std::string::npos);
  EXPECT_NE(tb.find("endmodule"), std::string::npos);
  EXPECT_NE(emit_testbench(build_array_mult(2), "m2", 2).find("PASS: 16/16"), std::string::npos);
}

TEST(EmitTestbenchTest, PortErrors) {
  EXPECT_THROW(emit_testbench(build_proposed_mult4(InitSource::Derived), "mult4", 3), PortConventionError);
  EXPECT_THROW(emit_testbench(Netlist{}, "x", 4), PortConventionError);
  EXPECT_THROW(emit_testbench(build_array_mult(2), "module", 2), IdentifierError);
}
