#include "fabricmul/truthtable.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "fabricmul/error.hpp"
#include "fabricmul/primitives.hpp"
#include "test_support.hpp"

using namespace fabricmul;

namespace {

BoolExpr parse(const char* text) { return BoolExpr::parse(text); }

// Carry of the S1 column before the dominance reduction.
const char* kC1Full =
    "(A1&B2 & A2&B1) | (A1&B2 & (A1&B1 & A0&B2 & A2&B0)) | (A2&B1 & (A1&B1 & A0&B2 & A2&B0))";

}  // namespace

TEST(Init64Test, RendersSixteenUppercaseDigits) {
  EXPECT_EQ(Init64(0x78887888A0A0A0A0ull).to_string(), "0x78887888A0A0A0A0");
  EXPECT_EQ(Init64(0).to_string(), "0x0000000000000000");
  EXPECT_EQ(Init64(0xabcull).to_string(), "0x0000000000000ABC");
}

TEST(Init64Test, ParsesCommonSpellings) {
  EXPECT_EQ(Init64::parse("0x7F807F8080008000").value(), 0x7F807F8080008000ull);
  EXPECT_EQ(Init64::parse("64'h7f807f80_80008000").value(), 0x7F807F8080008000ull);
  EXPECT_EQ(Init64::parse("ff").value(), 0xFFull);
  EXPECT_THROW(Init64::parse("0x"), ParseError);
  EXPECT_THROW(Init64::parse("0x12G4"), ParseError);
  EXPECT_THROW(Init64::parse("0x11112222333344445"), ParseError);
}

TEST(BoolExprTest, ParserPrecedence) {
  // ! > & > ^ > |
  const auto e = parse("a | b ^ c & !d");
  EXPECT_EQ(e.kind(), BoolExpr::Kind::Or);
  EXPECT_EQ(e.operands()[1].kind(), BoolExpr::Kind::Xor);
  EXPECT_EQ(e.operands()[1].operands()[1].kind(), BoolExpr::Kind::And);
  EXPECT_EQ(e.to_string(), "a | b ^ c & !d");
  EXPECT_EQ(parse("(a | b) & c").to_string(), "(a | b) & c");
  EXPECT_EQ(parse("  !( x1 ^0 )").to_string(), "!(x1 ^ 0)");
}

TEST(BoolExprTest, ParserRejectsMalformedText) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("a &"), ParseError);
  EXPECT_THROW(parse("(a | b"), ParseError);
  EXPECT_THROW(parse("a b"), ParseError);
  EXPECT_THROW(parse("_a"), ParseError);
  EXPECT_THROW(parse("a + b"), ParseError);
}

TEST(BoolExprTest, PrintedFormParsesBackToAnEquivalentExpression) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> vars{"a", "b", "c", "d"};
  for (int i = 0; i < 200; ++i) {
    const auto e = fabricmul::testing::random_expr(rng, vars, 5);
    EXPECT_TRUE(equivalent(e, BoolExpr::parse(e.to_string()))) << e.to_string();
  }
}

TEST(EvalExprTest, Examples) {
  EXPECT_FALSE(eval_expr(parse("x ^ x"), {{"x", true}}));
  EXPECT_TRUE(eval_expr(parse("A0 & B0"), {{"A0", true}, {"B0", true}}));
  // A1B2 and A2B1 are both 1, so the first product term fires.
  const Assignment s{{"A1", true}, {"B2", true}, {"A2", true}, {"B1", true}, {"A0", false}, {"B0", false}};
  EXPECT_TRUE(eval_expr(parse(kC1Full), s));
}

TEST(EvalExprTest, UnboundVariableIsNamed) {
  try {
    eval_expr(parse("A0 & S1"), {{"A0", true}});
    FAIL() << "expected UnboundVariableError";
  } catch (const UnboundVariableError& e) {
    EXPECT_EQ(e.name(), "S1");
  }
}

TEST(ExpandTest, SubstitutesNestedDefinitions) {
  std::map<std::string, BoolExpr> defs{{"S2", parse("x ^ y")}, {"C3", parse("S2 & z")}};
  const auto e = expand(parse("C3 | w"), defs);
  EXPECT_EQ(e.variables(), (std::set<std::string>{"w", "x", "y", "z"}));
  EXPECT_TRUE(equivalent(e, parse("(x ^ y) & z | w")));
  std::map<std::string, BoolExpr> cyclic{{"p", parse("q")}, {"q", parse("p")}};
  EXPECT_THROW(expand(parse("p"), cyclic), Error);
}

TEST(TruthTableTest, Examples) {
  EXPECT_EQ(to_truth_table(parse("A0 & B0"), {"A0", "B0"}).to_uint64(), 0x8u);
  const auto zero = to_truth_table(BoolExpr::constant(false), {"x"});
  EXPECT_EQ(zero.size(), 2u);
  EXPECT_EQ(zero.to_uint64(), 0u);
  EXPECT_EQ(to_truth_table(parse("A1&B0 ^ A0&B1"), {"A0", "B1", "B0", "A1"}).to_uint64(), 0x7888u);
}

TEST(TruthTableTest, P1MatchesBruteForce) {
  // Independent enumeration with plain integer arithmetic.
  std::uint64_t expected = 0;
  for (unsigned k = 0; k < 16; ++k) {
    const unsigned a0 = k & 1, b1 = (k >> 1) & 1, b0 = (k >> 2) & 1, a1 = (k >> 3) & 1;
    if (((a1 & b0) ^ (a0 & b1)) != 0) expected |= 1u << k;
  }
  EXPECT_EQ(expected, 0x7888u);
  EXPECT_EQ(to_truth_table(parse("A1&B0 ^ A0&B1"), {"A0", "B1", "B0", "A1"}).to_uint64(), expected);
}

TEST(TruthTableTest, Errors) {
  EXPECT_THROW(to_truth_table(parse("a & b"), {"a"}), CoverageError);
  EXPECT_THROW(to_truth_table(parse("a"), {"a", "a"}), CoverageError);
  std::vector<std::string> nine{"a", "b", "c", "d", "e", "f", "g", "h", "i"};
  EXPECT_THROW(to_truth_table(parse("a"), nine), ArityError);
}

TEST(TruthTableTest, SizeIsAlwaysTwoToTheN) {
  std::vector<std::string> vars;
  for (int n = 0; n <= 8; ++n) {
    const auto tt = to_truth_table(BoolExpr::constant(false), vars);
    EXPECT_EQ(tt.size(), std::size_t{1} << n);
    EXPECT_TRUE(std::none_of(tt.bits().begin(), tt.bits().end(), [](bool b) { return b; }));
    vars.push_back(fmt::format("v{}", n));
  }
}

TEST(DeriveInitTest, Examples) {
  const auto row1 = PinBinding::from_list({"A0", "B1", "B0", "A1", "1", "1"}, OutputTap::O5);
  EXPECT_EQ(derive_init(parse("A0 & B0"), row1).low_half(), 0xA0A0A0A0u);

  const auto row7 = PinBinding::from_list({"B0", "S1", "A3", "S3", "1", "1"}, OutputTap::O5);
  EXPECT_EQ(derive_init(parse("S3 & S1 & A3 & B0"), row7).low_half(), 0x80008000u);

  const auto any = PinBinding::from_list({"a", "b", "1", "c", "d", "e"});
  EXPECT_EQ(derive_init(BoolExpr::constant(true), any).value(), 0xFFFFFFFFFFFFFFFFull);
}

TEST(DeriveInitTest, O5HalfIsMirrored) {
  const auto binding = PinBinding::from_list({"a", "b", "c", "d", "e", "f"}, OutputTap::O5);
  const auto init = derive_init(parse("a ^ e"), binding);
  EXPECT_EQ(init.low_half(), init.high_half());
  EXPECT_THROW(derive_init(parse("a ^ f"), binding), Error);
}

TEST(DeriveInitTest, DualOutputCombinesHalves) {
  const std::array<Pin, 6> pins = PinBinding::from_list({"A0", "B1", "B0", "A1", "1", "1"}).pins;
  EXPECT_EQ(derive_dual_init(parse("A1&B0 ^ A0&B1"), parse("A0&B0"), pins).value(),
            0x78887888A0A0A0A0ull);
  const std::array<Pin, 6> untied = PinBinding::from_list({"A0", "B1", "B0", "A1", "1", "x"}).pins;
  EXPECT_THROW(derive_dual_init(parse("A0"), parse("B0"), untied), Error);
}

TEST(DeriveInitTest, Errors) {
  EXPECT_THROW(derive_init(parse("a & z"), PinBinding::from_list({"a", "b", "1", "1", "1", "1"})),
               UnboundVariableError);
  EXPECT_THROW(PinBinding::from_list({"a", "b", "a", "1", "1", "1"}), DuplicatePinError);
  PinBinding dup;
  dup.pins[0] = Pin::signal("a");
  dup.pins[3] = Pin::signal("a");
  EXPECT_THROW(derive_init(parse("a"), dup), DuplicatePinError);
  EXPECT_THROW(PinBinding::from_list({"a", "b"}), ArityError);
}

TEST(DeriveInitTest, TiedPinsCopyTheTiedHighRow) {
  // With I4 and I5 tied, every quarter of the constant repeats the I4=I5=1 quarter.
  const auto binding = PinBinding::from_list({"a", "b", "c", "d", "1", "1"});
  const auto init = derive_init(parse("a & !c | d"), binding).value();
  const std::uint64_t quarter = init >> 48;
  EXPECT_EQ(init, quarter | quarter << 16 | quarter << 32 | quarter << 48);
}

// Round trip through the primitive model: a LUT6 loaded with the derived
// constant reproduces the expression on every pattern that honours the ties.
TEST(DeriveInitProperty, Lut6RoundTrip) {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> names{"p", "q", "r", "s", "t", "u"};
  for (int trial = 0; trial < 300; ++trial) {
    PinBinding binding;
    std::vector<std::string> bound;
    std::vector<std::string> shuffled = names;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t i = 0; i < 6; ++i) {
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) continue;
      binding.pins[i] = Pin::signal(shuffled[i]);
      bound.push_back(shuffled[i]);
    }
    const auto expr = fabricmul::testing::random_expr(rng, bound, 4);
    const Init64 init = derive_init(expr, binding);
    for (unsigned k = 0; k < 64; ++k) {
      Assignment s;
      bool consistent = true;
      for (unsigned i = 0; i < 6; ++i) {
        const bool bit = ((k >> i) & 1u) != 0;
        if (binding.pins[i].is_tied_high()) {
          consistent &= bit;
        } else {
          s[binding.pins[i].signal_name()] = bit;
        }
      }
      if (!consistent) continue;
      ASSERT_EQ(lut6_eval(init, LutInputs(k)), eval_expr(expr, s)) << expr.to_string() << " k=" << k;
    }
  }
}

TEST(DeriveInitProperty, IndependentOfTreeShape) {
  std::mt19937_64 rng(99);
  const std::vector<std::string> vars{"a", "b", "c", "d", "e", "f"};
  const auto binding = PinBinding::from_list({"c", "a", "f", "b", "e", "d"});
  for (int trial = 0; trial < 100; ++trial) {
    const auto e = fabricmul::testing::random_expr(rng, vars, 4);
    // Same function, different tree: double negation and a reassociated XOR with 0.
    const auto rebuilt = !!(BoolExpr::constant(false) ^ e);
    EXPECT_EQ(derive_init(e, binding), derive_init(rebuilt, binding));
  }
  EXPECT_EQ(derive_init(parse("(a ^ b) ^ c"), binding), derive_init(parse("c ^ (b ^ a)"), binding));
  EXPECT_EQ(derive_init(parse("!(a & b)"), binding), derive_init(parse("!a | !b"), binding));
}

TEST(EquivalentTest, Examples) {
  EXPECT_TRUE(equivalent(parse(kC1Full), parse("A1&B2 & A2&B1")));
  EXPECT_FALSE(equivalent(parse("x"), parse("!x")));
  EXPECT_TRUE(equivalent(parse("x ^ y"), parse("y ^ x")));
}

TEST(EquivalentTest, DominanceHoldsOnAllSixtyFourAssignments) {
  const auto full = parse(kC1Full);
  const auto simplified = parse("A1&B2 & A2&B1");
  int agree = 0;
  for (unsigned k = 0; k < 64; ++k) {
    const unsigned a0 = k & 1, a1 = (k >> 1) & 1, a2 = (k >> 2) & 1;
    const unsigned b0 = (k >> 3) & 1, b1 = (k >> 4) & 1, b2 = (k >> 5) & 1;
    const Assignment s{{"A0", a0 != 0}, {"A1", a1 != 0}, {"A2", a2 != 0},
                       {"B0", b0 != 0}, {"B1", b1 != 0}, {"B2", b2 != 0}};
    agree += eval_expr(full, s) == eval_expr(simplified, s);
  }
  EXPECT_EQ(agree, 64);
}

TEST(EquivalentTest, ArityLimit) {
  std::string wide = "v0";
  for (int i = 1; i < 17; ++i) wide += fmt::format(" & v{}", i);
  EXPECT_THROW(equivalent(parse(wide.c_str()), parse("v0")), ArityError);
}
