#pragma once

// Boolean expressions over named signals, truth tables, and LUT INIT
// derivation.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fabricmul {

/// 64-bit LUT truth-table constant. Bit k holds the output for input index
/// k = I5*32 + I4*16 + I3*8 + I2*4 + I1*2 + I0.
class Init64 {
 public:
  constexpr Init64() = default;
  constexpr explicit Init64(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const noexcept { return value_; }
  constexpr bool bit(unsigned k) const noexcept { return ((value_ >> (k & 63u)) & 1u) != 0; }
  constexpr std::uint32_t low_half() const noexcept { return static_cast<std::uint32_t>(value_); }
  constexpr std::uint32_t high_half() const noexcept { return static_cast<std::uint32_t>(value_ >> 32); }

  constexpr Init64 with_bit_flipped(unsigned k) const noexcept {
    return Init64(value_ ^ (std::uint64_t{1} << (k & 63u)));
  }

  /// "0x" followed by 16 uppercase hex digits.
  std::string to_string() const;

  /// Accepts "0x..." / "0X..." / "64'h..." or bare hex; underscores are ignored.
  static Init64 parse(std::string_view text);

  friend constexpr bool operator==(Init64, Init64) = default;

 private:
  std::uint64_t value_ = 0;
};

/// Immutable Boolean expression tree. Copies share structure.
class BoolExpr {
 public:
  enum class Kind { Variable, Constant, Not, And, Or, Xor };

  static BoolExpr variable(std::string name);
  static BoolExpr constant(bool value);
  static BoolExpr negate(BoolExpr operand);
  static BoolExpr conjunction(std::vector<BoolExpr> operands);
  static BoolExpr disjunction(std::vector<BoolExpr> operands);
  static BoolExpr exclusive_or(std::vector<BoolExpr> operands);

  /// Grammar: `&` AND, `|` OR, `^` XOR, `!` NOT, `0`/`1`, identifiers
  /// `[A-Za-z][A-Za-z0-9]*`, parentheses. Precedence ! > & > ^ > |.
  static BoolExpr parse(std::string_view text);

  Kind kind() const noexcept;
  const std::vector<BoolExpr>& operands() const noexcept;
  /// Variable name; empty for other kinds.
  const std::string& name() const noexcept;
  /// Constant value; false for other kinds.
  bool value() const noexcept;

  std::set<std::string> variables() const;
  std::string to_string() const;

 private:
  struct Node;
  explicit BoolExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static BoolExpr make(Kind kind, std::vector<BoolExpr> operands);

  std::shared_ptr<const Node> node_;
};

BoolExpr operator!(const BoolExpr& e);
BoolExpr operator&(const BoolExpr& a, const BoolExpr& b);
BoolExpr operator|(const BoolExpr& a, const BoolExpr& b);
BoolExpr operator^(const BoolExpr& a, const BoolExpr& b);

/// Replaces variables named in `definitions` by their definitions, repeatedly,
/// until no defined name remains. Throws Error on a cyclic definition.
BoolExpr expand(const BoolExpr& expr, const std::map<std::string, BoolExpr>& definitions);

using Assignment = std::map<std::string, bool, std::less<>>;

/// Throws UnboundVariableError naming the first missing signal.
bool eval_expr(const BoolExpr& expr, const Assignment& assignment);

/// Output vector over an ordered variable list; vars[0] is the least
/// significant index bit.
class TruthTable {
 public:
  static constexpr std::size_t kMaxVars = 8;

  TruthTable(std::vector<std::string> vars, std::vector<bool> bits);

  const std::vector<std::string>& vars() const noexcept { return vars_; }
  std::size_t num_vars() const noexcept { return vars_.size(); }
  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t index) const { return bits_.at(index); }
  const std::vector<bool>& bits() const noexcept { return bits_; }

  /// Packs the vector into an integer (bit k = entry k); requires <= 6 vars.
  std::uint64_t to_uint64() const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  std::vector<std::string> vars_;
  std::vector<bool> bits_;
};

/// Throws CoverageError when `vars` misses a variable of `expr`, ArityError
/// when more than TruthTable::kMaxVars are requested.
TruthTable to_truth_table(const BoolExpr& expr, std::vector<std::string> vars);

/// One LUT input: either a named signal or a tie to logic 1.
class Pin {
 public:
  static Pin signal(std::string name) { return Pin(std::move(name)); }
  static Pin tied_high() { return Pin(std::string()); }
  /// "1" means tied high, anything else is a signal name.
  static Pin from_text(std::string_view text);

  bool is_tied_high() const noexcept { return name_.empty(); }
  const std::string& signal_name() const noexcept { return name_; }
  std::string to_string() const { return is_tied_high() ? "1" : name_; }

  friend bool operator==(const Pin&, const Pin&) = default;

 private:
  explicit Pin(std::string name) : name_(std::move(name)) {}
  std::string name_;
};

enum class OutputTap { O6, O5 };

const char* to_string(OutputTap tap) noexcept;

struct PinBinding {
  std::array<Pin, 6> pins{Pin::tied_high(), Pin::tied_high(), Pin::tied_high(),
                          Pin::tied_high(), Pin::tied_high(), Pin::tied_high()};
  OutputTap tap = OutputTap::O6;

  /// Builds from six entries, "1" meaning tied high.
  static PinBinding from_list(const std::vector<std::string>& entries, OutputTap tap = OutputTap::O6);

  /// Pin index bound to `signal`, or -1.
  int index_of(std::string_view signal) const noexcept;

  /// Throws DuplicatePinError if a signal is bound to two pins.
  void check() const;

  friend bool operator==(const PinBinding&, const PinBinding&) = default;
};

/// Truth-table constant realizing `expr` under `binding`. Tied-high pins are
/// forced to 1 during enumeration, so don't-care rows copy the tied-high row.
/// An O5 tap fills the low 32 bits and mirrors them into the high half.
Init64 derive_init(const BoolExpr& expr, const PinBinding& binding);

/// Dual-output constant: low half from the O5 function, high half from the
/// O6 function. Requires I5 tied high so that O6 reads only the high half.
Init64 derive_dual_init(const BoolExpr& o6_expr, const BoolExpr& o5_expr,
                        const std::array<Pin, 6>& pins);

/// True iff both expressions agree on every assignment of their combined
/// variables. Throws ArityError beyond 16 variables.
bool equivalent(const BoolExpr& a, const BoolExpr& b);

}  // namespace fabricmul
