#include "fabricmul/truthtable.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "fabricmul/error.hpp"

namespace fabricmul {

// ---------------------------------------------------------------------------
// Init64

std::string Init64::to_string() const { return fmt::format("0x{:016X}", value_); }

Init64 Init64::parse(std::string_view text) {
  std::string_view digits = text;
  if (digits.starts_with("0x") || digits.starts_with("0X")) {
    digits.remove_prefix(2);
  } else if (digits.starts_with("64'h") || digits.starts_with("64'H")) {
    digits.remove_prefix(4);
  }
  std::uint64_t value = 0;
  int count = 0;
  for (char c : digits) {
    if (c == '_') continue;
    int nibble;
    if (c >= '0' && c <= '9') {
      nibble = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      nibble = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      nibble = c - 'A' + 10;
    } else {
      throw ParseError(fmt::format("invalid hex digit '{}' in INIT \"{}\"", c, text));
    }
    if (++count > 16) throw ParseError(fmt::format("INIT \"{}\" exceeds 64 bits", text));
    value = (value << 4) | static_cast<std::uint64_t>(nibble);
  }
  if (count == 0) throw ParseError(fmt::format("empty INIT \"{}\"", text));
  return Init64(value);
}

// ---------------------------------------------------------------------------
// BoolExpr

struct BoolExpr::Node {
  Kind kind;
  std::vector<BoolExpr> operands;
  std::string name;
  bool value = false;
};

BoolExpr BoolExpr::make(Kind kind, std::vector<BoolExpr> operands) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->operands = std::move(operands);
  return BoolExpr(std::move(node));
}

BoolExpr BoolExpr::variable(std::string name) {
  if (name.empty()) throw Error("variable name must not be empty");
  auto node = std::make_shared<Node>();
  node->kind = Kind::Variable;
  node->name = std::move(name);
  return BoolExpr(std::move(node));
}

BoolExpr BoolExpr::constant(bool value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Constant;
  node->value = value;
  return BoolExpr(std::move(node));
}

BoolExpr BoolExpr::negate(BoolExpr operand) { return make(Kind::Not, {std::move(operand)}); }

BoolExpr BoolExpr::conjunction(std::vector<BoolExpr> operands) {
  if (operands.empty()) return constant(true);
  if (operands.size() == 1) return operands.front();
  return make(Kind::And, std::move(operands));
}

BoolExpr BoolExpr::disjunction(std::vector<BoolExpr> operands) {
  if (operands.empty()) return constant(false);
  if (operands.size() == 1) return operands.front();
  return make(Kind::Or, std::move(operands));
}

BoolExpr BoolExpr::exclusive_or(std::vector<BoolExpr> operands) {
  if (operands.empty()) return constant(false);
  if (operands.size() == 1) return operands.front();
  return make(Kind::Xor, std::move(operands));
}

BoolExpr::Kind BoolExpr::kind() const noexcept { return node_->kind; }
const std::vector<BoolExpr>& BoolExpr::operands() const noexcept { return node_->operands; }
const std::string& BoolExpr::name() const noexcept { return node_->name; }
bool BoolExpr::value() const noexcept { return node_->value; }

namespace {

void collect_variables(const BoolExpr& e, std::set<std::string>& out) {
  if (e.kind() == BoolExpr::Kind::Variable) {
    out.insert(e.name());
    return;
  }
  for (const auto& op : e.operands()) collect_variables(op, out);
}

int precedence(BoolExpr::Kind kind) {
  switch (kind) {
    case BoolExpr::Kind::Or: return 1;
    case BoolExpr::Kind::Xor: return 2;
    case BoolExpr::Kind::And: return 3;
    case BoolExpr::Kind::Not: return 4;
    default: return 5;
  }
}

void print(const BoolExpr& e, std::string& out) {
  using Kind = BoolExpr::Kind;
  switch (e.kind()) {
    case Kind::Variable:
      out += e.name();
      return;
    case Kind::Constant:
      out += e.value() ? '1' : '0';
      return;
    case Kind::Not: {
      const auto& op = e.operands().front();
      out += '!';
      bool parens = precedence(op.kind()) < precedence(Kind::Not);
      if (parens) out += '(';
      print(op, out);
      if (parens) out += ')';
      return;
    }
    case Kind::And:
    case Kind::Or:
    case Kind::Xor: {
      const char* sep = e.kind() == Kind::And ? " & " : e.kind() == Kind::Or ? " | " : " ^ ";
      bool first = true;
      for (const auto& op : e.operands()) {
        if (!first) out += sep;
        first = false;
        bool parens = precedence(op.kind()) < precedence(e.kind());
        if (parens) out += '(';
        print(op, out);
        if (parens) out += ')';
      }
      return;
    }
  }
}

bool eval_node(const BoolExpr& e, const Assignment& assignment) {
  using Kind = BoolExpr::Kind;
  switch (e.kind()) {
    case Kind::Variable: {
      auto it = assignment.find(e.name());
      if (it == assignment.end()) throw UnboundVariableError(e.name());
      return it->second;
    }
    case Kind::Constant:
      return e.value();
    case Kind::Not:
      return !eval_node(e.operands().front(), assignment);
    case Kind::And:
      for (const auto& op : e.operands())
        if (!eval_node(op, assignment)) return false;
      return true;
    case Kind::Or:
      for (const auto& op : e.operands())
        if (eval_node(op, assignment)) return true;
      return false;
    case Kind::Xor: {
      bool acc = false;
      for (const auto& op : e.operands()) acc ^= eval_node(op, assignment);
      return acc;
    }
  }
  return false;
}

BoolExpr expand_node(const BoolExpr& e, const std::map<std::string, BoolExpr>& defs,
                     std::vector<std::string>& stack) {
  using Kind = BoolExpr::Kind;
  switch (e.kind()) {
    case Kind::Variable: {
      auto it = defs.find(e.name());
      if (it == defs.end()) return e;
      if (std::find(stack.begin(), stack.end(), e.name()) != stack.end())
        throw Error(fmt::format("cyclic definition of '{}'", e.name()));
      stack.push_back(e.name());
      BoolExpr out = expand_node(it->second, defs, stack);
      stack.pop_back();
      return out;
    }
    case Kind::Constant:
      return e;
    case Kind::Not:
      return BoolExpr::negate(expand_node(e.operands().front(), defs, stack));
    case Kind::And:
    case Kind::Or:
    case Kind::Xor: {
      std::vector<BoolExpr> ops;
      ops.reserve(e.operands().size());
      for (const auto& op : e.operands()) ops.push_back(expand_node(op, defs, stack));
      if (e.kind() == Kind::And) return BoolExpr::conjunction(std::move(ops));
      if (e.kind() == Kind::Or) return BoolExpr::disjunction(std::move(ops));
      return BoolExpr::exclusive_or(std::move(ops));
    }
  }
  return e;
}

}  // namespace

std::set<std::string> BoolExpr::variables() const {
  std::set<std::string> out;
  collect_variables(*this, out);
  return out;
}

std::string BoolExpr::to_string() const {
  std::string out;
  print(*this, out);
  return out;
}

BoolExpr operator!(const BoolExpr& e) { return BoolExpr::negate(e); }
BoolExpr operator&(const BoolExpr& a, const BoolExpr& b) { return BoolExpr::conjunction({a, b}); }
BoolExpr operator|(const BoolExpr& a, const BoolExpr& b) { return BoolExpr::disjunction({a, b}); }
BoolExpr operator^(const BoolExpr& a, const BoolExpr& b) { return BoolExpr::exclusive_or({a, b}); }

BoolExpr expand(const BoolExpr& expr, const std::map<std::string, BoolExpr>& definitions) {
  std::vector<std::string> stack;
  return expand_node(expr, definitions, stack);
}

bool eval_expr(const BoolExpr& expr, const Assignment& assignment) {
  return eval_node(expr, assignment);
}

// ---------------------------------------------------------------------------
// TruthTable

TruthTable::TruthTable(std::vector<std::string> vars, std::vector<bool> bits)
    : vars_(std::move(vars)), bits_(std::move(bits)) {
  if (vars_.size() > kMaxVars)
    throw ArityError(fmt::format("truth table over {} variables exceeds the limit of {}",
                                 vars_.size(), kMaxVars));
  if (bits_.size() != (std::size_t{1} << vars_.size()))
    throw Error(fmt::format("truth table over {} variables needs {} entries, got {}", vars_.size(),
                            std::size_t{1} << vars_.size(), bits_.size()));
}

std::uint64_t TruthTable::to_uint64() const {
  if (vars_.size() > 6) throw ArityError("truth table too wide to pack into 64 bits");
  std::uint64_t out = 0;
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k]) out |= std::uint64_t{1} << k;
  return out;
}

TruthTable to_truth_table(const BoolExpr& expr, std::vector<std::string> vars) {
  if (vars.size() > TruthTable::kMaxVars)
    throw ArityError(fmt::format("{} variables requested, at most {} supported", vars.size(),
                                 TruthTable::kMaxVars));
  std::set<std::string> seen;
  for (const auto& v : vars)
    if (!seen.insert(v).second) throw CoverageError(fmt::format("variable '{}' listed twice", v));
  for (const auto& v : expr.variables())
    if (!seen.contains(v)) throw CoverageError(fmt::format("variable '{}' is not covered", v));

  const std::size_t rows = std::size_t{1} << vars.size();
  std::vector<bool> bits(rows);
  Assignment assignment;
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t i = 0; i < vars.size(); ++i) assignment[vars[i]] = ((k >> i) & 1u) != 0;
    bits[k] = eval_expr(expr, assignment);
  }
  return TruthTable(std::move(vars), std::move(bits));
}

// ---------------------------------------------------------------------------
// Pin binding and INIT derivation

Pin Pin::from_text(std::string_view text) {
  if (text == "1") return tied_high();
  if (text.empty()) throw ParseError("empty pin entry");
  return signal(std::string(text));
}

const char* to_string(OutputTap tap) noexcept { return tap == OutputTap::O5 ? "O5" : "O6"; }

PinBinding PinBinding::from_list(const std::vector<std::string>& entries, OutputTap tap) {
  if (entries.size() != 6)
    throw ArityError(fmt::format("pin binding needs 6 entries, got {}", entries.size()));
  PinBinding binding;
  for (std::size_t i = 0; i < 6; ++i) binding.pins[i] = Pin::from_text(entries[i]);
  binding.tap = tap;
  binding.check();
  return binding;
}

int PinBinding::index_of(std::string_view signal) const noexcept {
  for (std::size_t i = 0; i < pins.size(); ++i)
    if (!pins[i].is_tied_high() && pins[i].signal_name() == signal) return static_cast<int>(i);
  return -1;
}

void PinBinding::check() const {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < pins.size(); ++i) {
    if (pins[i].is_tied_high()) continue;
    if (!seen.insert(pins[i].signal_name()).second)
      throw DuplicatePinError(
          fmt::format("signal '{}' is bound to more than one pin (again at I{})",
                      pins[i].signal_name(), i));
  }
}

Init64 derive_init(const BoolExpr& expr, const PinBinding& binding) {
  binding.check();
  const unsigned pin_count = binding.tap == OutputTap::O5 ? 5 : 6;
  for (const auto& v : expr.variables()) {
    int idx = binding.index_of(v);
    if (idx < 0) throw UnboundVariableError(v);
    if (static_cast<unsigned>(idx) >= pin_count)
      throw Error(fmt::format("signal '{}' is on I5, which the O5 output cannot read", v));
  }

  unsigned tied_mask = 0;
  for (unsigned i = 0; i < pin_count; ++i)
    if (binding.pins[i].is_tied_high()) tied_mask |= 1u << i;

  const unsigned rows = 1u << pin_count;
  std::uint64_t value = 0;
  Assignment assignment;
  for (unsigned k = 0; k < rows; ++k) {
    const unsigned effective = k | tied_mask;
    for (unsigned i = 0; i < pin_count; ++i)
      if (!binding.pins[i].is_tied_high())
        assignment[binding.pins[i].signal_name()] = ((effective >> i) & 1u) != 0;
    if (eval_expr(expr, assignment)) value |= std::uint64_t{1} << k;
  }
  if (binding.tap == OutputTap::O5) value |= value << 32;
  return Init64(value);
}

Init64 derive_dual_init(const BoolExpr& o6_expr, const BoolExpr& o5_expr,
                        const std::array<Pin, 6>& pins) {
  if (!pins[5].is_tied_high())
    throw Error("a dual-output LUT needs I5 tied high so that O6 reads only the upper half");
  const Init64 o6 = derive_init(o6_expr, PinBinding{pins, OutputTap::O6});
  const Init64 o5 = derive_init(o5_expr, PinBinding{pins, OutputTap::O5});
  return Init64((o6.value() & 0xFFFFFFFF00000000ull) | o5.low_half());
}

bool equivalent(const BoolExpr& a, const BoolExpr& b) {
  std::set<std::string> vars = a.variables();
  vars.merge(b.variables());
  constexpr std::size_t kMaxEquivalenceVars = 16;
  if (vars.size() > kMaxEquivalenceVars)
    throw ArityError(fmt::format("equivalence over {} variables exceeds the limit of {}",
                                 vars.size(), kMaxEquivalenceVars));
  const std::vector<std::string> order(vars.begin(), vars.end());
  const std::size_t rows = std::size_t{1} << order.size();
  Assignment assignment;
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t i = 0; i < order.size(); ++i) assignment[order[i]] = ((k >> i) & 1u) != 0;
    if (eval_expr(a, assignment) != eval_expr(b, assignment)) return false;
  }
  return true;
}

}  // namespace fabricmul
