#include <cctype>

#include <fmt/format.h>

#include "fabricmul/error.hpp"
#include "fabricmul/truthtable.hpp"

namespace fabricmul {
namespace {

// or   := xor ('|' xor)*
// xor  := and ('^' and)*
// and  := unary ('&' unary)*
// unary:= '!' unary | atom
// atom := '0' | '1' | ident | '(' or ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  BoolExpr parse() {
    BoolExpr e = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail(fmt::format("unexpected '{}'", text_[pos_]));
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(fmt::format("{} at offset {} in \"{}\"", what, pos_, text_));
  }

  BoolExpr parse_or() {
    std::vector<BoolExpr> ops{parse_xor()};
    while (accept('|')) ops.push_back(parse_xor());
    return BoolExpr::disjunction(std::move(ops));
  }

  BoolExpr parse_xor() {
    std::vector<BoolExpr> ops{parse_and()};
    while (accept('^')) ops.push_back(parse_and());
    return BoolExpr::exclusive_or(std::move(ops));
  }

  BoolExpr parse_and() {
    std::vector<BoolExpr> ops{parse_unary()};
    while (accept('&')) ops.push_back(parse_unary());
    return BoolExpr::conjunction(std::move(ops));
  }

  BoolExpr parse_unary() {
    if (accept('!')) return BoolExpr::negate(parse_unary());
    return parse_atom();
  }

  BoolExpr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      BoolExpr inner = parse_or();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      return BoolExpr::constant(c == '1');
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return BoolExpr::variable(std::string(text_.substr(start, pos_ - start)));
    }
    fail(fmt::format("unexpected '{}'", c));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

BoolExpr BoolExpr::parse(std::string_view text) { return Parser(text).parse(); }

}  // namespace fabricmul
