#pragma once

// Test-only helpers: random expression generation and plain-integer
// reference functions that do not go through the library's evaluators.

#include <random>
#include <string>
#include <vector>

#include "fabricmul/truthtable.hpp"

namespace fabricmul::testing {

inline BoolExpr random_expr(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  const int choice = pick(rng);
  if (choice == 0 || vars.empty()) {
    if (vars.empty() || std::uniform_int_distribution<int>(0, 7)(rng) == 0)
      return BoolExpr::constant(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
  }
  if (choice <= 1) {
    const auto i = std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng);
    return BoolExpr::variable(vars[i]);
  }
  if (choice == 2) return !random_expr(rng, vars, depth - 1);
  auto a = random_expr(rng, vars, depth - 1);
  auto b = random_expr(rng, vars, depth - 1);
  if (choice == 3) return a & b;
  if (choice == 4) return a | b;
  return a ^ b;
}

/// Bit `name` of an assignment packed as A0..A3 in bits 0..3, B0..B3 in 4..7.
inline int operand_bit(unsigned a, unsigned b, const std::string& name) {
  const int idx = name[1] - '0';
  return static_cast<int>(((name[0] == 'A' ? a : b) >> idx) & 1u);
}

}  // namespace fabricmul::testing
