#pragma once

// Combinational models of the 7-series LUT6, LUT6_2 and CARRY4 primitives.

#include <array>
#include <bitset>

#include "fabricmul/truthtable.hpp"

namespace fabricmul {

/// Input pins I0..I5; bit i is Ii.
using LutInputs = std::bitset<6>;

struct Lut6_2Outputs {
  bool o6 = false;
  bool o5 = false;
  friend bool operator==(const Lut6_2Outputs&, const Lut6_2Outputs&) = default;
};

/// Bit i is stage i.
using Carry4Bits = std::bitset<4>;

struct Carry4Outputs {
  Carry4Bits o;
  Carry4Bits co;
  friend bool operator==(const Carry4Outputs&, const Carry4Outputs&) = default;
};

inline bool lut6_eval(Init64 init, LutInputs inputs) noexcept {
  return init.bit(static_cast<unsigned>(inputs.to_ulong()));
}

/// O6 reads the full constant; O5 reads the low 32 bits and ignores I5.
inline Lut6_2Outputs lut6_2_eval(Init64 init, LutInputs inputs) noexcept {
  const auto index = static_cast<unsigned>(inputs.to_ulong());
  return {init.bit(index), init.bit(index & 31u)};
}

/// Per stage: O[i] = S[i] ^ c_i, c_{i+1} = S[i] ? c_i : DI[i], c_0 = ci,
/// CO[i] = c_{i+1}.
inline Carry4Outputs carry4_eval(bool ci, Carry4Bits s, Carry4Bits di) noexcept {
  Carry4Outputs out;
  bool carry = ci;
  for (std::size_t i = 0; i < 4; ++i) {
    out.o[i] = s[i] != carry;
    carry = s[i] ? carry : di[i];
    out.co[i] = carry;
  }
  return out;
}

}  // namespace fabricmul
