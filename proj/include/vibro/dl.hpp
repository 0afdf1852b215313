#pragma once

#include <string>

namespace vibro {

/// Distinguished limit selected for a field.
enum class DL { DL1, DL2, DL3, FullyDegenerate };

/// Slow variable in which an averaged system or trajectory is expressed.
enum class TimeVariable {
  t,       // s = t
  s_eps,   // s = εt
  s_eps2,  // s = ε²t
};

std::string to_string(DL dl);
std::string to_string(TimeVariable tv);

/// s = t for DL-1, εt for DL-2, ε²t for DL-3.
TimeVariable slow_time_of(DL dl);

/// Power p in s = εᵖ t.
int epsilon_power(TimeVariable tv);

}  // namespace vibro
