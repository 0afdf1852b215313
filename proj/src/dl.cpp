#include "vibro/dl.hpp"

#include <stdexcept>

namespace vibro {

std::string to_string(DL dl) {
  switch (dl) {
    case DL::DL1: return "DL-1";
    case DL::DL2: return "DL-2";
    case DL::DL3: return "DL-3";
    case DL::FullyDegenerate: return "fully degenerate";
  }
  return "?";
}

std::string to_string(TimeVariable tv) {
  switch (tv) {
    case TimeVariable::t: return "t";
    case TimeVariable::s_eps: return "s=eps*t";
    case TimeVariable::s_eps2: return "s=eps^2*t";
  }
  return "?";
}

TimeVariable slow_time_of(DL dl) {
  switch (dl) {
    case DL::DL1: return TimeVariable::t;
    case DL::DL2: return TimeVariable::s_eps;
    case DL::DL3: return TimeVariable::s_eps2;
    case DL::FullyDegenerate: break;
  }
  throw std::invalid_argument("no slow time for a fully degenerate field");
}

int epsilon_power(TimeVariable tv) {
  switch (tv) {
    case TimeVariable::t: return 0;
    case TimeVariable::s_eps: return 1;
    case TimeVariable::s_eps2: return 2;
  }
  return 0;
}

}  // namespace vibro
