#pragma once

#include <optional>
#include <string>

#include "polydisc/functionals.hpp"

namespace polydisc {

inline constexpr const char* kToolVersion = "0.1.0";

// Named moment tables used by the CLI and the worked examples:
//   "point:<re>,<im>;..."  scaled point evaluation with a = 1
//   "sum-pm-half"          Lambda(f) = f(1/2) + f(-1/2)        (n = 1)
//   "average-pm-half"      Lambda(f) = (f(1/2) + f(-1/2)) / 2  (n = 1)
std::optional<MomentFunctional> named_moments(const std::string& name, int cap);

}  // namespace polydisc
