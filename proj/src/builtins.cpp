#include "polydisc/builtins.hpp"

#include <cmath>
#include <sstream>

namespace polydisc {

namespace {

MomentFunctional averaged_pair(int cap, double scale) {
  Truncation tr(1, cap);
  std::vector<cplx> moments(tr.basis_size());
  for (int k = 0; k <= cap; ++k)
    moments[k] = scale * (std::pow(0.5, k) + std::pow(-0.5, k));
  GrowthBound g;
  g.C = 2.0 * scale;
  g.rho = {0.5};
  return MomentFunctional(tr, std::move(moments), g);
}

}  // namespace

std::optional<MomentFunctional> named_moments(const std::string& name, int cap) {
  if (name == "sum-pm-half") return averaged_pair(cap, 1.0);
  if (name == "average-pm-half") return averaged_pair(cap, 0.5);
  if (name.rfind("point:", 0) == 0) {
    std::vector<cplx> b;
    std::stringstream ss(name.substr(6));
    std::string part;
    while (std::getline(ss, part, ';')) {
      auto comma = part.find(',');
      try {
        double re = std::stod(part.substr(0, comma));
        double im = comma == std::string::npos ? 0.0 : std::stod(part.substr(comma + 1));
        b.emplace_back(re, im);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "named_moments: bad point literal");
      }
    }
    if (b.empty()) throw Error(ErrorCode::ParseError, "named_moments: empty point");
    Truncation tr(static_cast<int>(b.size()), cap);
    return MomentFunctional::point_evaluation(tr, 1.0, b);
  }
  return std::nullopt;
}

}  // namespace polydisc
