#pragma once

#include <functional>
#include <string>

#include "polydisc/series.hpp"

namespace polydisc {

// A closed-form function on C^n. log_abs is used by quadratures of
// log|f|; supplying it directly avoids overflow when |f| swings over
// hundreds of orders of magnitude (exp of a rational phase, say).
struct Evaluator {
  int n = 1;
  std::string name;
  std::function<cplx(std::span<const cplx>)> value;
  std::function<double(std::span<const cplx>)> log_abs;  // may be empty

  double log_abs_at(std::span<const cplx> z) const;
  static Evaluator from_series(const TruncatedSeries& f, std::string name = "series");
};

}  // namespace polydisc
