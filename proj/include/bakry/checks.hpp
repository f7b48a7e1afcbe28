#pragma once

#include <cmath>
#include <string>

#include "bakry/geometry.hpp"

namespace bakry {

/// One hypothesis evaluated on a sample plan.
struct HypothesisCheck {
  std::string name;
  /// Minimum over the plan of the quantity that must be positive or non-negative.
  double margin = 0.0;
  bool pass = false;
  /// Strict hypotheses (> 0) need margin > tolerance, others margin >= -tolerance.
  bool strict = false;
  double tolerance = 0.0;
  std::string plan;
  Point argmin{};
  std::string note;
};

inline HypothesisCheck make_check(std::string name, double margin, double tolerance, bool strict, std::string plan) {
  HypothesisCheck c;
  c.name = std::move(name);
  c.margin = margin;
  c.tolerance = tolerance;
  c.strict = strict;
  c.plan = std::move(plan);
  c.pass = !std::isnan(margin) && (strict ? margin > tolerance : margin >= -tolerance);
  return c;
}

}  // namespace bakry
