#pragma once
#include <vector>

namespace flatcal {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
  explicit GaussRule(int n);
};

// cached rule access (thread-safe, rules are immutable once built)
const GaussRule& gauss_rule(int n);

}  // namespace flatcal
