#pragma once

#include <vector>

namespace minkval {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int order, double a = -1.0, double b = 1.0);

}  // namespace minkval
