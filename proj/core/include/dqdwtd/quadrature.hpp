#pragma once

#include <vector>

namespace dqdwtd {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computed by Newton iteration on P_n; nodes are returned in ascending order.
GaussLegendreRule gauss_legendre(int n);

}  // namespace dqdwtd
