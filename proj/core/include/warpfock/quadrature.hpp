#pragma once

#include <vector>

namespace warpfock {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached, thread-safe. Legendre on [-1, 1]; Hermite with weight exp(-x^2).
const QuadratureRule& gauss_legendre(int n);
const QuadratureRule& gauss_hermite(int n);

}  // namespace warpfock
