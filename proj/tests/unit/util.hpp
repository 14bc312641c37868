#pragma once

#include <random>

#include "warpfock/harness.hpp"

namespace wt {

using namespace warpfock;

inline Vec vec(std::initializer_list<double> l) {
  Vec v(static_cast<int>(l.size()));
  int i = 0;
  for (double x : l) v(i++) = x;
  return v;
}

inline GridPtr small_rapidity(int n = 8, double theta_max = 2.0) { return MassShellGrid::rapidity(1.0, 2, theta_max, n); }

inline CVec random_c(const GridPtr& g, std::mt19937_64& rng) {
  return random_coefficients(g->size(), g->size() / 4, g->size() - g->size() / 4, rng);
}

inline OnShellFunction osf(const GridPtr& g, const CVec& v, int sign = +1) {
  OnShellFunction f = OnShellFunction::zeros(g, sign);
  f.values = v;
  return f;
}

}  // namespace wt
