#include "warpfock/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <gsl/gsl_integration.h>

namespace warpfock {

namespace {

std::mutex g_mutex;

QuadratureRule make_legendre(int n) {
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &r.nodes[i], &r.weights[i], t);
  gsl_integration_glfixed_table_free(t);
  return r;
}

QuadratureRule make_hermite(int n) {
  gsl_integration_fixed_workspace* w =
      gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, static_cast<size_t>(n), 0.0, 1.0, 0.0, 0.0);
  if (!w) throw std::runtime_error("gauss_hermite: allocation failed");
  QuadratureRule r;
  const double* x = gsl_integration_fixed_nodes(w);
  const double* wt = gsl_integration_fixed_weights(w);
  r.nodes.assign(x, x + n);
  r.weights.assign(wt, wt + n);
  gsl_integration_fixed_free(w);
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(g_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(make_legendre(n));
  return *slot;
}

const QuadratureRule& gauss_hermite(int n) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(g_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(make_hermite(n));
  return *slot;
}

}  // namespace warpfock
