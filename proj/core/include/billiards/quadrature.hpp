#pragma once

#include <vector>

namespace billiards {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (cached, thread-safe after first use).
const GaussRule& gauss_legendre(int n);

/// Integral of f over [a, b] with the n-point rule.
template <class F>
double integrate_gl(F&& f, double a, double b, int n = 10) {
  const GaussRule& g = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) acc += g.weights[i] * f(mid + half * g.nodes[i]);
  return acc * half;
}

}  // namespace billiards
