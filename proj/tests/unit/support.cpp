#include "support.hpp"

#include "kramers/numerics.hpp"

namespace kt {

Grid dense_grid(double length, int n) {
  const QuadratureRule rule = gauss_legendre(n, 0.0, length);
  return {rule.nodes, rule.weights};
}

}  // namespace kt
