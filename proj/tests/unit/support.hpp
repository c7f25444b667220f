#pragma once

#include "kramers/coefficients.hpp"
#include "kramers/harness.hpp"
#include "kramers/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace kt {

using namespace kramers;

inline SpacePtr space(int n = 8, int r = 2, double length = M_PI) {
  return SpectralSpace::build(length, n, r);
}

/// Smooth random field; coefficients decay like i^-2.
inline Field field(const SpacePtr& s, std::uint64_t seed, double scale = 0.5, double decay = 2.0) {
  return random_field(s, seed, 17, scale, decay);
}

inline Eigen::VectorXd theta(const SpacePtr& s) { return DiffusionModel::power_law_weights(s->n_modes(), 2.0); }

/// g = G, f = 0, sigma = 0.
inline Coefficients inert(const SpacePtr& s, const Eigen::MatrixXd& g) {
  return {FrictionModel::constant(g), NemytskiiMap::zero(s->n_components()),
          DiffusionModel::zero(s->n_components(), theta(s)), std::nullopt};
}

/// Dense Gauss-Legendre sample grid on (0, length) for independent quadrature oracles.
struct Grid {
  Eigen::VectorXd x, w;
};
Grid dense_grid(double length, int n = 400);

/// Pointwise values of a field at arbitrary abscissae: r x x.size().
inline Eigen::MatrixXd evaluate(const Field& h, const Eigen::VectorXd& x) {
  const auto& s = *h.space();
  Eigen::MatrixXd e(s.n_modes(), x.size());
  for (int i = 0; i < s.n_modes(); ++i)
    for (int j = 0; j < x.size(); ++j) e(i, j) = s.eigenfunction(i, x(j));
  return h.coeffs() * e;
}

/// Projection of pointwise values onto the sine basis by dense quadrature.
inline Eigen::MatrixXd project(const SpacePtr& s, const Eigen::MatrixXd& values, const Grid& g) {
  Eigen::MatrixXd e(g.x.size(), s->n_modes());
  for (int j = 0; j < g.x.size(); ++j)
    for (int i = 0; i < s->n_modes(); ++i) e(j, i) = g.w(j) * s->eigenfunction(i, g.x(j));
  return values * e;
}

}  // namespace kt
