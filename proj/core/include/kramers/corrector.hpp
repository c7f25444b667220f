#pragma once

// Perturbed test functions for the small-mass limit, as exact finite-dimensional
// objects.  With frozen u and a probe h in H:
//   phi1(v) = <g_R^{-1}(u) v, h>               linear in v
//   psi(v)  = <[D g_R^{-1}(u) v] v, h>         quadratic in v
//   phi2(v) = int_0^inf e^{-lambda t} (P_t psi(v) - <S_R(u), h>) dt
// Because P_t maps quadratics to quadratics, phi2 = v^T Phi v - Tr(Phi Lambda)
// with Phi = int e^{-lambda t} E_t^T Q_psi E_t dt, and every generator identity
// can be evaluated without finite differences.

#include "kramers/coefficients.hpp"
#include "kramers/ou.hpp"
#include "kramers/spectral.hpp"

namespace kramers {

/// lambda(mu) = mu^{(1/2 - delta) / 2}.
double resolvent_scaling(double mu, double delta = 0.25);

struct QuadratureOptions {
  int nodes = 200;
  /// Horizon T_q = horizon_factor / gamma0.
  double horizon_factor = 40.0;
};

class CorrectorContext {
 public:
  CorrectorContext(const Coefficients& co, Field u, Field h, double delta = 0.25,
                   QuadratureOptions quad = {});

  const Field& u() const noexcept { return u_; }
  const Field& h() const noexcept { return h_; }
  const OuKernel& kernel() const noexcept { return kernel_; }
  double delta() const noexcept { return delta_; }
  double gamma0() const noexcept { return gamma0_; }
  const QuadratureOptions& quadrature() const noexcept { return quad_; }

  const QuadraticForm& phi1_form() const noexcept { return phi1_; }
  const QuadraticForm& psi_form() const noexcept { return psi_; }
  /// <S_R(u), h>_H from the spectral drift.
  double drift_pairing() const noexcept { return drift_pairing_; }

 private:
  Field u_;
  Field h_;
  OuKernel kernel_;
  double delta_;
  double gamma0_;
  QuadratureOptions quad_;
  QuadraticForm phi1_;
  QuadraticForm psi_;
  double drift_pairing_ = 0.0;
};

double phi1(const CorrectorContext& ctx, const Field& v);
double psi(const CorrectorContext& ctx, const Field& v);

/// M phi1(v) + <v, h>_H.
double generator_identity_phi1(const CorrectorContext& ctx, const Field& v);

struct Phi2Form {
  QuadraticForm form;        // v^T Phi v - Tr(Phi Lambda)
  double lambda = 0.0;       // resolvent parameter lambda(mu)
  double horizon = 0.0;      // T_q
  int nodes = 0;
  /// |integrand tail beyond T_q| <= tail_coefficient * (||v||_H^2 + Tr_H Lambda).
  double tail_coefficient = 0.0;
};

/// Quadrature representation of phi2 at resolvent parameter lambda(mu).
Phi2Form phi2_form(const CorrectorContext& ctx, double mu, int nodes = -1);

struct Phi2Value {
  double value = 0.0;
  /// Certified bound on the neglected tail beyond the quadrature horizon.
  double tail_bound = 0.0;
};

Phi2Value phi2(const CorrectorContext& ctx, const Field& v, double mu);

/// M phi2(v) - lambda phi2(v) + (psi(v) - <S, h>); zero up to quadrature error.
double resolvent_identity_phi2(const CorrectorContext& ctx, const Field& v, double mu,
                               int nodes = -1);

/// P_t psi(v) - <S, h>, exact.
double centered_semigroup_psi(const CorrectorContext& ctx, const Field& v, double t);

struct StationaryMean {
  double trace_route = 0.0;   // Tr(Q_psi Lambda)
  double drift_route = 0.0;   // <S(u), h>_H via drift_spectral
  double difference() const { return trace_route - drift_route; }
};

StationaryMean stationary_mean_psi(const CorrectorContext& ctx);

}  // namespace kramers
