#include "kramers/corrector.hpp"

#include "kramers/drift.hpp"
#include "kramers/errors.hpp"
#include "kramers/numerics.hpp"

#include <cmath>

namespace kramers {

double resolvent_scaling(double mu, double delta) {
  if (!(mu > 0.0)) throw InvalidConfig("resolvent_scaling: mu must be positive");
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidConfig("resolvent_scaling: delta must lie in (0, 1/2)");
  return std::pow(mu, 0.5 * (0.5 - delta));
}

namespace {

// (I_N (x) A) applied to a flattened vector.
Eigen::VectorXd blockwise(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, int r, int n) {
  Eigen::VectorXd out(v.size());
  Eigen::Map<Eigen::MatrixXd>(out.data(), r, n) = a * Eigen::Map<const Eigen::MatrixXd>(v.data(), r, n);
  return out;
}

// (I (x) E)^T Q (I (x) E), block by block.
Eigen::MatrixXd congruence(const Eigen::MatrixXd& q, const Eigen::MatrixXd& e, int r, int n) {
  Eigen::MatrixXd out(q.rows(), q.cols());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.block(i * r, j * r, r, r).noalias() = e.transpose() * q.block(i * r, j * r, r, r) * e;
  return out;
}

}  // namespace

CorrectorContext::CorrectorContext(const Coefficients& co, Field u, Field h, double delta,
                                   QuadratureOptions quad)
    : u_(std::move(u)),
      h_(std::move(h)),
      kernel_(OuKernel::build(co, u_)),
      delta_(delta),
      gamma0_(co.friction.gamma0()),
      quad_(quad) {
  if (h_.coeffs().rows() != u_.coeffs().rows() || h_.coeffs().cols() != u_.coeffs().cols())
    throw InvalidConfig("corrector context: h and u must live in the same space");
  if (quad_.nodes < 1) throw InvalidConfig("corrector context: quadrature needs at least one node");
  if (quad_.horizon_factor < 40.0) throw InvalidConfig("corrector context: quadrature horizon must be >= 40 / gamma0");
  resolvent_scaling(1.0, delta_);  // validates delta

  const SpacePtr& space = u_.space();
  const int r = space->n_components();
  const int n = space->n_modes();
  const Eigen::VectorXd hv = h_.flat();

  // phi1(v) = <(I (x) g^{-1}) v, h> = <v, (I (x) g^{-T}) h>.
  const Eigen::MatrixXd ginv = kernel_.friction().inverse();
  phi1_ = QuadraticForm::linear_only(blockwise(ginv.transpose(), hv, r, n));

  // psi(v) = sum_k <l_k, v> <v, (I (x) C_k^T) h>.
  const LinearMatrixForm form = co.inverse_friction_derivative_form_R(u_);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(space->dim(), space->dim());
  for (std::size_t k = 0; k < form.mats.size(); ++k)
    p.noalias() += form.weights[k] * blockwise(form.mats[k].transpose(), hv, r, n).transpose();
  psi_ = QuadraticForm::from(p, Eigen::VectorXd::Zero(space->dim()), 0.0);

  drift_pairing_ = drift_spectral(co, u_, kernel_).value.flat().dot(hv);
}

double phi1(const CorrectorContext& ctx, const Field& v) { return ctx.phi1_form()(v.flat()); }

double psi(const CorrectorContext& ctx, const Field& v) { return ctx.psi_form()(v.flat()); }

double generator_identity_phi1(const CorrectorContext& ctx, const Field& v) {
  return generator_apply(ctx.kernel(), ctx.phi1_form(), v) + v.flat().dot(ctx.h().flat());
}

Phi2Form phi2_form(const CorrectorContext& ctx, double mu, int nodes) {
  const SpacePtr& space = ctx.u().space();
  const int r = space->n_components();
  const int n = space->n_modes();
  const int nq = nodes > 0 ? nodes : ctx.quadrature().nodes;

  Phi2Form out;
  out.lambda = resolvent_scaling(mu, ctx.delta());
  out.horizon = ctx.quadrature().horizon_factor / ctx.gamma0();
  out.nodes = nq;

  // t(s) = -log(1 - s a) / beta maps [0, 1] onto [0, T_q], clustering nodes near t = 0.
  // In s the integrand behaves like (1 - s)^{c / beta - 1} with c >= 2 gamma0; a slow map
  // (beta = gamma0 / 2) keeps that endpoint smooth, otherwise convergence is only algebraic.
  const double beta = 0.5 * ctx.gamma0();
  const double a = -std::expm1(-beta * out.horizon);
  const QuadratureRule rule = gauss_legendre(nq, 0.0, 1.0);
  const Eigen::MatrixXd& q = ctx.psi_form().quad;
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  for (int k = 0; k < nq; ++k) {
    const double s = rule.nodes(k);
    const double t = -std::log1p(-s * a) / beta;
    const double jac = a / (beta * (1.0 - s * a));
    const double w = rule.weights(k) * jac * std::exp(-out.lambda * t);
    phi += w * congruence(q, ctx.kernel().decay(t), r, n);
  }
  const Eigen::MatrixXd& lam = ctx.kernel().covariance().full();
  out.form = QuadraticForm::from(phi, Eigen::VectorXd::Zero(q.rows()), -phi.cwiseProduct(lam).sum());

  // ||e^{-G t}|| <= e^{-gs t} with gs the smallest eigenvalue of sym G.
  const Eigen::MatrixXd& g = ctx.kernel().friction();
  const double gs = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (g + g.transpose()))
                        .eigenvalues()(0);
  const double q_norm = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .cwiseAbs()
                            .maxCoeff();
  const double rate = 2.0 * gs + out.lambda;
  out.tail_coefficient = q_norm * std::exp(-rate * out.horizon) / rate;
  return out;
}

Phi2Value phi2(const CorrectorContext& ctx, const Field& v, double mu) {
  const Phi2Form f = phi2_form(ctx, mu);
  const Eigen::VectorXd x = v.flat();
  return {f.form(x), f.tail_coefficient * (x.squaredNorm() + ctx.kernel().covariance().trace_h())};
}

double resolvent_identity_phi2(const CorrectorContext& ctx, const Field& v, double mu, int nodes) {
  const Phi2Form f = phi2_form(ctx, mu, nodes);
  const double m_phi2 = generator_apply(ctx.kernel(), f.form, v);
  const double value = f.form(v.flat());
  return m_phi2 - f.lambda * value + (psi(ctx, v) - ctx.drift_pairing());
}

double centered_semigroup_psi(const CorrectorContext& ctx, const Field& v, double t) {
  const SpacePtr& space = ctx.u().space();
  const Eigen::MatrixXd et = congruence(ctx.psi_form().quad, ctx.kernel().decay(t),
                                        space->n_components(), space->n_modes());
  const Eigen::VectorXd x = v.flat();
  return x.dot(et * x) - et.cwiseProduct(ctx.kernel().covariance().full()).sum();
}

StationaryMean stationary_mean_psi(const CorrectorContext& ctx) {
  StationaryMean m;
  m.trace_route = ctx.psi_form().quad.cwiseProduct(ctx.kernel().covariance().full()).sum();
  m.drift_route = ctx.drift_pairing();
  return m;
}

}  // namespace kramers
