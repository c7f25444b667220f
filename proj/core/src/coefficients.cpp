#include "kramers/coefficients.hpp"

#include "kramers/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kramers {

namespace {

double spectral_norm(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

double sech2(double x) {
  const double c = std::cosh(x);
  return 1.0 / (c * c);
}

}  // namespace

Eigen::MatrixXd LinearMatrixForm::apply(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (mats.empty()) return {};
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(mats.front().rows(), mats.front().cols());
  for (std::size_t k = 0; k < mats.size(); ++k) out += weights[k].dot(z) * mats[k];
  return out;
}

// ---------------------------------------------------------------------------
// Friction

FrictionModel::FrictionModel(Eigen::MatrixXd base, std::vector<Eigen::MatrixXd> perturbations,
                             std::vector<Field> probes, double gamma0)
    : base_(std::move(base)),
      perturbations_(std::move(perturbations)),
      probes_(std::move(probes)) {
  const int r = static_cast<int>(base_.rows());
  if (r < 1 || base_.cols() != r) throw InvalidConfig("friction: base matrix must be square");
  if (perturbations_.size() != probes_.size())
    throw InvalidConfig("friction: one probe field per perturbation matrix required");
  for (const auto& a : perturbations_)
    if (a.rows() != r || a.cols() != r)
      throw InvalidConfig("friction: perturbation matrices must be r x r");
  for (const auto& w : probes_)
    if (w.space()->n_components() != r)
      throw InvalidConfig("friction: probe fields must have r components");

  kind_ = perturbations_.empty() ? FrictionKind::constant
          : r == 1               ? FrictionKind::scalar_nonlocal
                                 : FrictionKind::matrix_nonlocal;

  const Eigen::MatrixXd sym = 0.5 * (base_ + base_.transpose());
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues()(0);
  double pert = 0.0;
  for (const auto& a : perturbations_) pert += spectral_norm(a);
  const double margin = lmin - pert;
  if (!(margin > 0.0)) {
    std::ostringstream os;
    os << "friction: ellipticity fails, lambda_min(sym G0) = " << lmin
       << " does not exceed sum ||A_k|| = " << pert;
    throw InvalidConfig(os.str());
  }
  if (gamma0 > margin * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "friction: requested gamma0 = " << gamma0 << " exceeds certified margin " << margin;
    throw InvalidConfig(os.str());
  }
  gamma0_ = gamma0 > 0.0 ? gamma0 : margin;
  sup_norm_ = spectral_norm(base_) + pert;

  for (const auto& w : probes_) {
    Field weighted(w.space(), w.coeffs().array().rowwise() *
                                  w.space()->eigenvalues().transpose().array());
    probe_weights_.push_back(weighted.flat());
  }
}

FrictionModel FrictionModel::constant(Eigen::MatrixXd base, double gamma0) {
  return FrictionModel(std::move(base), {}, {}, gamma0);
}

Eigen::MatrixXd FrictionModel::value(const Field& u) const {
  Eigen::MatrixXd g = base_;
  for (std::size_t k = 0; k < perturbations_.size(); ++k)
    g += std::tanh(probe_weights_[k].dot(u.flat_view())) * perturbations_[k];
  return g;
}

LinearMatrixForm FrictionModel::derivative_form(const Field& u) const {
  LinearMatrixForm form;
  for (std::size_t k = 0; k < perturbations_.size(); ++k) {
    const double a = probe_weights_[k].dot(u.flat_view());
    form.mats.push_back(sech2(a) * perturbations_[k]);
    form.weights.push_back(probe_weights_[k]);
  }
  return form;
}

Eigen::MatrixXd FrictionModel::derivative(const Field& u, const Field& k) const {
  if (perturbations_.empty()) return Eigen::MatrixXd::Zero(dim(), dim());
  return derivative_form(u).apply(k);
}

Eigen::MatrixXd FrictionModel::second_derivative(const Field& u, const Field& k1,
                                                 const Field& k2) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), dim());
  for (std::size_t k = 0; k < perturbations_.size(); ++k) {
    const double a = probe_weights_[k].dot(u.flat_view());
    const double d2 = -2.0 * sech2(a) * std::tanh(a);
    out += d2 * probe_weights_[k].dot(k1.flat_view()) * probe_weights_[k].dot(k2.flat_view()) *
           perturbations_[k];
  }
  return out;
}

Eigen::MatrixXd inverse_derivative(const Eigen::MatrixXd& g, const Eigen::MatrixXd& dg) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
  if (!(std::abs(lu.determinant()) > 0.0))
    throw NumericError("inverse_derivative: friction matrix is singular (ellipticity breach)");
  const Eigen::MatrixXd ginv = lu.inverse();
  return -ginv * dg * ginv;
}

LinearMatrixForm inverse_derivative_form(const Eigen::MatrixXd& g, const LinearMatrixForm& dg) {
  LinearMatrixForm out;
  if (dg.empty()) return out;
  const Eigen::MatrixXd ginv = g.inverse();
  for (std::size_t k = 0; k < dg.mats.size(); ++k) {
    out.mats.push_back(-ginv * dg.mats[k] * ginv);
    out.weights.push_back(dg.weights[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Forcing

NemytskiiMap NemytskiiMap::zero(int r) {
  return {"zero", [](const Eigen::MatrixXd& x) { return Eigen::MatrixXd::Zero(x.rows(), x.cols()).eval(); },
          [r](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(r, r).eval(); },
          [r](const Eigen::VectorXd&, const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(r).eval(); },
          0.0};
}

NemytskiiMap NemytskiiMap::identity(int r) {
  return {"identity", [](const Eigen::MatrixXd& x) { return x; },
          [r](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(r, r).eval(); },
          [r](const Eigen::VectorXd&, const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(r).eval(); },
          1.0};
}

NemytskiiMap NemytskiiMap::sine(int /*r*/) {
  return {"sine", [](const Eigen::MatrixXd& x) { return x.array().sin().matrix().eval(); },
          [](const Eigen::VectorXd& xi) { return xi.array().cos().matrix().asDiagonal().toDenseMatrix(); },
          [](const Eigen::VectorXd& xi, const Eigen::VectorXd& eta) {
            return (-xi.array().sin() * eta.array().square()).matrix().eval();
          },
          1.0};
}

NemytskiiMap NemytskiiMap::saturating(int r) {
  auto nodal = [](const Eigen::MatrixXd& x) {
    const Eigen::RowVectorXd denom = (1.0 + x.colwise().squaredNorm().array()).matrix();
    return (x.array().rowwise() / denom.array()).matrix().eval();
  };
  auto jac = [r](const Eigen::VectorXd& xi) {
    const double d = 1.0 + xi.squaredNorm();
    return (Eigen::MatrixXd::Identity(r, r) / d - 2.0 * xi * xi.transpose() / (d * d)).eval();
  };
  auto second = [](const Eigen::VectorXd& xi, const Eigen::VectorXd& eta) {
    const double d = 1.0 + xi.squaredNorm();
    const double xe = xi.dot(eta);
    const double ee = eta.squaredNorm();
    // d^2/dt^2 of (xi + t eta)/(1 + |xi + t eta|^2) at t = 0.
    return (-4.0 * xe / (d * d) * eta + (8.0 * xe * xe / (d * d * d) - 2.0 * ee / (d * d)) * xi)
        .eval();
  };
  return {"saturating", nodal, jac, second, 1.0};
}

Field nemytskii_apply(const NemytskiiMap& map, const Field& u) {
  return from_collocation(map.nodal(to_collocation(u)), u.space());
}

// ---------------------------------------------------------------------------
// Diffusion

DiffusionModel::DiffusionModel(std::string name, int r, PointMap lambda, Eigen::VectorXd theta,
                               double amplitude)
    : name_(std::move(name)),
      r_(r),
      lambda_(std::move(lambda)),
      theta_(std::move(theta)),
      amplitude_(amplitude) {
  if (r_ < 1) throw InvalidConfig("diffusion: r must be >= 1");
  if ((theta_.array() < 0.0).any() || !theta_.allFinite())
    throw InvalidConfig("diffusion: covariance weights must be finite and nonnegative");
}

DiffusionModel DiffusionModel::identity(int r, Eigen::VectorXd theta) {
  return {"identity", r, [r](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(r, r).eval(); },
          std::move(theta)};
}

DiffusionModel DiffusionModel::zero(int r, Eigen::VectorXd theta) {
  return {"zero", r, [r](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(r, r).eval(); },
          std::move(theta)};
}

DiffusionModel DiffusionModel::tanh_diagonal(int r, Eigen::VectorXd theta, double slope) {
  return {"tanh_diagonal", r,
          [r, slope](const Eigen::VectorXd& xi) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Identity(r, r);
            for (int c = 0; c < r; ++c) m(c, c) += slope * std::tanh(xi(c));
            return m;
          },
          std::move(theta)};
}

DiffusionModel DiffusionModel::rational_diagonal(int r, Eigen::VectorXd theta) {
  return {"rational_diagonal", r,
          [r](const Eigen::VectorXd& xi) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Identity(r, r);
            if (r > 1) m(1, 1) = 1.0 / (1.0 + xi(0) * xi(0));
            return m;
          },
          std::move(theta)};
}

Eigen::VectorXd DiffusionModel::power_law_weights(int n, double decay) {
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) t(i) = std::pow(static_cast<double>(i + 1), -decay);
  return t;
}

DiffusionModel DiffusionModel::scaled(double factor) const {
  DiffusionModel out(*this);
  out.amplitude_ *= factor;
  return out;
}

Eigen::MatrixXd DiffusionModel::lambda(const Eigen::VectorXd& xi) const {
  return amplitude_ * lambda_(xi);
}

Eigen::MatrixXd DiffusionModel::nodal_lambda(const Field& u) const {
  const Eigen::MatrixXd x = to_collocation(u);
  const int m = static_cast<int>(x.cols());
  Eigen::MatrixXd out(r_, r_ * m);
  for (int j = 0; j < m; ++j) out.block(0, j * r_, r_, r_) = lambda(x.col(j));
  return out;
}

std::pair<double, double> DiffusionModel::trace_sums(const SpectralSpace& space) const {
  double s0 = 0.0, s1 = 0.0;
  const int n = std::min<int>(static_cast<int>(theta_.size()), space.n_modes());
  for (int i = 0; i < n; ++i) {
    s0 += theta_(i) * theta_(i);
    s1 += theta_(i) * theta_(i) * std::pow(space.eigenvalue(i), 1.0 + 1.0 / 6.0);
  }
  return {s0, s1};
}

Field sigma_apply_nodal(const DiffusionModel& model, const Eigen::MatrixXd& nodal_lambda,
                        const SpacePtr& space, const Eigen::MatrixXd& zeta) {
  const int r = space->n_components();
  const int n = space->n_modes();
  if (zeta.rows() != r || zeta.cols() != n)
    throw InvalidConfig("sigma_apply: noise array must be r x N");
  Eigen::MatrixXd weighted = zeta;
  for (int i = 0; i < n; ++i) weighted.col(i) *= i < model.theta().size() ? model.theta()(i) : 0.0;
  Eigen::MatrixXd nodal = weighted * space->synthesis().transpose();
  const int m = space->collocation_size();
  for (int j = 0; j < m; ++j)
    nodal.col(j) = nodal_lambda.block(0, j * r, r, r) * nodal.col(j);
  return from_collocation(nodal, space);
}

Field sigma_apply(const DiffusionModel& model, const Field& u, const Eigen::MatrixXd& zeta) {
  return sigma_apply_nodal(model, model.nodal_lambda(u), u.space(), zeta);
}

double sigma_hilbert_schmidt_squared(const DiffusionModel& model, const Field& u) {
  const SpacePtr& space = u.space();
  const Eigen::MatrixXd lam = model.nodal_lambda(u);
  double total = 0.0;
  for (int i = 0; i < space->n_modes(); ++i)
    for (int c = 0; c < space->n_components(); ++c) {
      Eigen::MatrixXd zeta = Eigen::MatrixXd::Zero(space->n_components(), space->n_modes());
      zeta(c, i) = 1.0;
      total += sobolev_norm_squared(sigma_apply_nodal(model, lam, space, zeta), 0.0);
    }
  return total;
}

// ---------------------------------------------------------------------------
// Cutoff

CutoffModel::CutoffModel(double radius, double rbar, double sbar, double kappa_bar, double varrho)
    : radius_(radius), rbar_(rbar) {
  if (!(radius >= 1.0)) throw InvalidConfig("cutoff: radius must be >= 1");
  const double lower = std::max({2.0 * sbar / (1.0 + sbar), 2.0 * kappa_bar - 3.0, varrho});
  if (!(rbar > lower && rbar < 1.0)) {
    std::ostringstream os;
    os << "cutoff: rbar = " << rbar << " must lie in (" << lower << ", 1)";
    throw InvalidConfig(os.str());
  }
}

double CutoffModel::ramp(double t) const {
  const double s = t - radius_;
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
}

double CutoffModel::ramp_derivative(double t) const {
  const double s = t - radius_;
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return -6.0 * s + 6.0 * s * s;
}

// ---------------------------------------------------------------------------
// Truncated coefficient set

Eigen::MatrixXd Coefficients::friction_R(const Field& u) const {
  const Eigen::MatrixXd g = friction.value(u);
  if (!cutoff) return g;
  const double phi = cutoff->factor(u);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g.rows(), g.cols());
  return friction.gamma0() * id + phi * (g - friction.gamma0() * id);
}

LinearMatrixForm Coefficients::friction_derivative_form_R(const Field& u) const {
  LinearMatrixForm form = friction.derivative_form(u);
  if (!cutoff) return form;
  const double norm = sobolev_norm(u, cutoff->rbar());
  const double phi = cutoff->ramp(norm);
  for (auto& m : form.mats) m *= phi;
  const double dphi = cutoff->ramp_derivative(norm);
  if (dphi != 0.0 && norm > 0.0) {
    // d ||u||_{H^rbar} [k] = <u, k>_{H^rbar} / ||u||_{H^rbar}
    const Eigen::MatrixXd g = friction.value(u);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g.rows(), g.cols());
    Field w(u.space(), u.coeffs().array().rowwise() *
                           u.space()->weights(cutoff->rbar()).transpose().array());
    form.mats.push_back(dphi / norm * (g - friction.gamma0() * id));
    form.weights.push_back(w.flat());
  }
  return form;
}

Eigen::MatrixXd Coefficients::friction_derivative_R(const Field& u, const Field& k) const {
  const LinearMatrixForm form = friction_derivative_form_R(u);
  if (form.empty()) return Eigen::MatrixXd::Zero(friction.dim(), friction.dim());
  return form.apply(k);
}

LinearMatrixForm Coefficients::inverse_friction_derivative_form_R(const Field& u) const {
  return inverse_derivative_form(friction_R(u), friction_derivative_form_R(u));
}

Field Coefficients::forcing_R(const Field& u) const {
  Field f = nemytskii_apply(forcing, u);
  if (cutoff) f *= cutoff->factor(u);
  return f;
}

Field Coefficients::sigma_R(const Field& u, const Eigen::MatrixXd& zeta) const {
  Field s = sigma_apply(diffusion, u, zeta);
  if (cutoff) s *= cutoff->factor(u);
  return s;
}

DiffusionModel Coefficients::diffusion_R(const Field& u) const {
  return cutoff ? diffusion.scaled(cutoff->factor(u)) : diffusion;
}

Coefficients model_catalog(const std::string& name, const SpacePtr& space, const ModelParams& p) {
  const int r = space->n_components();
  if (r != 2) throw InvalidConfig("model catalog: the built-in models are defined for r = 2");
  if (!(p.noise_amplitude >= 0.0)) throw InvalidConfig("model catalog: noise_amplitude must be >= 0");
  if (!(p.cutoff_radius >= 0.0)) throw InvalidConfig("model catalog: cutoff_radius must be >= 0");
  Eigen::MatrixXd g0(2, 2);
  g0 << 2.0, 0.5, 0.5, 3.0;
  const Eigen::VectorXd theta = DiffusionModel::power_law_weights(space->n_modes(), 2.0);
  std::optional<CutoffModel> cutoff;
  if (p.cutoff_radius > 0.0) cutoff.emplace(p.cutoff_radius);

  if (name == "default") {
    Eigen::MatrixXd a1(2, 2);
    a1 << p.friction_perturbation, 0.0, 0.0, -p.friction_perturbation;
    Field w1(space);
    w1.coeffs().col(0).setOnes();
    FrictionModel friction(g0, {a1}, {w1});
    DiffusionModel diffusion =
        DiffusionModel::tanh_diagonal(r, theta, p.diffusion_slope).scaled(p.noise_amplitude);
    return {std::move(friction), NemytskiiMap::saturating(r), std::move(diffusion), cutoff};
  }
  if (name == "constant_friction") {
    DiffusionModel diffusion =
        DiffusionModel::tanh_diagonal(r, theta, p.diffusion_slope).scaled(p.noise_amplitude);
    return {FrictionModel::constant(g0), NemytskiiMap::saturating(r), std::move(diffusion), cutoff};
  }
  if (name == "deterministic") {
    return {FrictionModel::constant(g0), NemytskiiMap::zero(r), DiffusionModel::zero(r, theta), cutoff};
  }
  throw InvalidConfig("model catalog: unknown model '" + name +
                      "' (default, constant_friction, deterministic)");
}

Coefficients default_coefficients(const SpacePtr& space) { return model_catalog("default", space); }

}  // namespace kramers
