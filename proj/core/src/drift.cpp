#include "kramers/drift.hpp"

#include "kramers/errors.hpp"
#include "kramers/noise.hpp"

#include <cmath>

namespace kramers {

const char* to_string(DriftMethod m) {
  switch (m) {
    case DriftMethod::spectral: return "spectral";
    case DriftMethod::trace: return "trace";
    case DriftMethod::monte_carlo: return "monte_carlo";
    case DriftMethod::ergodic: return "ergodic";
  }
  return "?";
}

DriftMethod parse_drift_method(const std::string& s) {
  if (s == "spectral") return DriftMethod::spectral;
  if (s == "trace") return DriftMethod::trace;
  if (s == "monte_carlo") return DriftMethod::monte_carlo;
  if (s == "ergodic") return DriftMethod::ergodic;
  throw InvalidConfig("unknown drift method '" + s + "' (spectral, trace, monte_carlo, ergodic)");
}

namespace {

// (D g^{-1}(u) z) z for a flattened z, returned as r x N.
Eigen::MatrixXd contract(const LinearMatrixForm& form, const double* z, int r, int n) {
  const Eigen::Map<const Eigen::MatrixXd> zm(z, r, n);
  const Eigen::Map<const Eigen::VectorXd> zv(z, r * n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, r);
  for (std::size_t k = 0; k < form.mats.size(); ++k) m += form.weights[k].dot(zv) * form.mats[k];
  return m * zm;
}

// Running sums for a vector-valued mean with a scalar projection.
struct Accumulator {
  Eigen::VectorXd sum, sumsq;
  double psum = 0.0, psumsq = 0.0;
  std::int64_t count = 0;

  explicit Accumulator(Eigen::Index dim)
      : sum(Eigen::VectorXd::Zero(dim)), sumsq(Eigen::VectorXd::Zero(dim)) {}

  void add(const Eigen::Ref<const Eigen::VectorXd>& x, double p) {
    sum += x;
    sumsq += x.cwiseAbs2();
    psum += p;
    psumsq += p * p;
    ++count;
  }
};

void finish_errors(DriftResult& out, const Eigen::VectorXd& var_of_mean, double proj_var_of_mean) {
  const int r = out.value.space()->n_components();
  const int n = out.value.space()->n_modes();
  const Eigen::VectorXd se = var_of_mean.cwiseMax(0.0).cwiseSqrt();
  out.standard_errors = Eigen::Map<const Eigen::MatrixXd>(se.data(), r, n);
  out.error_estimate = se.norm();
  out.projection_error = std::sqrt(std::max(0.0, proj_var_of_mean));
}

DriftResult empty_result(const SpacePtr& space, DriftMethod method) {
  DriftResult out;
  out.value = Field(space);
  out.method = method;
  return out;
}

Eigen::VectorXd projection_vector(const std::optional<Field>& d, Eigen::Index dim) {
  if (!d) return Eigen::VectorXd::Zero(dim);
  if (d->flat_view().size() != dim) throw InvalidConfig("drift: projection direction has wrong size");
  return d->flat();
}

}  // namespace

DriftResult drift_spectral(const Coefficients& co, const Field& u, const OuKernel& kernel) {
  const SpacePtr& space = u.space();
  const int r = space->n_components();
  const int n = space->n_modes();
  DriftResult out = empty_result(space, DriftMethod::spectral);
  const LinearMatrixForm form = co.inverse_friction_derivative_form_R(u);
  if (form.empty()) return out;

  const Eigen::VectorXd& lam = kernel.eigenvalues();
  const Eigen::MatrixXd& vec = kernel.eigenvectors();
  const double cut = 1e-14 * std::max(0.0, lam.maxCoeff());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(r, n);
  for (Eigen::Index m = 0; m < lam.size(); ++m) {
    if (!(lam(m) > cut)) continue;
    s += lam(m) * contract(form, vec.col(m).data(), r, n);
  }
  out.value.coeffs() = s;
  return out;
}

DriftResult drift_trace(const Coefficients& co, const Field& u, const OuKernel& kernel) {
  const SpacePtr& space = u.space();
  const int r = space->n_components();
  const int n = space->n_modes();
  DriftResult out = empty_result(space, DriftMethod::trace);
  const LinearMatrixForm form = co.inverse_friction_derivative_form_R(u);
  const Eigen::MatrixXd& lam = kernel.covariance().full();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(r, n);
  for (std::size_t k = 0; k < form.mats.size(); ++k) {
    const Eigen::VectorXd y = lam * form.weights[k];
    s += form.mats[k] * Eigen::Map<const Eigen::MatrixXd>(y.data(), r, n);
  }
  out.value.coeffs() = s;
  return out;
}

DriftResult drift_monte_carlo(const Coefficients& co, const Field& u, const OuKernel& kernel,
                              const MonteCarloOptions& opt) {
  if (opt.n_samples < 100) throw InvalidConfig("drift_monte_carlo: need at least 100 samples");
  if (opt.batch < 1) throw InvalidConfig("drift_monte_carlo: batch must be positive");
  const SpacePtr& space = u.space();
  const int r = space->n_components();
  const int n = space->n_modes();
  const int dim = space->dim();
  DriftResult out = empty_result(space, DriftMethod::monte_carlo);
  out.sample_count = opt.n_samples;
  const LinearMatrixForm form = co.inverse_friction_derivative_form_R(u);
  if (form.empty()) {
    out.standard_errors = Eigen::MatrixXd::Zero(r, n);
    return out;
  }

  const Eigen::VectorXd d = projection_vector(opt.projection, dim);
  const Eigen::MatrixXd factor = kernel.factor();
  KeyedNormalStream normals(opt.seed, opt.stream);
  Accumulator acc(dim);
  Eigen::MatrixXd zeta, xi;
  for (std::int64_t done = 0; done < opt.n_samples;) {
    const int b = static_cast<int>(std::min<std::int64_t>(opt.batch, opt.n_samples - done));
    zeta.resize(dim, b);
    normals.fill(zeta);
    xi.noalias() = factor * zeta;
    for (int s = 0; s < b; ++s) {
      const Eigen::MatrixXd val = contract(form, xi.col(s).data(), r, n);
      const Eigen::Map<const Eigen::VectorXd> v(val.data(), dim);
      acc.add(v, d.dot(v));
    }
    done += b;
  }

  const double cnt = static_cast<double>(acc.count);
  const Eigen::VectorXd mean = acc.sum / cnt;
  out.value.coeffs() = Eigen::Map<const Eigen::MatrixXd>(mean.data(), r, n);
  const Eigen::VectorXd var = (acc.sumsq / cnt - mean.cwiseAbs2()) * (cnt / (cnt - 1.0));
  const double pmean = acc.psum / cnt;
  const double pvar = (acc.psumsq / cnt - pmean * pmean) * (cnt / (cnt - 1.0));
  finish_errors(out, var / cnt, pvar / cnt);
  return out;
}

DriftResult stationary_process_oracle(const Coefficients& co, const Field& u,
                                      const OuKernel& kernel, const ErgodicOptions& opt) {
  if (!(opt.step > 0.0)) throw InvalidConfig("stationary_process_oracle: step must be positive");
  if (opt.n_batches < 2 || opt.n_steps < opt.n_batches)
    throw InvalidConfig("stationary_process_oracle: need at least two nonempty batches");
  const double gamma0 = co.friction.gamma0();
  const double burn_in = opt.burn_in > 0.0 ? opt.burn_in : 10.0 / gamma0;
  if (burn_in < 10.0 / gamma0 * (1.0 - 1e-12))
    throw InvalidConfig("stationary_process_oracle: burn_in must be at least 10 / gamma0");

  const SpacePtr& space = u.space();
  const int r = space->n_components();
  const int n = space->n_modes();
  const int dim = space->dim();
  DriftResult out = empty_result(space, DriftMethod::ergodic);
  out.sample_count = opt.n_steps;
  const LinearMatrixForm form = co.inverse_friction_derivative_form_R(u);
  if (form.empty()) {
    out.standard_errors = Eigen::MatrixXd::Zero(r, n);
    return out;
  }

  // Exact one-step kernel: y <- e^{-G tau} y + chol(C_tau) zeta.
  const Eigen::MatrixXd e = kernel.decay(opt.step);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kernel.transition_covariance(opt.step).full());
  const Eigen::MatrixXd noise_factor =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  const Eigen::VectorXd d = projection_vector(opt.projection, dim);
  KeyedNormalStream normals(opt.seed, opt.stream);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(r, n);
  Eigen::VectorXd z(dim);
  auto advance = [&] {
    normals.fill(z);
    const Eigen::VectorXd kick = noise_factor * z;
    y = e * y + Eigen::Map<const Eigen::MatrixXd>(kick.data(), r, n);
  };
  const auto burn_steps = static_cast<std::int64_t>(std::ceil(burn_in / opt.step));
  for (std::int64_t k = 0; k < burn_steps; ++k) advance();

  const std::int64_t per_batch = opt.n_steps / opt.n_batches;
  Accumulator batches(dim);
  for (int b = 0; b < opt.n_batches; ++b) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    for (std::int64_t k = 0; k < per_batch; ++k) {
      advance();
      const Eigen::MatrixXd val = contract(form, y.data(), r, n);
      sum += Eigen::Map<const Eigen::VectorXd>(val.data(), dim);
    }
    const Eigen::VectorXd bmean = sum / static_cast<double>(per_batch);
    batches.add(bmean, d.dot(bmean));
  }
  out.sample_count = per_batch * opt.n_batches;

  const double nb = opt.n_batches;
  const Eigen::VectorXd mean = batches.sum / nb;
  out.value.coeffs() = Eigen::Map<const Eigen::MatrixXd>(mean.data(), r, n);
  const Eigen::VectorXd var = (batches.sumsq / nb - mean.cwiseAbs2()) * (nb / (nb - 1.0));
  const double pmean = batches.psum / nb;
  const double pvar = (batches.psumsq / nb - pmean * pmean) * (nb / (nb - 1.0));
  finish_errors(out, var / nb, pvar / nb);
  return out;
}

Field noise_drift(const Coefficients& co, const Field& u, DriftMethod method) {
  const OuKernel kernel = OuKernel::build(co, u);
  switch (method) {
    case DriftMethod::spectral: return drift_spectral(co, u, kernel).value;
    case DriftMethod::trace: return drift_trace(co, u, kernel).value;
    default: throw InvalidConfig("noise_drift: only the exact routes (spectral, trace) are allowed");
  }
}

double drift_lipschitz_probe(const Coefficients& co, const Field& u1, const Field& u2) {
  const double du = sobolev_norm(u1 - u2, 1.0);
  if (!(du > 0.0)) throw InvalidConfig("drift_lipschitz_probe: u1 and u2 coincide");
  const Field s1 = noise_drift(co, u1, DriftMethod::spectral);
  const Field s2 = noise_drift(co, u2, DriftMethod::spectral);
  const double weight = 1.0 + sobolev_norm_squared(u1, 2.0) + sobolev_norm_squared(u2, 2.0);
  return sobolev_norm(s1 - s2, 1.0) / (weight * du);
}

AgreementStats agreement(const DriftResult& a, const DriftResult& b, const Field& direction) {
  const Field diff = a.value - b.value;
  auto se2 = [](const DriftResult& x) {
    return x.standard_errors.size() ? x.standard_errors.squaredNorm() : 0.0;
  };
  AgreementStats st;
  const double total = se2(a) + se2(b);
  const double dn = diff.coeffs().norm();
  st.norm_ratio = total > 0.0 ? dn / std::sqrt(total) : (dn == 0.0 ? 0.0 : INFINITY);
  const double pe = std::hypot(a.projection_error, b.projection_error);
  const double pd = std::abs(diff.flat().dot(direction.flat()));
  st.projection_z = pe > 0.0 ? pd / pe : (pd == 0.0 ? 0.0 : INFINITY);
  return st;
}

}  // namespace kramers
