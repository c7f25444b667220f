#include "kramers/ou.hpp"

#include "kramers/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace kramers {

BlockCovariance::BlockCovariance(SpacePtr space, Eigen::MatrixXd full)
    : space_(std::move(space)), full_(std::move(full)) {
  if (full_.rows() != space_->dim() || full_.cols() != space_->dim())
    throw InvalidConfig("block covariance: matrix must be (N r) x (N r)");
}

Eigen::MatrixXd BlockCovariance::block(int i, int j) const {
  const int r = block_size();
  return full_.block(i * r, j * r, r, r);
}

double BlockCovariance::trace_h1() const {
  const int r = block_size();
  double t = 0.0;
  for (int i = 0; i < n_blocks(); ++i)
    for (int c = 0; c < r; ++c) t += space_->eigenvalue(i) * full_(i * r + c, i * r + c);
  return t;
}

double BlockCovariance::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (full_ + full_.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double BlockCovariance::symmetry_defect() const {
  return (full_ - full_.transpose()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd noise_factor_nodal(const SpacePtr& space, const DiffusionModel& diffusion,
                                   const Eigen::MatrixXd& nodal_lambda) {
  const int r = space->n_components();
  const int n = space->n_modes();
  const int m = space->collocation_size();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
  const int nt = std::min<int>(n, static_cast<int>(diffusion.theta().size()));
  theta.head(nt) = diffusion.theta().head(nt);

  // Noise direction (c, k) is theta_k e_k in component c; after lambda(u(x)) and
  // projection, its (d, i) coefficient is theta_k sum_j A(i,j) lambda_j(d,c) S(j,k).
  const Eigen::MatrixXd s_theta = space->synthesis() * theta.asDiagonal();
  Eigen::MatrixXd factor(n * r, n * r);
  Eigen::VectorXd lam(m);
  for (int d = 0; d < r; ++d)
    for (int c = 0; c < r; ++c) {
      for (int j = 0; j < m; ++j) lam(j) = nodal_lambda(d, j * r + c);
      const Eigen::MatrixXd blk = space->analysis() * lam.asDiagonal() * s_theta;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) factor(i * r + d, k * r + c) = blk(i, k);
    }
  return factor;
}

Eigen::MatrixXd noise_gram_nodal(const SpacePtr& space, const DiffusionModel& diffusion,
                                 const Eigen::MatrixXd& nodal_lambda) {
  const Eigen::MatrixXd f = noise_factor_nodal(space, diffusion, nodal_lambda);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(f.rows(), f.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(f);
  return gram.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd noise_gram(const Field& u, const DiffusionModel& diffusion) {
  return noise_gram_nodal(u.space(), diffusion, diffusion.nodal_lambda(u));
}

BlockCovariance lyapunov_solve(const Eigen::MatrixXd& g, const Eigen::MatrixXd& gram,
                               const SpacePtr& space, LyapunovReport* report) {
  const int r = space->n_components();
  const int n = space->n_modes();
  if (g.rows() != r || g.cols() != r) throw InvalidConfig("lyapunov_solve: G must be r x r");
  if (gram.rows() != n * r || gram.cols() != n * r)
    throw InvalidConfig("lyapunov_solve: gram must be (N r) x (N r)");

  // vec(G X + X G^T) = (I (x) G + G (x) I) vec(X), column-major vec.
  const int rr = r * r;
  Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(rr, rr);
  for (int a = 0; a < r; ++a) {
    kron.block(a * r, a * r, r, r) += g;
    for (int b = 0; b < r; ++b)
      kron.block(a * r, b * r, r, r) += g(a, b) * Eigen::MatrixXd::Identity(r, r);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(kron);
  const auto& sv = svd.singularValues();
  const double cond = sv(rr - 1) > 0.0 ? sv(0) / sv(rr - 1) : INFINITY;
  if (!(cond < 1e12)) {
    std::ostringstream os;
    os << "lyapunov_solve: Kronecker system ill-conditioned (condition estimate " << cond << ")";
    throw NumericError(os.str());
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kron);

  Eigen::MatrixXd rhs(rr, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::MatrixXd blk = gram.block(i * r, j * r, r, r);
      rhs.col(i * n + j) = Eigen::Map<const Eigen::VectorXd>(blk.data(), rr);
    }
  const Eigen::MatrixXd sol = lu.solve(rhs);

  Eigen::MatrixXd full(n * r, n * r);
  double max_res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::Map<const Eigen::MatrixXd> x(sol.col(i * n + j).data(), r, r);
      full.block(i * r, j * r, r, r) = x;
      const double res =
          (g * x + x * g.transpose() - gram.block(i * r, j * r, r, r)).cwiseAbs().maxCoeff();
      max_res = std::max(max_res, res);
    }
  full = 0.5 * (full + full.transpose()).eval();
  if (report) *report = {max_res, cond};
  return BlockCovariance(space, std::move(full));
}

// ---------------------------------------------------------------------------

QuadraticForm QuadraticForm::from(Eigen::MatrixXd q, Eigen::VectorXd b, double c) {
  if (q.rows() != q.cols() || b.size() != q.rows())
    throw InvalidConfig("quadratic form: inconsistent dimensions");
  QuadraticForm out;
  out.quad = 0.5 * (q + q.transpose());
  out.linear = std::move(b);
  out.constant = c;
  return out;
}

QuadraticForm QuadraticForm::linear_only(Eigen::VectorXd b, double c) {
  const auto n = b.size();
  return from(Eigen::MatrixXd::Zero(n, n), std::move(b), c);
}

QuadraticForm QuadraticForm::constant_only(int dim, double c) {
  return from(Eigen::MatrixXd::Zero(dim, dim), Eigen::VectorXd::Zero(dim), c);
}

double QuadraticForm::operator()(const Eigen::VectorXd& v) const {
  return v.dot(quad * v) + linear.dot(v) + constant;
}

Eigen::VectorXd QuadraticForm::gradient(const Eigen::VectorXd& v) const {
  return 2.0 * quad * v + linear;
}

// ---------------------------------------------------------------------------

OuKernel OuKernel::build(const Coefficients& co, const Field& u) {
  const DiffusionModel diffusion = co.diffusion_R(u);
  return OuKernel(u.space(), co.friction_R(u), noise_gram(u, diffusion));
}

OuKernel::OuKernel(SpacePtr space, Eigen::MatrixXd friction, Eigen::MatrixXd gram)
    : space_(std::move(space)), g_(std::move(friction)), gram_(std::move(gram)) {
  const Eigen::MatrixXd sym = 0.5 * (g_ + g_.transpose());
  if (!(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues()(0) > 0.0))
    throw InvalidConfig("ou kernel: friction must have a positive definite symmetric part");
  lambda_ = lyapunov_solve(g_, gram_, space_, &report_);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lambda_.full());
  if (es.info() != Eigen::Success) throw NumericError("ou kernel: eigendecomposition of Lambda failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
  const double scale = std::max(1.0, evals_.cwiseAbs().maxCoeff());
  if (evals_(0) < -1e-10 * scale) {
    std::ostringstream os;
    os << "ou kernel: Lambda has eigenvalue " << evals_(0) << " below the PSD repair threshold";
    throw NumericError(os.str());
  }
  evals_ = evals_.cwiseMax(0.0);
}

Eigen::MatrixXd OuKernel::factor() const {
  return evecs_ * evals_.cwiseSqrt().asDiagonal();
}

Eigen::MatrixXd OuKernel::decay(double t) const { return (-t * g_).exp(); }

Eigen::VectorXd OuKernel::propagate(const Eigen::VectorXd& v, double t) const {
  const int r = space_->n_components();
  const Eigen::MatrixXd e = decay(t);
  Eigen::VectorXd out(v.size());
  Eigen::Map<Eigen::MatrixXd>(out.data(), r, space_->n_modes()) =
      e * Eigen::Map<const Eigen::MatrixXd>(v.data(), r, space_->n_modes());
  return out;
}

Eigen::VectorXd OuKernel::drift(const Eigen::VectorXd& v) const {
  const int r = space_->n_components();
  Eigen::VectorXd out(v.size());
  Eigen::Map<Eigen::MatrixXd>(out.data(), r, space_->n_modes()) =
      g_ * Eigen::Map<const Eigen::MatrixXd>(v.data(), r, space_->n_modes());
  return out;
}

BlockCovariance OuKernel::transition_covariance(double t) const {
  const int r = space_->n_components();
  const int n = space_->n_modes();
  const Eigen::MatrixXd e = decay(t);
  const Eigen::MatrixXd& lam = lambda_.full();
  Eigen::MatrixXd c(n * r, n * r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      c.block(i * r, j * r, r, r) =
          lam.block(i * r, j * r, r, r) - e * lam.block(i * r, j * r, r, r) * e.transpose();
  return BlockCovariance(space_, std::move(c));
}

OuTransition ou_transition(const OuKernel& kernel, const Field& v, double t) {
  if (!(t >= 0.0)) throw InvalidConfig("ou_transition: t must be nonnegative");
  return {Field::from_flat(kernel.space(), kernel.propagate(v.flat(), t)),
          kernel.transition_covariance(t)};
}

Field invariant_sample(const OuKernel& kernel, const Eigen::VectorXd& standard_normals) {
  if (standard_normals.size() != kernel.space()->dim())
    throw InvalidConfig("invariant_sample: need N r standard normals");
  return Field::from_flat(kernel.space(), kernel.factor() * standard_normals);
}

double semigroup_on_quadratic(const OuKernel& kernel, const QuadraticForm& q, const Field& v,
                              double t) {
  const Eigen::VectorXd mean = kernel.propagate(v.flat(), t);
  const BlockCovariance c = kernel.transition_covariance(t);
  return q(mean) + (q.quad.cwiseProduct(c.full())).sum();
}

double generator_apply(const OuKernel& kernel, const QuadraticForm& q, const Field& v) {
  if (q.quad.rows() != kernel.space()->dim())
    throw InvalidConfig("generator_apply: functional dimension does not match the kernel");
  const Eigen::VectorXd x = v.flat();
  // Tr(D^2 q B)/2 with D^2 q = 2 Q.
  const double trace_term = q.quad.cwiseProduct(kernel.gram()).sum();
  return trace_term - kernel.drift(x).dot(q.gradient(x));
}

}  // namespace kramers
