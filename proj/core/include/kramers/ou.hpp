#pragma once

// Frozen cell problem dy = -g(u) y dt + sigma(u) dW^Q in spectral coordinates.
//
// With the flattened layout (index i * r + c) the drift is I_N (x) G, so the
// invariant covariance Lambda decouples into N^2 independent r x r Sylvester
// problems  G Lambda_ij + Lambda_ij G^T = B_ij.  All pairings below are the H
// (Euclidean coefficient) pairing.

#include "kramers/coefficients.hpp"
#include "kramers/spectral.hpp"

#include <Eigen/Dense>

namespace kramers {

/// (N r) x (N r) symmetric matrix viewed as N x N blocks of size r x r.
class BlockCovariance {
 public:
  BlockCovariance() = default;
  BlockCovariance(SpacePtr space, Eigen::MatrixXd full);

  const SpacePtr& space() const noexcept { return space_; }
  const Eigen::MatrixXd& full() const noexcept { return full_; }
  int block_size() const { return space_->n_components(); }
  int n_blocks() const { return space_->n_modes(); }
  Eigen::MatrixXd block(int i, int j) const;

  double trace_h() const { return full_.trace(); }
  /// sum_{i,c} alpha_i Lambda[(i,c),(i,c)].
  double trace_h1() const;
  double min_eigenvalue() const;
  double symmetry_defect() const;

 private:
  SpacePtr space_;
  Eigen::MatrixXd full_;
};

/// Gram matrix [sigma(u) Q][sigma(u) Q]^* in spectral coordinates.
Eigen::MatrixXd noise_gram(const Field& u, const DiffusionModel& diffusion);
/// Same with lambda already sampled at the nodes of u.
Eigen::MatrixXd noise_gram_nodal(const SpacePtr& space, const DiffusionModel& diffusion,
                                 const Eigen::MatrixXd& nodal_lambda);
/// Square root factor F of the gram, B = F F^T: column (k, c) is the noise direction (c, k).
Eigen::MatrixXd noise_factor_nodal(const SpacePtr& space, const DiffusionModel& diffusion,
                                   const Eigen::MatrixXd& nodal_lambda);

struct LyapunovReport {
  double max_residual = 0.0;
  double condition = 0.0;
};

/// Solves G X_ij + X_ij G^T = B_ij for every block through the r^2 x r^2 Kronecker system.
BlockCovariance lyapunov_solve(const Eigen::MatrixXd& g, const Eigen::MatrixXd& gram,
                               const SpacePtr& space, LyapunovReport* report = nullptr);

/// v^T Q v + b^T v + c on flattened coefficients; Q is stored symmetrized.
struct QuadraticForm {
  Eigen::MatrixXd quad;
  Eigen::VectorXd linear;
  double constant = 0.0;

  static QuadraticForm from(Eigen::MatrixXd q, Eigen::VectorXd b, double c);
  static QuadraticForm linear_only(Eigen::VectorXd b, double c = 0.0);
  static QuadraticForm constant_only(int dim, double c);

  double operator()(const Eigen::VectorXd& v) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& v) const;
};

class OuKernel {
 public:
  /// Kernel of the truncated cell problem at u: friction g_R(u), noise sigma_R(u) Q.
  static OuKernel build(const Coefficients& co, const Field& u);
  OuKernel(SpacePtr space, Eigen::MatrixXd friction, Eigen::MatrixXd gram);

  const SpacePtr& space() const noexcept { return space_; }
  const Eigen::MatrixXd& friction() const noexcept { return g_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  const BlockCovariance& covariance() const noexcept { return lambda_; }
  const LyapunovReport& lyapunov_report() const noexcept { return report_; }

  /// Eigenpairs of Lambda with negative round-off clipped to zero (ascending).
  const Eigen::VectorXd& eigenvalues() const noexcept { return evals_; }
  const Eigen::MatrixXd& eigenvectors() const noexcept { return evecs_; }
  /// F with F F^T = Lambda.
  Eigen::MatrixXd factor() const;

  /// e^{-G t} applied blockwise to a flattened vector.
  Eigen::VectorXd propagate(const Eigen::VectorXd& v, double t) const;
  /// I_N (x) G applied to a flattened vector.
  Eigen::VectorXd drift(const Eigen::VectorXd& v) const;
  /// Covariance of y(t) started from a point: Lambda - e^{-Gt} Lambda e^{-G^T t}.
  BlockCovariance transition_covariance(double t) const;
  /// e^{-G t} as an r x r matrix.
  Eigen::MatrixXd decay(double t) const;

 private:
  SpacePtr space_;
  Eigen::MatrixXd g_;
  Eigen::MatrixXd gram_;
  BlockCovariance lambda_;
  LyapunovReport report_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXd evecs_;
};

struct OuTransition {
  Field mean;
  BlockCovariance covariance;
};

OuTransition ou_transition(const OuKernel& kernel, const Field& v, double t);

/// F xi for a standard-normal vector xi of length N r.
Field invariant_sample(const OuKernel& kernel, const Eigen::VectorXd& standard_normals);

/// E q(y(t)) for y(0) = v: q(mean_t) + Tr(Q C_t).
double semigroup_on_quadratic(const OuKernel& kernel, const QuadraticForm& q, const Field& v, double t);

/// Kolmogorov operator of the cell problem on a quadratic functional:
/// (1/2) Tr(D^2 q B) - <(I (x) G) v, Dq(v)>.
double generator_apply(const OuKernel& kernel, const QuadraticForm& q, const Field& v);

}  // namespace kramers
