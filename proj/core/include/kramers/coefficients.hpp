#pragma once

// Coefficient triple (friction, forcing, diffusion) and its cutoff-truncated
// variants.
//
// The friction acts as [gamma(h) k](x) = g(h) k(x) for an r x r matrix g(h)
// that depends on h only through finitely many H^1 pairings.  Its derivative
// is therefore a finite sum of constant matrices times linear functionals of
// the direction, which is what LinearMatrixForm stores.

#include "kramers/spectral.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kramers {

/// z -> sum_k mats[k] * <weights[k], flat(z)>: a linear map from fields to r x r matrices.
struct LinearMatrixForm {
  std::vector<Eigen::MatrixXd> mats;
  std::vector<Eigen::VectorXd> weights;

  Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  Eigen::MatrixXd apply(const Field& z) const { return apply(z.flat_view()); }
  bool empty() const noexcept { return mats.empty(); }
};

enum class FrictionKind { constant, scalar_nonlocal, matrix_nonlocal };

/// g(u) = G0 + sum_k A_k tanh(<u, w_k>_{H^1}).
class FrictionModel {
 public:
  FrictionModel() = default;
  /// gamma0 <= 0 selects the certified margin lambda_min(sym G0) - sum_k ||A_k||_2.
  FrictionModel(Eigen::MatrixXd base, std::vector<Eigen::MatrixXd> perturbations,
                std::vector<Field> probes, double gamma0 = 0.0);

  static FrictionModel constant(Eigen::MatrixXd base, double gamma0 = 0.0);

  FrictionKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return static_cast<int>(base_.rows()); }
  double gamma0() const noexcept { return gamma0_; }
  /// Uniform bound on the spectral norm of g(h).
  double sup_norm() const noexcept { return sup_norm_; }
  /// Uniform lower bound on the symmetric part of g^{-1}(h): gamma0 / sup_norm^2.
  double inverse_ellipticity() const noexcept { return gamma0_ / (sup_norm_ * sup_norm_); }

  const Eigen::MatrixXd& base() const noexcept { return base_; }
  const std::vector<Eigen::MatrixXd>& perturbations() const noexcept { return perturbations_; }
  const std::vector<Field>& probes() const noexcept { return probes_; }

  Eigen::MatrixXd value(const Field& u) const;
  Eigen::MatrixXd derivative(const Field& u, const Field& k) const;
  Eigen::MatrixXd second_derivative(const Field& u, const Field& k1, const Field& k2) const;
  /// D g(u) as a linear form in the direction.
  LinearMatrixForm derivative_form(const Field& u) const;

 private:
  FrictionKind kind_ = FrictionKind::constant;
  Eigen::MatrixXd base_;
  std::vector<Eigen::MatrixXd> perturbations_;
  std::vector<Field> probes_;
  std::vector<Eigen::VectorXd> probe_weights_;  // alpha_i * w_k, flattened
  double gamma0_ = 0.0;
  double sup_norm_ = 0.0;
};

/// D g^{-1}(u) k = -g^{-1}(u) [D g(u) k] g^{-1}(u), for any friction matrix and derivative.
Eigen::MatrixXd inverse_derivative(const Eigen::MatrixXd& g, const Eigen::MatrixXd& dg);
/// Applies the same identity termwise to a derivative form.
LinearMatrixForm inverse_derivative_form(const Eigen::MatrixXd& g, const LinearMatrixForm& dg);

/// Pointwise map xi -> f(xi) on R^r, evaluated column-wise on nodal values.
struct NemytskiiMap {
  std::string name;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> nodal;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  /// Second directional derivative D^2 f(xi)[eta, eta].
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> second;
  double lipschitz = 0.0;

  static NemytskiiMap zero(int r);
  static NemytskiiMap identity(int r);
  /// Componentwise sin.
  static NemytskiiMap sine(int r);
  /// xi / (1 + |xi|^2); bounded with two bounded derivatives.
  static NemytskiiMap saturating(int r);
};

Field nemytskii_apply(const NemytskiiMap& map, const Field& u);

/// sigma(u) acting on Q-weighted noise: pointwise multiplication by lambda(u(x)).
class DiffusionModel {
 public:
  using PointMap = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  DiffusionModel() = default;
  DiffusionModel(std::string name, int r, PointMap lambda, Eigen::VectorXd theta,
                 double amplitude = 1.0);

  static DiffusionModel identity(int r, Eigen::VectorXd theta);
  static DiffusionModel zero(int r, Eigen::VectorXd theta);
  /// lambda(xi) = I + slope * diag(tanh xi_1, ..., tanh xi_r).
  static DiffusionModel tanh_diagonal(int r, Eigen::VectorXd theta, double slope);
  /// lambda(xi) = diag(1, 1/(1 + xi_1^2), 1, ...).
  static DiffusionModel rational_diagonal(int r, Eigen::VectorXd theta);

  /// theta_i = i^{-decay}, i = 1..n.
  static Eigen::VectorXd power_law_weights(int n, double decay);

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return r_; }
  const Eigen::VectorXd& theta() const noexcept { return theta_; }
  double amplitude() const noexcept { return amplitude_; }
  DiffusionModel scaled(double factor) const;

  /// amplitude * lambda(xi).
  Eigen::MatrixXd lambda(const Eigen::VectorXd& xi) const;
  /// lambda evaluated at every collocation node of u, stored side by side (r x (r M)).
  Eigen::MatrixXd nodal_lambda(const Field& u) const;

  /// Partial sums of sum theta_i^2 and sum theta_i^2 alpha_i^{1 + 1/6}.
  std::pair<double, double> trace_sums(const SpectralSpace& space) const;

 private:
  std::string name_;
  int r_ = 0;
  PointMap lambda_;
  Eigen::VectorXd theta_;
  double amplitude_ = 1.0;
};

/// sigma(u) Q applied to a standard-normal coefficient array zeta (r x N):
/// lambda(u(.)) sum_{c,i} theta_i zeta_{c,i} e_i e_c, projected onto the basis.
Field sigma_apply(const DiffusionModel& model, const Field& u, const Eigen::MatrixXd& zeta);
/// Same with lambda already evaluated at the nodes of u.
Field sigma_apply_nodal(const DiffusionModel& model, const Eigen::MatrixXd& nodal_lambda,
                        const SpacePtr& space, const Eigen::MatrixXd& zeta);
/// ||sigma(u)||^2 in L_2(H_Q, H): sum over noise directions of ||lambda(u) theta_i e_i e_c||_H^2.
double sigma_hilbert_schmidt_squared(const DiffusionModel& model, const Field& u);

/// Smooth ramp Phi_R of the H^{rbar} norm.
class CutoffModel {
 public:
  /// Validates rbar in (max(2 sbar/(1+sbar), 2 kappa_bar - 3, varrho), 1).
  CutoffModel(double radius, double rbar = 0.95, double sbar = 0.5, double kappa_bar = 1.75,
              double varrho = 0.9);

  double radius() const noexcept { return radius_; }
  double rbar() const noexcept { return rbar_; }

  /// 1 for t <= R, 0 for t >= R + 1, cubic smoothstep 1 - 3s^2 + 2s^3 in between.
  double ramp(double t) const;
  double ramp_derivative(double t) const;
  double factor(const Field& u) const { return ramp(sobolev_norm(u, rbar_)); }

 private:
  double radius_;
  double rbar_;
};

/// Everything the two integrators and the cell problem need, with optional truncation.
struct Coefficients {
  FrictionModel friction;
  NemytskiiMap forcing;
  DiffusionModel diffusion;
  std::optional<CutoffModel> cutoff;

  double cutoff_factor(const Field& u) const { return cutoff ? cutoff->factor(u) : 1.0; }

  /// g_R(u) = gamma0 I + Phi_R (g(u) - gamma0 I).
  Eigen::MatrixXd friction_R(const Field& u) const;
  /// D g_R(u), including the derivative of the ramp through ||u||_{H^rbar}.
  LinearMatrixForm friction_derivative_form_R(const Field& u) const;
  Eigen::MatrixXd friction_derivative_R(const Field& u, const Field& k) const;
  /// D g_R^{-1}(u) as a linear form.
  LinearMatrixForm inverse_friction_derivative_form_R(const Field& u) const;

  Field forcing_R(const Field& u) const;
  /// Phi_R * sigma(u) Q zeta.
  Field sigma_R(const Field& u, const Eigen::MatrixXd& zeta) const;
  /// Diffusion with the ramp folded into its amplitude at u.
  DiffusionModel diffusion_R(const Field& u) const;
};

struct ModelParams {
  /// Scale of A_1 = diag(a, -a).
  double friction_perturbation = 0.5;
  double noise_amplitude = 1.0;
  double diffusion_slope = 0.3;
  /// 0 disables truncation.
  double cutoff_radius = 0.0;
};

/// Built-in r = 2 models sharing G0 = [[2, .5], [.5, 3]], theta_i = i^-2:
///   default            g(u) = G0 + A_1 tanh(<u, w_1>_{H^1}), w_1 = e_1 in every component,
///                      saturating forcing, tanh-diagonal diffusion;
///   constant_friction  same forcing and diffusion with g = G0;
///   deterministic      g = G0, f = 0, sigma = 0.
Coefficients model_catalog(const std::string& name, const SpacePtr& space, const ModelParams& params = {});
Coefficients default_coefficients(const SpacePtr& space);

}  // namespace kramers
