#pragma once

// Dirichlet-Laplacian eigenbasis on (0, length), fractional Sobolev norms and
// the sine-collocation transform pair used for pointwise (Nemytskii) maps.
//
// A field with r components is stored as an r x N coefficient matrix; entry
// (c, i) is the coefficient of component c against e_{i+1}.  When flattened
// (column-major) the index of (c, i) is i * r + c, so the r x r blocks of any
// (N r) x (N r) operator are indexed by mode pairs.

#include <Eigen/Dense>

#include <cstddef>
#include <memory>

namespace kramers {

class SpectralSpace;
using SpacePtr = std::shared_ptr<const SpectralSpace>;

class SpectralSpace {
 public:
  static SpacePtr build(double length, int n_modes, int n_components);

  double length() const noexcept { return length_; }
  int n_modes() const noexcept { return n_modes_; }
  int n_components() const noexcept { return n_components_; }
  /// Total number of scalar degrees of freedom, N * r.
  int dim() const noexcept { return n_modes_ * n_components_; }
  int collocation_size() const noexcept { return collocation_size_; }

  /// alpha_i = (i pi / length)^2 for i = 1..N (stored 0-based).
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  double eigenvalue(int mode) const { return eigenvalues_(mode); }

  /// Interior collocation nodes x_j = j length / (M + 1), j = 1..M.
  const Eigen::VectorXd& nodes() const noexcept { return nodes_; }

  /// e_{i+1}(x) = sqrt(2/length) sin((i+1) pi x / length).
  double eigenfunction(int mode, double x) const;

  /// M x N matrix of eigenfunction samples at the collocation nodes.
  const Eigen::MatrixXd& synthesis() const noexcept { return synthesis_; }
  /// N x M discrete projection; analysis() * synthesis() == I_N.
  const Eigen::MatrixXd& analysis() const noexcept { return analysis_; }

  /// alpha_i^delta per mode.
  Eigen::VectorXd weights(double delta) const;

 private:
  SpectralSpace() = default;

  double length_ = 0.0;
  int n_modes_ = 0;
  int n_components_ = 0;
  int collocation_size_ = 0;
  Eigen::VectorXd eigenvalues_;
  Eigen::VectorXd nodes_;
  Eigen::MatrixXd synthesis_;
  Eigen::MatrixXd analysis_;
};

class Field {
 public:
  Field() = default;
  explicit Field(SpacePtr space);
  Field(SpacePtr space, Eigen::MatrixXd coeffs);

  static Field zero(const SpacePtr& space) { return Field(space); }
  /// Unit coefficient on (component, mode), i.e. e_{mode+1} in that component.
  static Field basis(const SpacePtr& space, int component, int mode);
  /// Field from a flattened coefficient vector (index i * r + c).
  static Field from_flat(const SpacePtr& space, const Eigen::VectorXd& flat);

  const SpacePtr& space() const noexcept { return space_; }
  const Eigen::MatrixXd& coeffs() const noexcept { return coeffs_; }
  Eigen::MatrixXd& coeffs() noexcept { return coeffs_; }
  double operator()(int component, int mode) const { return coeffs_(component, mode); }
  double& operator()(int component, int mode) { return coeffs_(component, mode); }

  Eigen::VectorXd flat() const;
  Eigen::Map<const Eigen::VectorXd> flat_view() const;
  bool all_finite() const { return coeffs_.allFinite(); }

  /// Applies the Laplacian: mode i is multiplied by -alpha_i.
  Field laplacian() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator*(Field a, double s) { return a *= s; }

 private:
  void check_compatible(const Field& other) const;

  SpacePtr space_;
  Eigen::MatrixXd coeffs_;
};

/// (sum_{c,i} alpha_i^delta coeffs(c,i)^2)^{1/2}.
double sobolev_norm(const Field& h, double delta);
double sobolev_norm_squared(const Field& h, double delta);
/// sum_{c,i} alpha_i^delta a(c,i) b(c,i).
double sobolev_inner(const Field& a, const Field& b, double delta);

/// r x M matrix of field values at the collocation nodes.
Eigen::MatrixXd to_collocation(const Field& h);
/// Projects r x M nodal values onto the first N modes.
Field from_collocation(const Eigen::MatrixXd& values, const SpacePtr& space);

}  // namespace kramers
