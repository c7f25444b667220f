#include "kramers/spectral.hpp"

#include "kramers/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace kramers {

SpacePtr SpectralSpace::build(double length, int n_modes, int n_components) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw InvalidConfig("spectral space: length must be positive, got " + std::to_string(length));
  if (n_modes < 1) throw InvalidConfig("spectral space: n_modes must be >= 1");
  if (n_components < 1) throw InvalidConfig("spectral space: n_components must be >= 1");

  auto s = std::shared_ptr<SpectralSpace>(new SpectralSpace());
  s->length_ = length;
  s->n_modes_ = n_modes;
  s->n_components_ = n_components;
  s->collocation_size_ = 2 * n_modes;

  const double pi = std::numbers::pi;
  s->eigenvalues_.resize(n_modes);
  for (int i = 0; i < n_modes; ++i) {
    const double k = (i + 1) * pi / length;
    s->eigenvalues_(i) = k * k;
  }

  const int m = s->collocation_size_;
  s->nodes_.resize(m);
  for (int j = 0; j < m; ++j) s->nodes_(j) = (j + 1) * length / (m + 1);

  // Sample on the DST-I grid; the discrete sine orthogonality
  // sum_j sin(i pi j/(M+1)) sin(k pi j/(M+1)) = (M+1)/2 delta_ik makes the
  // scaled transpose an exact left inverse for i, k <= M.
  const double amp = std::sqrt(2.0 / length);
  s->synthesis_.resize(m, n_modes);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n_modes; ++i)
      s->synthesis_(j, i) = amp * std::sin(static_cast<double>((i + 1) * (j + 1)) * pi / (m + 1));
  s->analysis_ = (length / (m + 1)) * s->synthesis_.transpose();
  return s;
}

double SpectralSpace::eigenfunction(int mode, double x) const {
  return std::sqrt(2.0 / length_) * std::sin((mode + 1) * std::numbers::pi * x / length_);
}

Eigen::VectorXd SpectralSpace::weights(double delta) const {
  return eigenvalues_.array().pow(delta).matrix();
}

Field::Field(SpacePtr space) : space_(std::move(space)) {
  coeffs_ = Eigen::MatrixXd::Zero(space_->n_components(), space_->n_modes());
}

Field::Field(SpacePtr space, Eigen::MatrixXd coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != space_->n_components() || coeffs_.cols() != space_->n_modes())
    throw InvalidConfig("field: coefficient matrix must be r x N");
}

Field Field::basis(const SpacePtr& space, int component, int mode) {
  Field f(space);
  f.coeffs_(component, mode) = 1.0;
  return f;
}

Field Field::from_flat(const SpacePtr& space, const Eigen::VectorXd& flat) {
  if (flat.size() != space->dim()) throw InvalidConfig("field: flat vector has wrong length");
  return Field(space, Eigen::Map<const Eigen::MatrixXd>(flat.data(), space->n_components(),
                                                        space->n_modes()));
}

Eigen::VectorXd Field::flat() const {
  return Eigen::Map<const Eigen::VectorXd>(coeffs_.data(), coeffs_.size());
}

Eigen::Map<const Eigen::VectorXd> Field::flat_view() const {
  return Eigen::Map<const Eigen::VectorXd>(coeffs_.data(), coeffs_.size());
}

Field Field::laplacian() const {
  Field out(*this);
  out.coeffs_ = -(coeffs_.array().rowwise() * space_->eigenvalues().transpose().array()).matrix();
  return out;
}

void Field::check_compatible(const Field& other) const {
  if (coeffs_.rows() != other.coeffs_.rows() || coeffs_.cols() != other.coeffs_.cols())
    throw InvalidConfig("field: incompatible spaces");
}

Field& Field::operator+=(const Field& other) {
  check_compatible(other);
  coeffs_ += other.coeffs_;
  return *this;
}

Field& Field::operator-=(const Field& other) {
  check_compatible(other);
  coeffs_ -= other.coeffs_;
  return *this;
}

Field& Field::operator*=(double a) {
  coeffs_ *= a;
  return *this;
}

double sobolev_norm_squared(const Field& h, double delta) {
  const Eigen::VectorXd w = h.space()->weights(delta);
  return (h.coeffs().array().square().rowwise() * w.transpose().array()).sum();
}

double sobolev_norm(const Field& h, double delta) {
  return std::sqrt(sobolev_norm_squared(h, delta));
}

double sobolev_inner(const Field& a, const Field& b, double delta) {
  const Eigen::VectorXd w = a.space()->weights(delta);
  return ((a.coeffs().array() * b.coeffs().array()).rowwise() * w.transpose().array()).sum();
}

Eigen::MatrixXd to_collocation(const Field& h) {
  return h.coeffs() * h.space()->synthesis().transpose();
}

Field from_collocation(const Eigen::MatrixXd& values, const SpacePtr& space) {
  if (values.rows() != space->n_components() || values.cols() != space->collocation_size())
    throw InvalidConfig("from_collocation: expected " + std::to_string(space->n_components()) +
                        " x " + std::to_string(space->collocation_size()) + " values");
  return Field(space, values * space->analysis().transpose());
}

}  // namespace kramers
