#pragma once

#include <Eigen/Dense>

#include <vector>

namespace kramers {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Linear-interpolation quantile (type 7) of an unsorted sample; q in [0, 1].
double quantile(std::vector<double> xs, double q);
double median(std::vector<double> xs);
double interquartile_range(const std::vector<double>& xs);

/// Trapezoid rule for samples y at abscissae t.
double trapezoid(const std::vector<double>& t, const std::vector<double>& y);

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace kramers
