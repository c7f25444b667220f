#pragma once

// Noise-induced drift S(u) = E[(D g^{-1}(u) z) z], z ~ N(0, Lambda_u).
//
// Writing D g^{-1}(u)[z] = sum_k C_k <l_k, z> (a LinearMatrixForm), the
// expectation is a contraction of Lambda against the weights:
//   S_i = sum_k C_k (Lambda l_k)_i,
// which is the trace route.  The spectral route sums over the eigenpairs of
// Lambda instead; Monte-Carlo and the ergodic OU average are test oracles.

#include "kramers/coefficients.hpp"
#include "kramers/ou.hpp"
#include "kramers/spectral.hpp"

#include <cstdint>
#include <optional>

namespace kramers {

enum class DriftMethod { spectral, trace, monte_carlo, ergodic };

const char* to_string(DriftMethod m);
DriftMethod parse_drift_method(const std::string& s);

struct DriftResult {
  Field value;
  DriftMethod method = DriftMethod::spectral;
  /// Root sum of squared per-coefficient standard errors; 0 for exact routes.
  double error_estimate = 0.0;
  /// Per-coefficient standard errors (empty for exact routes).
  Eigen::MatrixXd standard_errors;
  /// Standard error of <value, direction> when a projection direction was supplied.
  double projection_error = 0.0;
  std::int64_t sample_count = 0;
};

/// Sum over eigenpairs (lambda_m, phi_m) of Lambda of lambda_m (D g_R^{-1}(u) phi_m) phi_m.
/// Eigenvalues below 1e-14 lambda_max are dropped.
DriftResult drift_spectral(const Coefficients& co, const Field& u, const OuKernel& kernel);

/// sum_k C_k (Lambda l_k), same value as drift_spectral at O(K N r) extra cost.
DriftResult drift_trace(const Coefficients& co, const Field& u, const OuKernel& kernel);

struct MonteCarloOptions {
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 1;
  std::uint32_t stream = 7;
  int batch = 4096;
  /// Optional direction d: the result carries the standard error of <S, d>.
  std::optional<Field> projection;
};

DriftResult drift_monte_carlo(const Coefficients& co, const Field& u, const OuKernel& kernel,
                              const MonteCarloOptions& opt);

struct ErgodicOptions {
  /// Sampling interval of the exact OU chain.
  double step = 0.25;
  double burn_in = 0.0;  // 0 selects 10 / gamma0
  std::int64_t n_steps = 200000;
  int n_batches = 50;
  std::uint64_t seed = 1;
  std::uint32_t stream = 11;
  std::optional<Field> projection;
};

/// Time average of (D g_R^{-1}(u) y) y along one exact-kernel OU trajectory; batch-means errors.
DriftResult stationary_process_oracle(const Coefficients& co, const Field& u,
                                      const OuKernel& kernel, const ErgodicOptions& opt);

/// Convenience: kernel at u, then the requested exact route.
Field noise_drift(const Coefficients& co, const Field& u, DriftMethod method = DriftMethod::trace);

/// ||S(u1) - S(u2)||_{H^1} / [(1 + ||u1||^2_{H^2} + ||u2||^2_{H^2}) ||u1 - u2||_{H^1}].
double drift_lipschitz_probe(const Coefficients& co, const Field& u1, const Field& u2);

/// Agreement statistics between an estimate and a reference with combined standard errors.
struct AgreementStats {
  double norm_ratio = 0.0;      // ||a - b|| / sqrt(sum se^2)
  double projection_z = 0.0;    // |<a - b, d>| / se_d
};

/// Both results must carry errors for the same projection direction d.
AgreementStats agreement(const DriftResult& a, const DriftResult& b, const Field& direction);

}  // namespace kramers
