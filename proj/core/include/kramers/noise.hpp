#pragma once

// Keyed Gaussian increments for the cylindrical Q-Wiener process.  Each draw is
// a pure function of (seed, step, component, mode) through Philox4x32-10, so
// integrators running at different step sizes consume one logical path.

#include <Eigen/Dense>

#include <array>
#include <cstdint>

namespace kramers {

/// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal keyed on (seed, a, b, stream); Box-Muller on one Philox block.
double keyed_normal(std::uint64_t seed, std::uint64_t a, std::uint32_t b, std::uint32_t stream = 0);

/// Stateless counter-driven normal stream for Monte-Carlo estimators.
class KeyedNormalStream {
 public:
  KeyedNormalStream(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}
  double operator()() { return keyed_normal(seed_, counter_++, 0, stream_); }
  void fill(Eigen::Ref<Eigen::MatrixXd> out);
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint32_t stream_;
  std::uint64_t counter_ = 0;
};

class NoisePath {
 public:
  NoisePath(std::uint64_t seed, double base_dt, double horizon, int n_components, int n_modes);

  std::uint64_t seed() const noexcept { return seed_; }
  double base_dt() const noexcept { return base_dt_; }
  double horizon() const noexcept { return horizon_; }
  std::int64_t n_steps() const noexcept { return n_steps_; }
  int n_components() const noexcept { return r_; }
  int n_modes() const noexcept { return n_; }

  /// Standard normal zeta_{n,c,i} of base step n.
  double draw(std::int64_t n, int component, int mode) const;
  /// Brownian increment over base steps [n, n + multiple): r x N, variance multiple * base_dt.
  Eigen::MatrixXd increment(std::int64_t n, int multiple = 1) const;
  /// Order-sensitive hash of the first n_check increments, for coupling logs.
  std::uint64_t checksum(std::int64_t n_check = 64) const;

 private:
  std::uint64_t seed_;
  double base_dt_;
  double horizon_;
  std::int64_t n_steps_;
  int r_;
  int n_;
};

}  // namespace kramers
