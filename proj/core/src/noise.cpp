#include "kramers/noise.hpp"

#include "kramers/errors.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

namespace kramers {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// 53-bit uniform in (0, 1] from two 32-bit words.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
  return (static_cast<double>(bits & ((1ull << 53) - 1)) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

double keyed_normal(std::uint64_t seed, std::uint64_t a, std::uint32_t b, std::uint32_t stream) {
  const auto out = philox4x32({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), b,
                               stream},
                              {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const double u1 = to_unit(out[0], out[1]);
  const double u2 = to_unit(out[2], out[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void KeyedNormalStream::fill(Eigen::Ref<Eigen::MatrixXd> out) {
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = (*this)();
}

NoisePath::NoisePath(std::uint64_t seed, double base_dt, double horizon, int n_components,
                     int n_modes)
    : seed_(seed), base_dt_(base_dt), horizon_(horizon), r_(n_components), n_(n_modes) {
  if (!(base_dt > 0.0)) throw InvalidConfig("noise path: base_dt must be positive");
  if (!(horizon >= 0.0)) throw InvalidConfig("noise path: horizon must be nonnegative");
  if (n_components < 1 || n_modes < 1) throw InvalidConfig("noise path: empty noise dimension");
  n_steps_ = static_cast<std::int64_t>(std::llround(horizon / base_dt));
  if (std::abs(n_steps_ * base_dt - horizon) > 1e-9 * std::max(1.0, horizon))
    throw InvalidConfig("noise path: horizon must be an integer multiple of base_dt");
}

double NoisePath::draw(std::int64_t n, int component, int mode) const {
  return keyed_normal(seed_, static_cast<std::uint64_t>(n),
                      static_cast<std::uint32_t>(mode * r_ + component), 0);
}

Eigen::MatrixXd NoisePath::increment(std::int64_t n, int multiple) const {
  if (multiple < 1 || n < 0 || n + multiple > n_steps_)
    throw InvalidConfig("noise path: window [" + std::to_string(n) + ", " +
                        std::to_string(n + multiple) + ") outside horizon of " +
                        std::to_string(n_steps_) + " steps");
  // Scaling each draw before accumulating makes a two-step increment the exact
  // floating-point sum of its two one-step halves.
  const double scale = std::sqrt(base_dt_);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(r_, n_);
  for (int k = 0; k < multiple; ++k)
    for (int i = 0; i < n_; ++i)
      for (int c = 0; c < r_; ++c) out(c, i) += scale * draw(n + k, c, i);
  return out;
}

std::uint64_t NoisePath::checksum(std::int64_t n_check) const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  const std::int64_t upto = std::min(n_check, n_steps_);
  for (std::int64_t n = 0; n < upto; ++n)
    for (int i = 0; i < n_; ++i)
      for (int c = 0; c < r_; ++c) {
        const double z = draw(n, c, i);
        std::uint64_t bits;
        std::memcpy(&bits, &z, sizeof bits);
        for (int b = 0; b < 8; ++b) {
          h ^= (bits >> (8 * b)) & 0xffu;
          h *= 1099511628211ull;
        }
      }
  return h;
}

}  // namespace kramers
