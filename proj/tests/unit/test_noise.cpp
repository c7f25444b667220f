#include "kramers/errors.hpp"
#include "kramers/noise.hpp"

#include <doctest.h>

#include <cmath>

using namespace kramers;

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("draws are pure functions of their key") {
  const NoisePath a(42, 1e-3, 1.0, 2, 8), b(42, 1e-3, 1.0, 2, 8);
  for (std::int64_t n : {0, 1, 57, 999})
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < 8; ++i) CHECK(a.draw(n, c, i) == b.draw(n, c, i));
  CHECK(a.checksum() == b.checksum());
  CHECK(a.checksum() != NoisePath(43, 1e-3, 1.0, 2, 8).checksum());
}

TEST_CASE("a double increment is the exact sum of its halves") {
  const NoisePath p(7, 1e-3, 1.0, 2, 16);
  for (std::int64_t n = 0; n < 998; n += 37) {
    CHECK(p.increment(n, 2) == p.increment(n) + p.increment(n + 1));
    const Eigen::MatrixXd four = p.increment(n, 4);
    CHECK((four - (p.increment(n, 2) + p.increment(n + 2, 2))).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("increment variance equals the step") {
  const double dt = 1e-3;
  const std::int64_t n = 100000;
  const NoisePath p(5, dt, n * dt, 2, 4);
  double s1 = 0, s2 = 0, s4 = 0;
  for (std::int64_t k = 0; k < n; ++k) {
    const double x = p.increment(k)(1, 2);
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  const double var = s2 / n;
  const double se = std::sqrt((s4 / n - var * var) / n);
  CHECK(std::abs(var - dt) < 3 * se);
  CHECK(std::abs(s1 / n) < 3 * std::sqrt(dt / n));
}

TEST_CASE("paths with different seeds are uncorrelated") {
  const std::int64_t n = 100000;
  const NoisePath a(1, 1.0, n, 1, 1), b(2, 1.0, n, 1, 1);
  double sab = 0, saa = 0, sbb = 0;
  for (std::int64_t k = 0; k < n; ++k) {
    const double x = a.draw(k, 0, 0), y = b.draw(k, 0, 0);
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  CHECK(std::abs(sab / std::sqrt(saa * sbb)) < 0.01);
}

TEST_CASE("streams and normal fills") {
  KeyedNormalStream s(9, 3), t(9, 3), u(9, 4);
  Eigen::MatrixXd a(3, 5), b(3, 5);
  s.fill(a);
  t.fill(b);
  CHECK(a == b);
  CHECK(s.position() == 15);
  CHECK(u() != KeyedNormalStream(9, 3)());
}

TEST_CASE("windows outside the horizon are rejected") {
  const NoisePath p(1, 0.1, 1.0, 1, 2);
  CHECK(p.n_steps() == 10);
  CHECK_NOTHROW(p.increment(9));
  CHECK_THROWS_AS(p.increment(9, 2), InvalidConfig);
  CHECK_THROWS_AS(p.increment(-1), InvalidConfig);
  CHECK_THROWS_AS(NoisePath(1, 0.0, 1.0, 1, 1), InvalidConfig);
}
