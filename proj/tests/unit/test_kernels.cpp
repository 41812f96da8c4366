#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include "cgtrack/kernels.hpp"

using namespace cgtrack::kernels;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

FrustumParams random_frustum(std::mt19937& rng) {
  std::normal_distribution<double> g(0, 1);
  std::uniform_real_distribution<double> u(-2000, 2000);
  double a[3]{g(rng), g(rng), g(rng)};
  const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  return {{u(rng), u(rng), u(rng)}, {a[0] / n, a[1] / n, a[2] / n}, 40, 70, 3000};
}

}  // namespace

TEST_CASE("scalar containment on the axis and off it") {
  const FrustumParams f{{0, 0, 0}, {0, 0, 1}, 40, 70, 3000};
  const std::vector<double> x{0, 60, 54.9, 0, 0}, y{0, 0, 0, 0, 0}, z{1500, 1500, 1500, -1, 3001};
  std::vector<double> axial(5), lateral(5);
  std::vector<std::uint8_t> inside(5);
  scalar::frustum_containment(f, {x, y, z}, {axial, lateral, inside});
  CHECK(inside == std::vector<std::uint8_t>{1, 0, 1, 0, 0});
  CHECK(axial[1] == 1500);
  CHECK(lateral[1] == 60);
}

TEST_CASE("AVX2 containment is bit-identical to scalar") {
  if (!supported(Isa::avx2)) {
    MESSAGE("AVX2 unavailable; skipping");
    return;
  }
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-3000, 3000);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_frustum(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 67)(rng);
    std::vector<double> x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      z[i] = u(rng);
      // Put some points on the axis so the inside branch is exercised.
      if (i % 3 == 0) {
        const double t = u(rng) + 1000;
        x[i] = f.origin[0] + t * f.axis[0];
        y[i] = f.origin[1] + t * f.axis[1];
        z[i] = f.origin[2] + t * f.axis[2];
      }
    }
    std::vector<double> a1(n), l1(n), a2(n), l2(n);
    std::vector<std::uint8_t> i1(n), i2(n);
    scalar::frustum_containment(f, {x, y, z}, {a1, l1, i1});
    avx2::frustum_containment(f, {x, y, z}, {a2, l2, i2});
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(same_bits(a1[i], a2[i]));
      CHECK(same_bits(l1[i], l2[i]));
      CHECK(i1[i] == i2[i]);
    }
  }
}

TEST_CASE("AVX2 column dots are bit-identical to scalar") {
  if (!supported(Isa::avx2)) {
    MESSAGE("AVX2 unavailable; skipping");
    return;
  }
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 1000)(rng);
    std::vector<double> q(d), cols(d * n), o1(n), o2(n);
    for (auto& v : q) v = u(rng);
    for (auto& v : cols) v = u(rng);
    scalar::column_dots(q, cols, n, o1);
    avx2::column_dots(q, cols, n, o2);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(o1[i], o2[i]));
  }
}

TEST_CASE("dispatch honours the selected ISA") {
  const auto before = active_isa();
  set_active_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  if (supported(Isa::avx2)) {
    set_active_isa(Isa::avx2);
    CHECK(active_isa() == Isa::avx2);
  } else {
    CHECK_THROWS_AS(set_active_isa(Isa::avx2), std::invalid_argument);
  }
  set_active_isa(before);
}
