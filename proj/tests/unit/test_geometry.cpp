#include "doctest.h"

#include <cmath>
#include <random>

#include "../support/scenes.hpp"
#include "cgtrack/geometry.hpp"
#include "cgtrack/kernels.hpp"

using namespace cgtrack;
using namespace cgtrack::geometry;

using namespace scenes;

TEST_CASE("radius interpolates from near to far") {
  const auto f = make_frustum(Vec3{0, 0, 0}, Vec3{0, 0, 1});
  CHECK(f.radius_at(0) == 40);
  CHECK(f.radius_at(1500) == 55);
  CHECK(f.radius_at(3000) == 70);
}

TEST_CASE("60 mm off axis at 1500 mm depth is outside the 55 mm radius") {
  const auto f = make_frustum(Vec3{0, 0, 0}, Vec3{0, 0, 1});
  const auto c = contains(f, {60, 0, 1500});
  CHECK_FALSE(c.inside);
  CHECK(c.axial == doctest::Approx(1500));
  CHECK(c.lateral == doctest::Approx(60));
  CHECK(contains(f, {0, 0, 1500}).inside);
  CHECK(contains(f, {55, 0, 1500}).inside);
  CHECK_FALSE(contains(f, {0, 0, -1}).inside);
  CHECK_FALSE(contains(f, {0, 0, 3000.5}).inside);
}

TEST_CASE("directions are normalized within tolerance and rejected beyond it") {
  CHECK(norm(make_frustum(Vec3{0, 0, 0}, Vec3{0, 0, 1.0005}).axis) == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_frustum(Vec3{0, 0, 0}, Vec3{0, 0, 1.01}), DomainError);
  CHECK_THROWS_AS(make_frustum(Vec3{0, 0, 0}, Vec3{0, 0, 0}), DomainError);
  CHECK_THROWS_AS(make_frustum(Vec3{0, 0, 0}, Vec3{0, 0, 1}, FrustumConfig{70, 40, 3000}),
                  DomainError);
}

TEST_CASE("targets are ordered by distance with color order breaking ties") {
  const auto f = make_frustum(Vec3{0, 0, 0}, Vec3{0, 0, 1});
  const std::vector<ObjectDetection> objects{
      block(Color::yellow, {0, 0, 900}), block(Color::green, {10, 0, 500}),
      scale_at({0, 0, 500}),             block(Color::red, {0, 10, 500}),
      block(Color::blue, {500, 0, 500}),
  };
  const auto t = select_targets(f, objects);
  REQUIRE(t.size() == 4);
  CHECK(t[0].object.block == Color::red);
  CHECK(t[1].object.block == Color::green);
  CHECK_FALSE(t[2].object.block.has_value());
  CHECK(t[3].object.block == Color::yellow);
  for (const auto& x : t) CHECK(x.selected);
  CHECK(target_colors(t) == std::vector<Color>{Color::red, Color::green, Color::yellow});
}

TEST_CASE("gaze reports targets but never selects them") {
  const auto ray = gaze_ray({0, 0, 0}, {-80, 0, -90}, {80, 0, -90});
  CHECK(ray.direction.z == doctest::Approx(1.0));
  const std::vector<ObjectDetection> objects{block(Color::purple, {0, 0, 1000})};
  const auto t = gaze_targets(ray, objects);
  REQUIRE(t.size() == 1);
  CHECK_FALSE(t[0].selected);
  CHECK_THROWS_AS(gaze_ray({0, 0, 0}, {-1, 0, 0}, {1, 0, 0}), DomainError);
}

TEST_CASE("selection is invariant under rigid motion") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> shift(-5000, 5000);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto f = make_frustum(Vec3{shift(rng), shift(rng), shift(rng)}, unit(rng));
    const auto objects = scene_around(f, rng);
    const auto before = select_targets(f, objects);

    const auto rot = random_rotation(rng);
    const Vec3 move{shift(rng), shift(rng), shift(rng)};
    auto moved = objects;
    for (auto& o : moved) o.centroid = rot(o.centroid) + move;
    const auto g = make_frustum(rot(f.origin) + move, rot(f.axis));
    const auto after = select_targets(g, moved);

    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(before[i].object.block == after[i].object.block);
      CHECK(std::abs(before[i].axial - after[i].axial) <= 1e-6);
      CHECK(std::abs(before[i].lateral - after[i].lateral) <= 1e-6);
    }
  }
}

TEST_CASE("wider radii never drop a target") {
  std::mt19937 rng(22);
  std::uniform_real_distribution<double> shift(-2000, 2000), grow(0, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto origin = Vec3{shift(rng), shift(rng), shift(rng)};
    const auto dir = unit(rng);
    const auto narrow = make_frustum(origin, dir);
    const double g0 = grow(rng);
    const auto wide = make_frustum(origin, dir, {40 + g0, 70 + g0 + grow(rng), 3000});
    const auto objects = scene_around(narrow, rng);
    const auto a = target_colors(select_targets(narrow, objects));
    const auto b = target_colors(select_targets(wide, objects));
    for (const auto c : a) CHECK(std::find(b.begin(), b.end(), c) != b.end());
    for (std::size_t i = 0; i + 1 < 4; ++i) {
      const double d = 200.0 * (i + 1);
      CHECK(narrow.radius_at(d) <= narrow.radius_at(d + 200) + 1e-6);
    }
  }
}

TEST_CASE("selection is the same on every kernel") {
  std::mt19937 rng(23);
  const auto before = kernels::active_isa();
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = make_frustum(Vec3{0, 0, 0}, unit(rng));
    const auto objects = scene_around(f, rng);
    kernels::set_active_isa(kernels::Isa::scalar);
    const auto a = select_targets(f, objects);
    kernels::set_active_isa(kernels::best_isa());
    const auto b = select_targets(f, objects);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].axial == b[i].axial);
  }
  kernels::set_active_isa(before);
}
