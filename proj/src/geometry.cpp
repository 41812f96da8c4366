#include "cgtrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cgtrack/kernels.hpp"

namespace cgtrack::geometry {

namespace {

kernels::FrustumParams params_of(const Frustum& f) {
  return {{f.origin.x, f.origin.y, f.origin.z},
          {f.axis.x, f.axis.y, f.axis.z},
          f.near_radius,
          f.far_radius,
          f.length};
}

int class_rank(const ObjectDetection& o) {
  return o.block ? static_cast<int>(*o.block) : static_cast<int>(kColors.size());
}

}  // namespace

void FrustumConfig::validate() const {
  if (!(near_radius > 0)) throw DomainError("frustum near radius must be positive");
  if (!(far_radius >= near_radius)) throw DomainError("frustum far radius must be >= near radius");
  if (!(length > 0)) throw DomainError("frustum length must be positive");
}

Frustum make_frustum(Vec3 origin, Vec3 direction, const FrustumConfig& config) {
  config.validate();
  const double n = norm(direction);
  if (!std::isfinite(n) || std::abs(n - 1.0) > kNormalizeTolerance) {
    throw DomainError("pointing direction is not a unit vector (norm " + std::to_string(n) + ")");
  }
  return {origin, (1.0 / n) * direction, config.near_radius, config.far_radius, config.length};
}

Frustum make_frustum(const DeixisEvent& event, const FrustumConfig& config) {
  return make_frustum(event.tip, event.direction, config);
}

Containment contains(const Frustum& f, Vec3 point) {
  const double x[1]{point.x}, y[1]{point.y}, z[1]{point.z};
  double axial[1], lateral[1];
  std::uint8_t inside[1];
  kernels::scalar::frustum_containment(params_of(f), {x, y, z}, {axial, lateral, inside});
  return {inside[0] != 0, axial[0], lateral[0]};
}

TargetList select_targets(const Frustum& f, std::span<const ObjectDetection> objects) {
  const auto n = objects.size();
  std::vector<double> xs(n), ys(n), zs(n), axial(n), lateral(n);
  std::vector<std::uint8_t> inside(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = objects[i].centroid.x;
    ys[i] = objects[i].centroid.y;
    zs[i] = objects[i].centroid.z;
  }
  kernels::frustum_containment(params_of(f), {xs, ys, zs}, {axial, lateral, inside});

  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < n; ++i) {
    if (inside[i]) hits.push_back(i);
  }
  std::stable_sort(hits.begin(), hits.end(), [&](std::size_t a, std::size_t b) {
    if (axial[a] != axial[b]) return axial[a] < axial[b];
    return class_rank(objects[a]) < class_rank(objects[b]);
  });

  TargetList out;
  out.reserve(hits.size());
  for (const auto i : hits) out.push_back({objects[i], axial[i], lateral[i], true});
  return out;
}

Ray gaze_ray(Vec3 nose, Vec3 left_ear, Vec3 right_ear) {
  const Vec3 mid = 0.5 * (left_ear + right_ear);
  const Vec3 d = nose - mid;
  const double n = norm(d);
  if (!(n > 0) || !std::isfinite(n)) {
    throw DomainError("nose coincides with the ear midpoint; gaze direction undefined");
  }
  return {nose, (1.0 / n) * d};
}

TargetList gaze_targets(const Ray& gaze, std::span<const ObjectDetection> objects,
                        const FrustumConfig& config) {
  auto targets = select_targets(make_frustum(gaze.origin, gaze.direction, config), objects);
  for (auto& t : targets) t.selected = false;
  return targets;
}

std::vector<Color> target_colors(const TargetList& targets) {
  std::vector<Color> out;
  for (const auto& t : targets) {
    if (t.object.block) out.push_back(*t.object.block);
  }
  return out;
}

}  // namespace cgtrack::geometry
