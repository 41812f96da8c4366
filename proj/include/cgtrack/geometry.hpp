#pragma once

#include <span>
#include <string>
#include <vector>

#include "cgtrack/domain.hpp"

namespace cgtrack::geometry {

struct FrustumConfig {
  double near_radius = 40.0;  // mm, at the fingertip
  double far_radius = 70.0;   // mm, at distance `length`
  double length = 3000.0;     // mm

  void validate() const;
};

/// Truncated cone projected from a fingertip. The radius grows linearly from
/// `near_radius` at the origin to `far_radius` at `length`.
struct Frustum {
  Vec3 origin;
  Vec3 axis;
  double near_radius = 40.0;
  double far_radius = 70.0;
  double length = 3000.0;

  double radius_at(double axial) const {
    return near_radius + (far_radius - near_radius) * axial / length;
  }
};

// Directions within this distance of unit norm are renormalized.
inline constexpr double kNormalizeTolerance = 1e-3;

Frustum make_frustum(const DeixisEvent& event, const FrustumConfig& config = {});
Frustum make_frustum(Vec3 origin, Vec3 direction, const FrustumConfig& config = {});

struct Containment {
  bool inside = false;
  double axial = 0;
  double lateral = 0;
};

Containment contains(const Frustum& f, Vec3 point);

struct Target {
  ObjectDetection object;
  double axial = 0;
  double lateral = 0;
  bool selected = false;  // true only for deixis; gaze never selects
};

using TargetList = std::vector<Target>;

/// Objects whose centroid lies in the frustum, nearest first; equal distances
/// fall back to canonical color order with the scale last.
TargetList select_targets(const Frustum& f, std::span<const ObjectDetection> objects);

struct Ray {
  Vec3 origin;
  Vec3 direction;
};

/// Head direction from the nose through the midpoint of the ears.
Ray gaze_ray(Vec3 nose, Vec3 left_ear, Vec3 right_ear);

/// Objects along a gaze ray, using the same volume as pointing. The result
/// is reported for attention only: no entry is marked selected.
TargetList gaze_targets(const Ray& gaze, std::span<const ObjectDetection> objects,
                        const FrustumConfig& config = {});

std::vector<Color> target_colors(const TargetList& targets);

}  // namespace cgtrack::geometry
