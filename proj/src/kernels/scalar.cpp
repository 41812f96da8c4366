#include <cmath>

#include "cgtrack/kernels.hpp"

namespace cgtrack::kernels::scalar {

void frustum_containment(const FrustumParams& f, PointBatch pts, ContainmentOut out) {
  const double slope = f.far_radius - f.near_radius;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double vx = pts.x[i] - f.origin[0];
    const double vy = pts.y[i] - f.origin[1];
    const double vz = pts.z[i] - f.origin[2];
    const double d = vx * f.axis[0] + vy * f.axis[1] + vz * f.axis[2];
    const double wx = vx - d * f.axis[0];
    const double wy = vy - d * f.axis[1];
    const double wz = vz - d * f.axis[2];
    const double rho = std::sqrt(wx * wx + wy * wy + wz * wz);
    const double r = f.near_radius + slope * d / f.length;
    out.axial[i] = d;
    out.lateral[i] = rho;
    out.inside[i] = (d >= 0.0 && d <= f.length && rho <= r) ? 1 : 0;
  }
}

void column_dots(std::span<const double> query, std::span<const double> columns, std::size_t n,
                 std::span<double> out) {
  for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
  for (std::size_t d = 0; d < query.size(); ++d) {
    const double q = query[d];
    const double* row = columns.data() + d * n;
    for (std::size_t j = 0; j < n; ++j) out[j] = out[j] + q * row[j];
  }
}

}  // namespace cgtrack::kernels::scalar
