#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86,
// an AVX2 variant chosen at runtime. Variants perform the same IEEE operations
// in the same order (no FMA contraction), so their outputs are bit-identical.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace cgtrack::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
bool supported(Isa isa);
Isa best_isa();
Isa active_isa();
// Throws std::invalid_argument if the ISA is not supported on this CPU.
void set_active_isa(Isa isa);

struct FrustumParams {
  double origin[3];
  double axis[3];  // unit
  double near_radius;
  double far_radius;
  double length;
};

/// Structure-of-arrays point batch; all spans share one length.
struct PointBatch {
  std::span<const double> x, y, z;
  std::size_t size() const { return x.size(); }
};

struct ContainmentOut {
  std::span<double> axial;
  std::span<double> lateral;
  std::span<std::uint8_t> inside;
};

// axial = (p - o).a ; lateral = |(p - o) - axial*a| ;
// inside = 0 <= axial <= L && lateral <= r0 + (r1 - r0)*axial/L
void frustum_containment(const FrustumParams& f, PointBatch pts, ContainmentOut out);

/// out[j] = sum_d query[d] * columns[d * n + j], summed in increasing d.
/// `columns` is dimension-major: one contiguous row of n values per dimension.
void column_dots(std::span<const double> query, std::span<const double> columns, std::size_t n,
                 std::span<double> out);

namespace scalar {
void frustum_containment(const FrustumParams& f, PointBatch pts, ContainmentOut out);
void column_dots(std::span<const double> query, std::span<const double> columns, std::size_t n,
                 std::span<double> out);
}  // namespace scalar

namespace avx2 {
bool compiled();
void frustum_containment(const FrustumParams& f, PointBatch pts, ContainmentOut out);
void column_dots(std::span<const double> query, std::span<const double> columns, std::size_t n,
                 std::span<double> out);
}  // namespace avx2

}  // namespace cgtrack::kernels
