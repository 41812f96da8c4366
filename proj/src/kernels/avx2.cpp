#include "cgtrack/kernels.hpp"

#if defined(CGTRACK_HAVE_AVX2)

#include <immintrin.h>

namespace cgtrack::kernels::avx2 {

namespace {
constexpr std::size_t kLanes = 4;
}

bool compiled() { return true; }

void frustum_containment(const FrustumParams& f, PointBatch pts, ContainmentOut out) {
  const std::size_t n = pts.size();
  const std::size_t body = n - n % kLanes;

  const __m256d ox = _mm256_set1_pd(f.origin[0]);
  const __m256d oy = _mm256_set1_pd(f.origin[1]);
  const __m256d oz = _mm256_set1_pd(f.origin[2]);
  const __m256d ax = _mm256_set1_pd(f.axis[0]);
  const __m256d ay = _mm256_set1_pd(f.axis[1]);
  const __m256d az = _mm256_set1_pd(f.axis[2]);
  const __m256d r0 = _mm256_set1_pd(f.near_radius);
  const __m256d slope = _mm256_set1_pd(f.far_radius - f.near_radius);
  const __m256d len = _mm256_set1_pd(f.length);
  const __m256d zero = _mm256_setzero_pd();

  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d vx = _mm256_sub_pd(_mm256_loadu_pd(pts.x.data() + i), ox);
    const __m256d vy = _mm256_sub_pd(_mm256_loadu_pd(pts.y.data() + i), oy);
    const __m256d vz = _mm256_sub_pd(_mm256_loadu_pd(pts.z.data() + i), oz);
    const __m256d d = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(vx, ax), _mm256_mul_pd(vy, ay)), _mm256_mul_pd(vz, az));
    const __m256d wx = _mm256_sub_pd(vx, _mm256_mul_pd(d, ax));
    const __m256d wy = _mm256_sub_pd(vy, _mm256_mul_pd(d, ay));
    const __m256d wz = _mm256_sub_pd(vz, _mm256_mul_pd(d, az));
    const __m256d rho = _mm256_sqrt_pd(_mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(wx, wx), _mm256_mul_pd(wy, wy)), _mm256_mul_pd(wz, wz)));
    const __m256d r = _mm256_add_pd(r0, _mm256_div_pd(_mm256_mul_pd(slope, d), len));

    const __m256d ok = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(d, zero, _CMP_GE_OQ), _mm256_cmp_pd(d, len, _CMP_LE_OQ)),
        _mm256_cmp_pd(rho, r, _CMP_LE_OQ));

    _mm256_storeu_pd(out.axial.data() + i, d);
    _mm256_storeu_pd(out.lateral.data() + i, rho);
    const int bits = _mm256_movemask_pd(ok);
    for (std::size_t k = 0; k < kLanes; ++k) {
      out.inside[i + k] = static_cast<std::uint8_t>((bits >> k) & 1);
    }
  }

  if (body < n) {
    scalar::frustum_containment(
        f, {pts.x.subspan(body), pts.y.subspan(body), pts.z.subspan(body)},
        {out.axial.subspan(body), out.lateral.subspan(body), out.inside.subspan(body)});
  }
}

void column_dots(std::span<const double> query, std::span<const double> columns, std::size_t n,
                 std::span<double> out) {
  const std::size_t body = n - n % kLanes;
  for (std::size_t j = 0; j < body; j += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < query.size(); ++d) {
      const __m256d col = _mm256_loadu_pd(columns.data() + d * n + j);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(query[d]), col));
    }
    _mm256_storeu_pd(out.data() + j, acc);
  }
  for (std::size_t j = body; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < query.size(); ++d) acc = acc + query[d] * columns[d * n + j];
    out[j] = acc;
  }
}

}  // namespace cgtrack::kernels::avx2

#else

#include <stdexcept>

namespace cgtrack::kernels::avx2 {

bool compiled() { return false; }

void frustum_containment(const FrustumParams&, PointBatch, ContainmentOut) {
  throw std::logic_error("AVX2 kernels were not compiled into this build");
}

void column_dots(std::span<const double>, std::span<const double>, std::size_t,
                 std::span<double>) {
  throw std::logic_error("AVX2 kernels were not compiled into this build");
}

}  // namespace cgtrack::kernels::avx2

#endif
