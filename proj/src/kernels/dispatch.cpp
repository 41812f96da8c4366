#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "cgtrack/kernels.hpp"

namespace cgtrack::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  // CGTRACK_ISA=scalar pins the reference path.
  if (const char* env = std::getenv("CGTRACK_ISA"); env && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return best_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool supported(Isa isa) {
  return isa == Isa::scalar || (avx2::compiled() && cpu_has_avx2());
}

Isa best_isa() { return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!supported(isa)) {
    throw std::invalid_argument("instruction set '" + std::string(to_string(isa)) +
                                "' is not available");
  }
  active().store(isa, std::memory_order_relaxed);
}

void frustum_containment(const FrustumParams& f, PointBatch pts, ContainmentOut out) {
  if (active_isa() == Isa::avx2) {
    avx2::frustum_containment(f, pts, out);
  } else {
    scalar::frustum_containment(f, pts, out);
  }
}

void column_dots(std::span<const double> query, std::span<const double> columns, std::size_t n,
                 std::span<double> out) {
  if (active_isa() == Isa::avx2) {
    avx2::column_dots(query, columns, n, out);
  } else {
    scalar::column_dots(query, columns, n, out);
  }
}

}  // namespace cgtrack::kernels
