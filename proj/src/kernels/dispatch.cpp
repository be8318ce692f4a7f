#include <atomic>
#include <cstdlib>
#include <string>

#include "preictal/error.hpp"
#include "preictal/kernels.hpp"

namespace preictal::kernels {

#if !defined(PREICTAL_HAVE_AVX2)
namespace avx2 {
bool compiled() noexcept { return false; }
void correlate(std::span<const double> x, std::span<const double> taps, std::size_t dilation,
               std::span<double> out) {
  scalar::correlate(x, taps, dilation, out);
}
void accumulate_power(std::span<const double> x, std::span<const double> taps_re,
                      std::span<const double> taps_im, double weight, std::span<double> power) {
  scalar::accumulate_power(x, taps_re, taps_im, weight, power);
}
}  // namespace avx2
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(PREICTAL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("PREICTAL_ISA"); env != nullptr) {
    if (std::string(env) == "scalar") return Isa::Scalar;
  }
  return best;
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

Isa detected_isa() noexcept {
  static const Isa isa = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) {
    fail(ErrorCode::InvalidArgument, "kernels: AVX2 is not supported on this CPU/build");
  }
  active().store(isa, std::memory_order_relaxed);
}

void correlate(std::span<const double> x, std::span<const double> taps, std::size_t dilation,
               std::span<double> out) {
  if (active_isa() == Isa::Avx2) {
    avx2::correlate(x, taps, dilation, out);
  } else {
    scalar::correlate(x, taps, dilation, out);
  }
}

void accumulate_power(std::span<const double> x, std::span<const double> taps_re,
                      std::span<const double> taps_im, double weight, std::span<double> power) {
  if (active_isa() == Isa::Avx2) {
    avx2::accumulate_power(x, taps_re, taps_im, weight, power);
  } else {
    scalar::accumulate_power(x, taps_re, taps_im, weight, power);
  }
}

}  // namespace preictal::kernels
