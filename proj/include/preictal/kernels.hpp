#pragma once

// Data-parallel inner loops shared by the FIR, SWT and Morlet code.
//
// Every kernel has a scalar reference implementation and an AVX2/FMA
// variant. The dispatched entry points pick the variant once at startup from
// CPUID; PREICTAL_ISA=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace preictal::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best instruction set the running CPU supports (and the build contains).
Isa detected_isa() noexcept;

/// Instruction set currently used by the dispatched kernels.
Isa active_isa() noexcept;

/// Override dispatch. Throws Error(InvalidArgument) if `isa` is unsupported.
void set_active_isa(Isa isa);

/// Dilated correlation:
///   out[i] = sum_k taps[k] * x[i + k * dilation]
/// Requires x.size() >= out.size() + (taps.size() - 1) * dilation.
void correlate(std::span<const double> x, std::span<const double> taps,
               std::size_t dilation, std::span<double> out);

/// Complex-tap correlation folded into a power accumulator:
///   power[i] += weight * |sum_k (re[k] + i*im[k]) * x[i + k]|^2
/// Requires re.size() == im.size() and x.size() >= power.size() + re.size() - 1.
void accumulate_power(std::span<const double> x, std::span<const double> taps_re,
                      std::span<const double> taps_im, double weight,
                      std::span<double> power);

namespace scalar {
void correlate(std::span<const double> x, std::span<const double> taps,
               std::size_t dilation, std::span<double> out);
void accumulate_power(std::span<const double> x, std::span<const double> taps_re,
                      std::span<const double> taps_im, double weight,
                      std::span<double> power);
}  // namespace scalar

namespace avx2 {
/// False when the library was built without the AVX2 translation unit.
bool compiled() noexcept;
void correlate(std::span<const double> x, std::span<const double> taps,
               std::size_t dilation, std::span<double> out);
void accumulate_power(std::span<const double> x, std::span<const double> taps_re,
                      std::span<const double> taps_im, double weight,
                      std::span<double> power);
}  // namespace avx2

}  // namespace preictal::kernels
