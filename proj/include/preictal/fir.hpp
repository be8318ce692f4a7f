#pragma once

#include <span>
#include <vector>

#include "preictal/recording.hpp"

namespace preictal {

/// Linear-phase windowed-sinc (Hamming) band-pass. Odd tap count chosen from
/// the narrower of the low edge and the bandwidth; gain at the band centre is
/// exactly 1.
std::vector<double> design_bandpass(const Band& band, double sample_rate_hz);

/// Zero-delay application of symmetric `taps` with reflected boundaries.
std::vector<double> apply_fir(std::span<const double> x, std::span<const double> taps);

/// Band-pass every channel. Shape and labels are preserved.
Recording bandpass_filter(const Recording& rec, const Band& band);

/// Single-sequence convenience form.
std::vector<double> bandpass(std::span<const double> x, double sample_rate_hz, const Band& band);

}  // namespace preictal
