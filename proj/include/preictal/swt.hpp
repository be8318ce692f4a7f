#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "preictal/recording.hpp"

namespace preictal {

/// Undecimated wavelet decomposition. Every plane has the input length.
struct WaveletPlanes {
  std::string wavelet_name;
  double sample_rate_hz = 1.0;
  std::vector<double> approx;                // deepest-level approximation C_J
  std::vector<std::vector<double>> details;  // details[j - 1] = W_j, j = 1..J

  std::size_t levels() const noexcept { return details.size(); }
  std::size_t size() const noexcept { return approx.size(); }
};

/// Stationary wavelet transform (a trous, periodic boundaries). At level j the
/// analysis pair is dilated by 2^(j-1) and circularly convolved with the
/// previous approximation. Any length works; no padding is applied.
/// Throws for unknown wavelets, levels outside [1, floor(log2 n)] or inputs
/// shorter than the filter.
WaveletPlanes swt_decompose(std::span<const double> signal, std::string_view wavelet_name,
                            std::size_t levels, double sample_rate_hz = 1.0);

/// Inverse of swt_decompose: exact (to rounding) on untouched planes.
std::vector<double> iswt_reconstruct(const WaveletPlanes& planes);

struct TimeInterval {
  double start_s = 0.0;
  double end_s = 0.0;
};

/// Coefficient mask for one plane.
struct LevelMask {
  enum class Kind { KeepAll, ZeroAll, Intervals, Auto };
  Kind kind = Kind::KeepAll;
  std::vector<TimeInterval> keep;  // used when kind == Intervals

  static LevelMask keep_all() { return {Kind::KeepAll, {}}; }
  static LevelMask zero_all() { return {Kind::ZeroAll, {}}; }
  static LevelMask automatic() { return {Kind::Auto, {}}; }
  static LevelMask intervals(std::vector<TimeInterval> keep) {
    return {Kind::Intervals, std::move(keep)};
  }
};

/// Rectangular masks for all planes of a decomposition.
struct MaskSpec {
  std::vector<LevelMask> details;  // one per detail level, index j - 1
  LevelMask approx;
  double threshold_fraction = 0.5;

  static MaskSpec uniform(std::size_t levels, LevelMask mask, double threshold_fraction = 0.5);
};

/// Parses "auto", "auto:<fraction>", "keep-all" or "zero-all".
MaskSpec parse_mask(std::string_view text, std::size_t levels);

/// Keep-intervals the AUTO rule derives for one plane: the coefficient
/// magnitude is smoothed with a 50 ms moving average and runs where it
/// exceeds threshold_fraction x its peak for less than 200 ms are dropped.
std::vector<TimeInterval> auto_keep_intervals(std::span<const double> plane,
                                              double sample_rate_hz, double threshold_fraction);

/// Zero every coefficient outside the KEEP intervals of its plane.
WaveletPlanes apply_mask(const WaveletPlanes& planes, const MaskSpec& mask);

struct SwtFilterConfig {
  std::string wavelet = "sym5";
  std::size_t levels = 6;
  std::optional<MaskSpec> mask;      // default: AUTO on every plane
  double threshold_fraction = 0.5;   // used when mask is unset
  std::optional<Band> band = Band{65.0, 85.0};
};

/// Per channel: decompose, mask, reconstruct, then band-pass (when a band is
/// configured).
Recording extract_oscillations_swt(const Recording& rec, const SwtFilterConfig& cfg);

}  // namespace preictal
