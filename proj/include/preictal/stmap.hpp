#pragma once

#include <optional>
#include <string>
#include <vector>

#include "preictal/recording.hpp"

namespace preictal {

/// Channel x time band-energy map.
struct SpatioTemporalMap {
  std::vector<std::string> labels;
  std::vector<double> times_s;
  Matrix values;  // n_channels x n_times
  double sample_rate_hz = 0.0;
  Band gamma_band;
  std::optional<Band> norm_band;  // set once normalized
  double smoothed_ms = 0.0;
  bool log_scaled = false;
};

/// Per channel, Morlet power averaged over the grid frequencies inside `band`
/// (band.low_hz, band.low_hz + step, ... <= band.high_hz).
SpatioTemporalMap band_energy_map(const Recording& rec, const Band& band, double omega,
                                  double freq_step_hz = 1.0);

/// gamma / (low + epsilon), pointwise. Without an explicit epsilon, each row
/// uses 1e-12 x the mean of its own `low` row.
SpatioTemporalMap normalize_by_low_band(const SpatioTemporalMap& gamma, const SpatioTemporalMap& low,
                                        std::optional<double> epsilon = std::nullopt);

/// Centred moving average of round(window_ms * fs / 1000) | 1 samples per row,
/// reflected edges. window_ms = 0 returns the input unchanged.
SpatioTemporalMap smooth_map(const SpatioTemporalMap& map, double window_ms);

/// log10 of every value; zeros map to the smallest positive value's log.
SpatioTemporalMap log_scale(const SpatioTemporalMap& map);

struct ChannelBuildup {
  std::string label;
  std::size_t channel = 0;
  double peak_value = 0.0;
  std::optional<double> onset_s;
  double threshold = 0.0;  // mu + k_sigma * sigma of the baseline
};

struct BuildupReport {
  std::optional<double> onset_s;
  std::vector<ChannelBuildup> ranked_channels;  // descending peak_value
  double threshold_used = 0.0;                  // k_sigma
  double baseline_s = 0.0;
};

struct BuildupConfig {
  double k_sigma = 3.0;
  double min_duration_ms = 1000.0;
  double baseline_fraction = 0.2;
};

/// Baseline mean and std per channel over the leading baseline_fraction of
/// the record; a channel's onset is the start of the first run above
/// mu + k_sigma * sigma lasting at least min_duration_ms. Throws when the
/// baseline is shorter than 1 s.
BuildupReport detect_buildup(const SpatioTemporalMap& map, const BuildupConfig& cfg = {});

struct StmapConfig {
  Band gamma_band{65.0, 85.0};
  Band norm_band{8.0, 30.0};
  double omega = 5.0;
  double freq_step_hz = 1.0;
  double smooth_ms = 500.0;
  BuildupConfig buildup;
};

struct StmapResult {
  SpatioTemporalMap map;  // normalized and smoothed
  BuildupReport report;
};

/// gamma map / low map, smoothed, then build-up detection.
StmapResult run_stmap(const Recording& rec, const StmapConfig& cfg = {});

/// Same, with the low-band map taken from `norm_source` (same shape as rec).
StmapResult run_stmap(const Recording& rec, const Recording& norm_source, const StmapConfig& cfg);

}  // namespace preictal
