#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "preictal/evaluate.hpp"

namespace preictal {

/// Every tunable of the pipelines as a flat key=value set.
///
///   wavelet, levels, mask_threshold, detector_k, min_separation_ms,
///   window_ms, fit_b_min, fit_b_max, fit_gamma_max, fit_amplitude_factor,
///   fit_max_iterations, tf_omega, st_omega, gamma_band, norm_band,
///   freq_step_hz, smooth_ms, k_sigma, min_duration_ms, baseline_fraction
///
/// Bands are written "low:high".
class RunConfig {
 public:
  RunConfig() = default;

  /// Parse and validate one value. Throws Error(InvalidArgument) for unknown
  /// keys and invalid values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static const std::vector<std::string>& keys();

  /// Apply a key=value file ('#' comments, blank lines allowed). Errors name
  /// the file and line.
  void load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  SwtFilterConfig swt() const;
  DespikeConfig despike() const;
  StmapConfig stmap() const;
  EvaluationConfig evaluation() const;
  double tf_omega() const { return tf_omega_; }

 private:
  std::string wavelet_ = "sym5";
  std::size_t levels_ = 6;
  double mask_threshold_ = 0.5;
  DetectionConfig detection_;
  FitOptions fit_;
  double tf_omega_ = 7.0;
  StmapConfig stmap_;
};

/// "low:high" -> Band with 0 < low < high.
Band parse_band(std::string_view text);

}  // namespace preictal
