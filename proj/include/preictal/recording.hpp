#pragma once

#include <string>
#include <vector>

#include "preictal/matrix.hpp"

namespace preictal {

/// A frequency interval in Hz, low < high.
struct Band {
  double low_hz = 0.0;
  double high_hz = 0.0;

  friend bool operator==(const Band&, const Band&) = default;
};

/// Multichannel, uniformly sampled recording. `data` is n_channels x n_samples.
struct Recording {
  double sample_rate_hz = 0.0;
  std::vector<std::string> labels;
  Matrix data;

  std::size_t n_channels() const noexcept { return data.rows(); }
  std::size_t n_samples() const noexcept { return data.cols(); }
  double duration_s() const noexcept {
    return static_cast<double>(n_samples()) / sample_rate_hz;
  }

  friend bool operator==(const Recording&, const Recording&) = default;
};

/// Throws Error(InvalidArgument) when the recording violates its invariants:
/// at least one channel and sample, one label per channel, a positive sample
/// rate and finite samples.
void validate(const Recording& rec);

/// Throws unless 0 < low < high < sample_rate / 2.
void validate_band(const Band& band, double sample_rate_hz, const char* what);

/// Same labels and sample rate as `like`, data replaced.
Recording with_data(const Recording& like, Matrix data);

/// Default labels "ch1".."chN".
std::vector<std::string> default_labels(std::size_t n_channels);

}  // namespace preictal
