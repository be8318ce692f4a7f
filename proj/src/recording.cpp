#include "preictal/recording.hpp"

#include <cmath>
#include <sstream>

#include "preictal/error.hpp"

namespace preictal {

void validate(const Recording& rec) {
  require(rec.sample_rate_hz > 0.0 && std::isfinite(rec.sample_rate_hz),
          "recording: sample_rate_hz must be positive and finite");
  require(rec.n_channels() >= 1, "recording: at least one channel required");
  require(rec.n_samples() >= 1, "recording: at least one sample required");
  require(rec.labels.size() == rec.n_channels(),
          "recording: label count does not match channel count");
  for (std::size_t c = 0; c < rec.n_channels(); ++c) {
    const auto row = rec.data.row(c);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!std::isfinite(row[i])) {
        std::ostringstream msg;
        msg << "recording: non-finite sample at channel " << c << ", index " << i;
        fail(ErrorCode::InvalidArgument, msg.str());
      }
    }
  }
}

void validate_band(const Band& band, double sample_rate_hz, const char* what) {
  const double nyquist = sample_rate_hz / 2.0;
  if (!(band.low_hz > 0.0 && band.low_hz < band.high_hz && band.high_hz < nyquist)) {
    std::ostringstream msg;
    msg << what << ": band " << band.low_hz << "-" << band.high_hz
        << " Hz must satisfy 0 < low < high < Nyquist (" << nyquist << " Hz)";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
}

Recording with_data(const Recording& like, Matrix data) {
  Recording out;
  out.sample_rate_hz = like.sample_rate_hz;
  out.labels = like.labels;
  out.data = std::move(data);
  return out;
}

std::vector<std::string> default_labels(std::size_t n_channels) {
  std::vector<std::string> labels;
  labels.reserve(n_channels);
  for (std::size_t c = 0; c < n_channels; ++c) labels.push_back("ch" + std::to_string(c + 1));
  return labels;
}

}  // namespace preictal
