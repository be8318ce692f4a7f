#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "preictal/recording.hpp"
#include "preictal/spike_model.hpp"

namespace preictal {

/// Parameters of the synthetic pre-ictal/ictal recording.
///
/// Every channel carries sparse pre-ictal gamma bursts (one Hann-windowed
/// sinusoid per `burst_interval_s` slot, 0.2-1.0 s long) and biphasic spikes.
/// From `ictal_onset_s` the seizure channel switches to a sustained gamma
/// oscillation. White noise is added last at `snr_db` relative to the pooled
/// spike + oscillation power of all channels.
struct SimulationSpec {
  std::size_t n_channels = 6;
  double sample_rate_hz = 1000.0;
  double duration_s = 20.0;
  double snr_db = 5.0;  // +infinity disables noise
  double spike_rate_hz = 1.0;
  Band gamma_band{65.0, 85.0};
  double overlap_fraction = 0.3;
  double ictal_onset_s = 10.0;
  std::size_t seizure_channel = 3;  // zero-based; label "ch4"
  std::uint64_t seed = 42;

  double burst_amplitude = 1.0;
  double ictal_amplitude = 2.0;
  double burst_interval_s = 2.0;

  static constexpr double no_noise = std::numeric_limits<double>::infinity();
};

struct BurstWindow {
  double start_s = 0.0;
  double end_s = 0.0;
  double center_freq_hz = 0.0;
  bool ictal = false;
};

struct InjectedSpike {
  SpikeModelParams params;
};

struct GroundTruth {
  Matrix spike_component;
  Matrix oscillation_component;
  Matrix noise_component;
  std::vector<std::vector<BurstWindow>> burst_windows;  // per channel
  std::vector<std::vector<InjectedSpike>> spikes;       // per channel, time-ordered
  double ictal_onset_s = 0.0;
  std::size_t seizure_channel = 0;
};

/// Throws Error(InvalidArgument) naming the offending field.
void validate(const SimulationSpec& spec);

/// Deterministic for a fixed spec (including seed). data is built as
/// (spike + oscillation) + noise, elementwise.
std::pair<Recording, GroundTruth> synthesize_recording(const SimulationSpec& spec);

/// Zero-mean Gaussian white noise scaled so that the pooled empirical power
/// ratio 10 log10(P(data) / P(noise)) equals snr_db exactly. Returns an
/// all-zero matrix for snr_db = +infinity.
Matrix white_noise_for(const Matrix& data, double snr_db, std::uint64_t seed);

/// data + white_noise_for(data, snr_db, seed).
Matrix add_white_noise(const Matrix& data, double snr_db, std::uint64_t seed);

/// Mean of squares over all elements.
double mean_power(const Matrix& m) noexcept;

}  // namespace preictal
