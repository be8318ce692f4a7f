#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "preictal/recording.hpp"
#include "preictal/spike_model.hpp"

namespace preictal {

struct TimeWindow {
  double start_s = 0.0;
  double end_s = 0.0;
};

/// A detected transient. `peak_time_s` is the estimated spike centre: the
/// midpoint between the two opposite lobes when both are visible, otherwise
/// the dominant extremum.
struct SpikeCandidate {
  std::size_t channel = 0;
  double peak_time_s = 0.0;
  double peak_amplitude = 0.0;  // signed value of the dominant lobe in the raw signal
  TimeWindow window;
};

struct DetectionConfig {
  double k = 4.0;                    // threshold in robust-std units
  double min_separation_s = 0.080;   // closer extrema merge, larger one kept
  double window_half_s = 0.150;      // candidate window around the centre
  double smooth_s = 0.010;           // emphasis: short moving average, applied twice ...
  double baseline_s = 0.200;         // ... minus long moving average
};

/// Spike-band emphasis of a signal: short centred moving average applied
/// twice, minus a long one (reflected edges).
std::vector<double> emphasize_spikes(std::span<const double> signal, double sample_rate_hz,
                                     const DetectionConfig& cfg);

/// Median absolute deviation x 1.4826.
double robust_std(std::span<const double> values);

/// Local extrema of the emphasized signal above k x robust std, merged within
/// min_separation_s. Deterministic; sorted by time.
std::vector<SpikeCandidate> detect_spikes(std::span<const double> signal, double sample_rate_hz,
                                          const DetectionConfig& cfg = {},
                                          std::size_t channel = 0);

struct FitBounds {
  double b_min = 1e-6;         // s^2
  double b_max = 1.0;          // s^2
  double gamma_max = 0.1;      // |gamma| <= gamma_max, s
  double amplitude_factor = 10.0;  // A <= factor x window peak |x|
};

struct FitOptions {
  FitBounds bounds;
  std::size_t max_iterations = 200;
  double tolerance = 1e-8;     // relative cost decrease
  bool search_init = true;     // grid search over centre, width and polarity first
};

struct FitResult {
  std::vector<SpikeModelParams> params;  // one per template
  double residual_rms = 0.0;
  double initial_residual_rms = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool numeric_failure = false;  // params == inits when set
};

/// Joint damped Gauss-Newton (Levenberg-Marquardt) fit of a sum of templates
/// to signal samples inside `window` (sample i sits at t = i / fs). Returns
/// the best iterate; its residual never exceeds the initial guess's.
/// Throws when the window holds fewer than 20 samples or an init violates
/// the template invariants.
FitResult fit_spike_models(std::span<const double> signal, double sample_rate_hz,
                           const TimeWindow& window, std::span<const SpikeModelParams> inits,
                           const FitOptions& options = {});

FitResult fit_spike_model(std::span<const double> signal, double sample_rate_hz,
                          const TimeWindow& window, const SpikeModelParams& init,
                          const FitOptions& options = {});

struct DespikeConfig {
  DetectionConfig detection;
  FitOptions fit;
};

struct FittedSpike {
  SpikeCandidate candidate;
  SpikeModelParams params;
  double residual_rms = 0.0;
};

struct ChannelDespike {
  std::vector<double> despiked;
  std::vector<double> model;
  std::vector<FittedSpike> spikes;
};

/// Detect, fit each candidate (jointly when candidates share a window),
/// rescale amplitudes by least-squares projection and subtract.
/// despiked = signal - model, elementwise.
ChannelDespike despike_channel(std::span<const double> signal, double sample_rate_hz,
                               const DespikeConfig& cfg = {}, std::size_t channel = 0);

struct DespikeResult {
  Recording despiked;
  std::vector<std::vector<FittedSpike>> spike_train;  // per channel
  Matrix model_signal;
};

DespikeResult despike_recording(const Recording& rec, const DespikeConfig& cfg = {});

}  // namespace preictal
