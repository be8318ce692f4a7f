#pragma once

#include <span>
#include <vector>

namespace preictal {

/// Biphasic Gaussian spike template.
///
///   G(t) = -A exp(-((t - a) + g)^2 / b)   for t < a
///   G(t) = +A exp(-((t - a) - g)^2 / b)   for t > a
///   G(a) = 0
///
/// scaled by `polarity` (+1: negative lobe first, -1: positive lobe first).
struct SpikeModelParams {
  double amplitude = 1.0;    // A, signal units, > 0
  double center_s = 0.0;     // a
  double scale_s2 = 1e-3;    // b, s^2, > 0
  double asymmetry_s = 0.0;  // gamma, s
  int polarity = 1;          // +1 or -1

  friend bool operator==(const SpikeModelParams&, const SpikeModelParams&) = default;
};

double spike_model_value(const SpikeModelParams& p, double t) noexcept;

std::vector<double> evaluate_spike_model(const SpikeModelParams& p, std::span<const double> times);

/// Adds the template sampled at t = (start + i) / sample_rate into out[i] for
/// the samples where it is numerically non-zero.
void add_spike_model(const SpikeModelParams& p, double sample_rate_hz, std::span<double> out,
                     double scale = 1.0);

/// Half-width of the time span outside of which |G| < 1e-16 A.
double spike_model_support_s(const SpikeModelParams& p) noexcept;

}  // namespace preictal
