#pragma once

#include <span>
#include <string>
#include <vector>

#include "preictal/matrix.hpp"

namespace preictal {

struct MorletSpec {
  enum class Normalize { Amplitude, Energy };

  double omega = 7.0;  // oscillations within the +-1 sigma envelope
  std::vector<double> freqs_hz;
  Normalize normalize = Normalize::Amplitude;
};

/// freqs from fmin to fmax inclusive in steps of fstep.
std::vector<double> frequency_grid(double fmin_hz, double fmax_hz, double fstep_hz);

struct TimeFrequencyMap {
  std::vector<double> freqs_hz;
  std::vector<double> times_s;
  Matrix power;  // n_freqs x n_times
  std::string channel_label;
};

/// Complex Morlet taps for frequency f: Gaussian envelope with
/// sigma_t = omega / (2 pi f), truncated at +-3.5 sigma_t. Amplitude
/// normalization gives a unit-amplitude cosine at f unit power; energy
/// normalization gives the taps unit L2 norm.
struct MorletTaps {
  std::vector<double> re;
  std::vector<double> im;
  std::size_t half = 0;  // taps span -half .. +half samples
};
MorletTaps morlet_taps(double freq_hz, double sample_rate_hz, double omega,
                       MorletSpec::Normalize normalize = MorletSpec::Normalize::Amplitude);

/// Number of samples spanned by the widest wavelet of `spec`.
std::size_t morlet_support(const MorletSpec& spec, double sample_rate_hz);

/// Morlet power at every sample and frequency, reflected edges. Throws for an
/// empty or non-increasing grid, frequencies at or above Nyquist, omega < 1,
/// or a signal shorter than the widest wavelet.
TimeFrequencyMap wavelet_transform(std::span<const double> signal, double sample_rate_hz,
                                   const MorletSpec& spec, std::string channel_label = {});

/// Mean column power (summed over frequency) within +-50 ms of the event,
/// divided by the median column power of the whole map. 0 for an all-zero map.
double spike_signature_score(const TimeFrequencyMap& map, double event_time_s);

}  // namespace preictal
