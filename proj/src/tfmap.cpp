#include "preictal/tfmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "preictal/error.hpp"
#include "preictal/kernels.hpp"
#include "preictal/padding.hpp"
#include "preictal/parallel.hpp"

namespace preictal {

namespace {

constexpr double kTruncationSigmas = 3.5;
constexpr double kScoreHalfWindowS = 0.050;

std::size_t half_width(double freq_hz, double sample_rate_hz, double omega) {
  const double sigma = omega / (2.0 * std::numbers::pi * freq_hz);
  return static_cast<std::size_t>(std::ceil(kTruncationSigmas * sigma * sample_rate_hz));
}

void validate_spec(const MorletSpec& spec, double fs) {
  require(fs > 0.0, "tfmap: sample rate must be positive");
  require(spec.omega >= 1.0, "tfmap: omega must be >= 1");
  require(!spec.freqs_hz.empty(), "tfmap: empty frequency list");
  for (std::size_t i = 0; i < spec.freqs_hz.size(); ++i) {
    const double f = spec.freqs_hz[i];
    if (!(f > 0.0 && f < fs / 2.0)) {
      std::ostringstream msg;
      msg << "tfmap: frequency " << f << " Hz outside (0, Nyquist=" << fs / 2.0 << " Hz)";
      fail(ErrorCode::InvalidArgument, msg.str());
    }
    if (i > 0) require(f > spec.freqs_hz[i - 1], "tfmap: frequencies must be strictly increasing");
  }
}

}  // namespace

std::vector<double> frequency_grid(double fmin_hz, double fmax_hz, double fstep_hz) {
  require(fstep_hz > 0.0, "frequency grid: step must be positive");
  require(fmin_hz > 0.0 && fmax_hz >= fmin_hz, "frequency grid: need 0 < fmin <= fmax");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((fmax_hz - fmin_hz) / fstep_hz + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(fmin_hz + static_cast<double>(i) * fstep_hz);
  return out;
}

MorletTaps morlet_taps(double freq_hz, double sample_rate_hz, double omega,
                       MorletSpec::Normalize normalize) {
  MorletTaps taps;
  taps.half = half_width(freq_hz, sample_rate_hz, omega);
  const std::size_t len = 2 * taps.half + 1;
  taps.re.resize(len);
  taps.im.resize(len);
  const double sigma = omega / (2.0 * std::numbers::pi * freq_hz);
  double envelope_sum = 0.0;
  double energy = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double t = (static_cast<double>(k) - static_cast<double>(taps.half)) / sample_rate_hz;
    const double g = std::exp(-0.5 * (t / sigma) * (t / sigma));
    const double phase = 2.0 * std::numbers::pi * freq_hz * t;
    taps.re[k] = g * std::cos(phase);
    taps.im[k] = g * std::sin(phase);
    envelope_sum += g;
    energy += g * g;
  }
  const double scale = normalize == MorletSpec::Normalize::Amplitude ? 2.0 / envelope_sum
                                                                     : 1.0 / std::sqrt(energy);
  for (std::size_t k = 0; k < len; ++k) {
    taps.re[k] *= scale;
    taps.im[k] *= scale;
  }
  return taps;
}

std::size_t morlet_support(const MorletSpec& spec, double sample_rate_hz) {
  std::size_t widest = 0;
  for (double f : spec.freqs_hz) widest = std::max(widest, half_width(f, sample_rate_hz, spec.omega));
  return 2 * widest + 1;
}

TimeFrequencyMap wavelet_transform(std::span<const double> signal, double sample_rate_hz,
                                   const MorletSpec& spec, std::string channel_label) {
  validate_spec(spec, sample_rate_hz);
  const std::size_t n = signal.size();
  const std::size_t support = morlet_support(spec, sample_rate_hz);
  if (n < support) {
    std::ostringstream msg;
    msg << "tfmap: signal of " << n << " samples is shorter than the widest wavelet ("
        << support << " samples)";
    fail(ErrorCode::InvalidArgument, msg.str());
  }

  TimeFrequencyMap map;
  map.freqs_hz = spec.freqs_hz;
  map.channel_label = std::move(channel_label);
  map.times_s.resize(n);
  for (std::size_t i = 0; i < n; ++i) map.times_s[i] = static_cast<double>(i) / sample_rate_hz;
  map.power = Matrix(spec.freqs_hz.size(), n);

  const std::vector<double> padded = reflect_pad(signal, support / 2, support / 2);
  parallel_for(spec.freqs_hz.size(), [&](std::size_t fi) {
    const MorletTaps taps = morlet_taps(spec.freqs_hz[fi], sample_rate_hz, spec.omega, spec.normalize);
    const std::size_t offset = support / 2 - taps.half;
    const std::span<const double> x(padded.data() + offset, n + 2 * taps.half);
    kernels::accumulate_power(x, taps.re, taps.im, 1.0, map.power.row(fi));
  });
  return map;
}

double spike_signature_score(const TimeFrequencyMap& map, double event_time_s) {
  const std::size_t n = map.times_s.size();
  require(n > 0 && map.power.cols() == n, "spike score: malformed map");
  if (!(event_time_s >= map.times_s.front() && event_time_s <= map.times_s.back())) {
    std::ostringstream msg;
    msg << "spike score: event at " << event_time_s << " s outside the map ["
        << map.times_s.front() << ", " << map.times_s.back() << "] s";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  std::vector<double> column(n, 0.0);
  for (std::size_t f = 0; f < map.power.rows(); ++f) {
    const auto row = map.power.row(f);
    for (std::size_t i = 0; i < n; ++i) column[i] += row[i];
  }
  double window_sum = 0.0;
  std::size_t window_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(map.times_s[i] - event_time_s) <= kScoreHalfWindowS + 1e-12) {
      window_sum += column[i];
      ++window_count;
    }
  }
  std::vector<double> sorted = column;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  double denom = *mid;
  if (denom <= 0.0) {
    // Mostly silent map: fall back to the overall mean column power.
    double total = 0.0;
    for (double v : column) total += v;
    denom = total / static_cast<double>(n);
  }
  if (denom <= 0.0) return 0.0;
  return window_sum / static_cast<double>(window_count) / denom;
}

}  // namespace preictal
