#include "preictal/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "preictal/error.hpp"
#include "preictal/parallel.hpp"

namespace preictal {

namespace {

enum class Stream : std::uint32_t { Bursts = 1, Spikes = 2, Noise = 3 };

// Independent generator per (seed, stream, channel) so channel order and
// thread count never change the output.
std::mt19937_64 substream(std::uint64_t seed, Stream stream, std::size_t channel) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(channel),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(channel) >> 32)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

[[noreturn]] void bad_field(const char* field, const std::string& why) {
  fail(ErrorCode::InvalidArgument, std::string("simulation spec: ") + field + " " + why);
}

constexpr double kMinBurstS = 0.2;
constexpr double kMaxBurstS = 1.0;
constexpr double kIctalRampS = 0.2;
constexpr double kMinSpikeGapS = 0.3;
constexpr double kSpikeEdgeS = 0.2;
constexpr double kMinLobeFwhmS = 0.030;
constexpr double kMaxLobeFwhmS = 0.070;
constexpr double kMaxAsymmetryS = 0.010;
constexpr double kMinSpikeRms = 3.0;
constexpr double kMaxSpikeRms = 8.0;

void add_burst(std::span<double> row, double fs, double start_s, double length_s, double freq,
               double phase, double amplitude) {
  const auto first = static_cast<std::size_t>(std::lround(start_s * fs));
  const auto n = static_cast<std::size_t>(std::lround(length_s * fs));
  if (n < 2) return;
  for (std::size_t i = 0; i < n && first + i < row.size(); ++i) {
    const double hann =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    const double t = static_cast<double>(i) / fs;
    row[first + i] += amplitude * hann * std::sin(2.0 * std::numbers::pi * freq * t + phase);
  }
}

void add_ictal(std::span<double> row, double fs, double onset_s, double freq, double phase,
               double amplitude) {
  const auto first = static_cast<std::size_t>(std::lround(onset_s * fs));
  const auto ramp = static_cast<std::size_t>(std::lround(kIctalRampS * fs));
  for (std::size_t i = first; i < row.size(); ++i) {
    const std::size_t k = i - first;
    double env = 1.0;
    if (k < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(ramp));
    const double t = static_cast<double>(k) / fs;
    row[i] += amplitude * env * std::sin(2.0 * std::numbers::pi * freq * t + phase);
  }
}

bool inside_any(const std::vector<BurstWindow>& windows, double t) {
  return std::ranges::any_of(windows, [t](const BurstWindow& w) { return t >= w.start_s && t <= w.end_s; });
}

std::vector<BurstWindow> make_oscillations(const SimulationSpec& spec, std::size_t channel,
                                           std::span<double> row) {
  auto rng = substream(spec.seed, Stream::Bursts, channel);
  const double fs = spec.sample_rate_hz;
  const bool seizure = channel == spec.seizure_channel && spec.ictal_onset_s < spec.duration_s;
  const double burst_end = seizure ? spec.ictal_onset_s : spec.duration_s;
  const double slot = spec.burst_interval_s;
  const double max_len = std::min(kMaxBurstS, slot);

  std::vector<BurstWindow> windows;
  for (double slot_start = 0.0; slot_start + slot <= burst_end + 1e-9; slot_start += slot) {
    const double length = uniform(rng, std::min(kMinBurstS, max_len), max_len);
    const double start = uniform(rng, slot_start, slot_start + slot - length);
    const double freq = uniform(rng, spec.gamma_band.low_hz, spec.gamma_band.high_hz);
    const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    add_burst(row, fs, start, length, freq, phase, spec.burst_amplitude);
    windows.push_back({start, start + length, freq, false});
  }
  if (seizure) {
    const double freq = uniform(rng, spec.gamma_band.low_hz, spec.gamma_band.high_hz);
    const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    add_ictal(row, fs, spec.ictal_onset_s, freq, phase, spec.ictal_amplitude);
    windows.push_back({spec.ictal_onset_s, spec.duration_s, freq, true});
  }
  return windows;
}

std::vector<InjectedSpike> make_spikes(const SimulationSpec& spec, std::size_t channel,
                                       const std::vector<BurstWindow>& windows,
                                       std::span<double> row) {
  auto rng = substream(spec.seed, Stream::Spikes, channel);
  const double fs = spec.sample_rate_hz;
  const auto count = static_cast<std::size_t>(std::lround(spec.spike_rate_hz * spec.duration_s));
  const double lo = std::min(kSpikeEdgeS, spec.duration_s / 2.0);
  const double hi = std::max(lo, spec.duration_s - kSpikeEdgeS);
  const double osc_rms = spec.burst_amplitude / std::numbers::sqrt2;

  std::vector<double> times;
  for (std::size_t s = 0; s < count; ++s) {
    const bool want_overlap = uniform(rng, 0.0, 1.0) < spec.overlap_fraction;
    for (int attempt = 0; attempt < 2000; ++attempt) {
      const double t = uniform(rng, lo, hi);
      // Give up on the overlap preference after many misses (e.g. no bursts).
      if (attempt < 1000 && inside_any(windows, t) != want_overlap) continue;
      const bool crowded = std::ranges::any_of(
          times, [t](double other) { return std::abs(other - t) < kMinSpikeGapS; });
      if (crowded) continue;
      times.push_back(t);
      break;
    }
  }
  std::ranges::sort(times);

  std::vector<InjectedSpike> spikes;
  spikes.reserve(times.size());
  for (double t : times) {
    SpikeModelParams p;
    p.center_s = t;
    p.amplitude = uniform(rng, kMinSpikeRms, kMaxSpikeRms) * osc_rms;
    const double fwhm = uniform(rng, kMinLobeFwhmS, kMaxLobeFwhmS);
    p.scale_s2 = (0.25 * fwhm * fwhm) / std::numbers::ln2;
    p.asymmetry_s = uniform(rng, -kMaxAsymmetryS, kMaxAsymmetryS);
    p.polarity = uniform(rng, 0.0, 1.0) < 0.5 ? 1 : -1;
    add_spike_model(p, fs, row);
    spikes.push_back({p});
  }
  return spikes;
}

}  // namespace

void validate(const SimulationSpec& spec) {
  if (spec.n_channels < 1) bad_field("n_channels", "must be >= 1");
  if (!(spec.sample_rate_hz > 0.0) || !std::isfinite(spec.sample_rate_hz))
    bad_field("sample_rate_hz", "must be positive and finite");
  if (!(spec.duration_s > 0.0) || !std::isfinite(spec.duration_s))
    bad_field("duration_s", "must be positive and finite");
  if (std::lround(spec.duration_s * spec.sample_rate_hz) < 1)
    bad_field("duration_s", "yields no samples at this sample rate");
  if (std::isnan(spec.snr_db) || spec.snr_db == -std::numeric_limits<double>::infinity())
    bad_field("snr_db", "must be finite or +infinity");
  if (!(spec.spike_rate_hz >= 0.0) || !std::isfinite(spec.spike_rate_hz))
    bad_field("spike_rate_hz", "must be >= 0");
  const auto& g = spec.gamma_band;
  if (!(g.low_hz > 0.0 && g.low_hz < g.high_hz && g.high_hz < spec.sample_rate_hz / 2.0))
    bad_field("gamma_band", "must satisfy 0 < low < high < sample_rate/2");
  if (!(spec.overlap_fraction >= 0.0 && spec.overlap_fraction <= 1.0))
    bad_field("overlap_fraction", "must lie in [0, 1]");
  if (!(spec.ictal_onset_s >= 0.0) || !std::isfinite(spec.ictal_onset_s))
    bad_field("ictal_onset_s", "must be >= 0");
  if (spec.seizure_channel >= spec.n_channels)
    bad_field("seizure_channel", "must index an existing channel");
  if (!(spec.burst_amplitude > 0.0)) bad_field("burst_amplitude", "must be > 0");
  if (!(spec.ictal_amplitude >= 0.0)) bad_field("ictal_amplitude", "must be >= 0");
  if (!(spec.burst_interval_s >= kMinBurstS)) bad_field("burst_interval_s", "must be >= 0.2 s");
}

double mean_power(const Matrix& m) noexcept {
  if (m.empty()) return 0.0;
  double acc = 0.0;
  for (double v : m.flat()) acc += v * v;
  return acc / static_cast<double>(m.flat().size());
}

Matrix white_noise_for(const Matrix& data, double snr_db, std::uint64_t seed) {
  Matrix noise(data.rows(), data.cols());
  if (snr_db == std::numeric_limits<double>::infinity()) return noise;
  require(std::isfinite(snr_db), "white noise: snr_db must be finite or +infinity");
  const double signal_power = mean_power(data);
  require(signal_power > 0.0, "white noise: signal power is zero, SNR undefined");

  parallel_for(data.rows(), [&](std::size_t c) {
    auto rng = substream(seed, Stream::Noise, c);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& v : noise.row(c)) v = gauss(rng);
  });
  const double target = signal_power / std::pow(10.0, snr_db / 10.0);
  const double scale = std::sqrt(target / mean_power(noise));
  for (double& v : noise.flat()) v *= scale;
  return noise;
}

Matrix add_white_noise(const Matrix& data, double snr_db, std::uint64_t seed) {
  Matrix out = white_noise_for(data, snr_db, seed);
  auto dst = out.flat();
  auto src = data.flat();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] + dst[i];
  return out;
}

std::pair<Recording, GroundTruth> synthesize_recording(const SimulationSpec& spec) {
  validate(spec);
  const auto n = static_cast<std::size_t>(std::lround(spec.duration_s * spec.sample_rate_hz));
  const std::size_t ch = spec.n_channels;

  GroundTruth truth;
  truth.spike_component = Matrix(ch, n);
  truth.oscillation_component = Matrix(ch, n);
  truth.burst_windows.resize(ch);
  truth.spikes.resize(ch);
  truth.ictal_onset_s = spec.ictal_onset_s;
  truth.seizure_channel = spec.seizure_channel;

  parallel_for(ch, [&](std::size_t c) {
    truth.burst_windows[c] = make_oscillations(spec, c, truth.oscillation_component.row(c));
    truth.spikes[c] = make_spikes(spec, c, truth.burst_windows[c], truth.spike_component.row(c));
  });

  Matrix clean(ch, n);
  {
    auto dst = clean.flat();
    auto s = truth.spike_component.flat();
    auto o = truth.oscillation_component.flat();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = s[i] + o[i];
  }
  truth.noise_component = white_noise_for(clean, spec.snr_db, spec.seed);

  Recording rec;
  rec.sample_rate_hz = spec.sample_rate_hz;
  rec.labels = default_labels(ch);
  rec.data = Matrix(ch, n);
  auto dst = rec.data.flat();
  auto c = clean.flat();
  auto z = truth.noise_component.flat();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = c[i] + z[i];
  return {std::move(rec), std::move(truth)};
}

}  // namespace preictal
