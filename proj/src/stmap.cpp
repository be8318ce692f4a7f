#include "preictal/stmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "preictal/error.hpp"
#include "preictal/padding.hpp"
#include "preictal/parallel.hpp"
#include "preictal/tfmap.hpp"

namespace preictal {

namespace {

constexpr double kMinBaselineS = 1.0;

bool same_axes(const SpatioTemporalMap& a, const SpatioTemporalMap& b) {
  return a.values.rows() == b.values.rows() && a.values.cols() == b.values.cols() &&
         a.times_s == b.times_s;
}

}  // namespace

SpatioTemporalMap band_energy_map(const Recording& rec, const Band& band, double omega,
                                  double freq_step_hz) {
  validate(rec);
  validate_band(band, rec.sample_rate_hz, "stmap");
  MorletSpec spec;
  spec.omega = omega;
  spec.freqs_hz = frequency_grid(band.low_hz, band.high_hz, freq_step_hz);

  SpatioTemporalMap map;
  map.labels = rec.labels;
  map.sample_rate_hz = rec.sample_rate_hz;
  map.gamma_band = band;
  map.values = Matrix(rec.n_channels(), rec.n_samples());
  map.times_s.resize(rec.n_samples());
  for (std::size_t i = 0; i < rec.n_samples(); ++i) {
    map.times_s[i] = static_cast<double>(i) / rec.sample_rate_hz;
  }
  const double inv = 1.0 / static_cast<double>(spec.freqs_hz.size());
  parallel_for(rec.n_channels(), [&](std::size_t c) {
    const TimeFrequencyMap tf = wavelet_transform(rec.data.row(c), rec.sample_rate_hz, spec);
    auto out = map.values.row(c);
    for (std::size_t f = 0; f < tf.power.rows(); ++f) {
      const auto row = tf.power.row(f);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += row[i];
    }
    for (double& v : out) v *= inv;
  });
  return map;
}

SpatioTemporalMap normalize_by_low_band(const SpatioTemporalMap& gamma, const SpatioTemporalMap& low,
                                        std::optional<double> epsilon) {
  if (!same_axes(gamma, low)) {
    fail(ErrorCode::InvalidArgument, "stmap normalize: gamma and low-band maps differ in shape");
  }
  if (epsilon) require(*epsilon >= 0.0, "stmap normalize: epsilon must be >= 0");
  SpatioTemporalMap out = gamma;
  out.norm_band = low.gamma_band;
  const std::size_t cols = low.values.cols();
  for (std::size_t c = 0; c < low.values.rows(); ++c) {
    const auto num = gamma.values.row(c);
    const auto den = low.values.row(c);
    auto dst = out.values.row(c);
    double eps = 0.0;
    if (epsilon) {
      eps = *epsilon;
    } else {
      // Per row, so a channel gain scales numerator, denominator and guard alike.
      double total = 0.0;
      for (double v : den) total += v;
      eps = 1e-12 * total / static_cast<double>(std::max<std::size_t>(cols, 1));
    }
    for (std::size_t i = 0; i < cols; ++i) {
      const double d = den[i] + eps;
      dst[i] = d > 0.0 ? num[i] / d : 0.0;
    }
  }
  return out;
}

SpatioTemporalMap smooth_map(const SpatioTemporalMap& map, double window_ms) {
  require(window_ms >= 0.0, "stmap smooth: window_ms must be >= 0");
  if (window_ms == 0.0) return map;
  require(map.sample_rate_hz > 0.0, "stmap smooth: map has no sample rate");
  const auto half = static_cast<std::size_t>(std::lround(window_ms * map.sample_rate_hz / 2000.0));
  SpatioTemporalMap out = map;
  out.smoothed_ms = window_ms;
  parallel_for(map.values.rows(), [&](std::size_t c) {
    const std::vector<double> row = moving_average(map.values.row(c), half);
    std::ranges::copy(row, out.values.row(c).begin());
  });
  return out;
}

SpatioTemporalMap log_scale(const SpatioTemporalMap& map) {
  double floor = std::numeric_limits<double>::infinity();
  for (double v : map.values.flat()) {
    if (v > 0.0) floor = std::min(floor, v);
  }
  if (!std::isfinite(floor)) floor = 1.0;
  SpatioTemporalMap out = map;
  out.log_scaled = true;
  for (double& v : out.values.flat()) v = std::log10(std::max(v, floor));
  return out;
}

BuildupReport detect_buildup(const SpatioTemporalMap& map, const BuildupConfig& cfg) {
  require(cfg.k_sigma >= 0.0, "detect_buildup: k_sigma must be >= 0");
  require(cfg.min_duration_ms >= 0.0, "detect_buildup: min_duration_ms must be >= 0");
  require(cfg.baseline_fraction > 0.0 && cfg.baseline_fraction <= 1.0,
          "detect_buildup: baseline_fraction must lie in (0, 1]");
  require(map.sample_rate_hz > 0.0, "detect_buildup: map has no sample rate");
  const std::size_t n = map.values.cols();
  const auto n_base = static_cast<std::size_t>(std::floor(cfg.baseline_fraction * static_cast<double>(n)));
  const double baseline_s = static_cast<double>(n_base) / map.sample_rate_hz;
  if (baseline_s < kMinBaselineS) {
    std::ostringstream msg;
    msg << "detect_buildup: baseline of " << baseline_s << " s (first "
        << cfg.baseline_fraction * 100.0 << "% of the record) is shorter than " << kMinBaselineS << " s";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  const auto min_run = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(cfg.min_duration_ms * map.sample_rate_hz / 1000.0 - 1e-9)));

  BuildupReport report;
  report.threshold_used = cfg.k_sigma;
  report.baseline_s = baseline_s;
  for (std::size_t c = 0; c < map.values.rows(); ++c) {
    const auto row = map.values.row(c);
    double mean = 0.0;
    for (std::size_t i = 0; i < n_base; ++i) mean += row[i];
    mean /= static_cast<double>(n_base);
    double var = 0.0;
    for (std::size_t i = 0; i < n_base; ++i) var += (row[i] - mean) * (row[i] - mean);
    const double sigma = std::sqrt(var / static_cast<double>(n_base));

    ChannelBuildup ch;
    ch.channel = c;
    ch.label = c < map.labels.size() ? map.labels[c] : std::to_string(c + 1);
    ch.threshold = mean + cfg.k_sigma * sigma;
    ch.peak_value = *std::ranges::max_element(row);
    std::size_t run = 0;
    for (std::size_t i = 0; i < n; ++i) {
      run = row[i] > ch.threshold ? run + 1 : 0;
      if (run >= min_run) {
        ch.onset_s = map.times_s[i + 1 - run];
        break;
      }
    }
    if (ch.onset_s && (!report.onset_s || *ch.onset_s < *report.onset_s)) report.onset_s = ch.onset_s;
    report.ranked_channels.push_back(std::move(ch));
  }
  std::ranges::stable_sort(report.ranked_channels, [](const ChannelBuildup& a, const ChannelBuildup& b) {
    return a.peak_value > b.peak_value;
  });
  return report;
}

StmapResult run_stmap(const Recording& rec, const StmapConfig& cfg) {
  return run_stmap(rec, rec, cfg);
}

StmapResult run_stmap(const Recording& rec, const Recording& norm_source, const StmapConfig& cfg) {
  require(rec.data.rows() == norm_source.data.rows() && rec.data.cols() == norm_source.data.cols() &&
              rec.sample_rate_hz == norm_source.sample_rate_hz,
          "stmap: normalization source differs in shape or sample rate");
  const SpatioTemporalMap gamma = band_energy_map(rec, cfg.gamma_band, cfg.omega, cfg.freq_step_hz);
  const SpatioTemporalMap low = band_energy_map(norm_source, cfg.norm_band, cfg.omega, cfg.freq_step_hz);
  StmapResult result;
  result.map = smooth_map(normalize_by_low_band(gamma, low), cfg.smooth_ms);
  result.report = detect_buildup(result.map, cfg.buildup);
  return result;
}

}  // namespace preictal
