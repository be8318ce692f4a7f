#include "preictal/swt.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

#include "preictal/error.hpp"
#include "preictal/fir.hpp"
#include "preictal/kernels.hpp"
#include "preictal/padding.hpp"
#include "preictal/parallel.hpp"
#include "preictal/wavelets.hpp"

namespace preictal {

namespace {

constexpr double kEnvelopeWindowS = 0.050;
constexpr double kMaxSpikeRunS = 0.200;

std::size_t max_levels(std::size_t n) {
  return n < 2 ? 0 : static_cast<std::size_t>(std::bit_width(n) - 1);
}

// out[n] = sum_k h[k] x[(n - k*step) mod N]
void circular_convolve(std::span<const double> x, std::span<const double> h, std::size_t step,
                       std::span<double> out) {
  const std::size_t span = (h.size() - 1) * step;
  const std::vector<double> ext = periodic_pad_left(x, span);
  std::vector<double> reversed(h.rbegin(), h.rend());
  kernels::correlate(ext, reversed, step, out);
}

// out[n] = sum_k h[k] x[(n + k*step) mod N]
void circular_correlate(std::span<const double> x, std::span<const double> h, std::size_t step,
                        std::span<double> out) {
  const std::size_t span = (h.size() - 1) * step;
  const std::vector<double> ext = periodic_pad_right(x, span);
  kernels::correlate(ext, h, step, out);
}

std::pair<std::size_t, std::size_t> sample_range(const TimeInterval& iv, double fs, std::size_t n) {
  const double lo = std::ceil(iv.start_s * fs - 1e-9);
  const double hi = std::floor(iv.end_s * fs + 1e-9) + 1.0;
  const auto clamp = [n](double v) {
    return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(n)));
  };
  return {clamp(lo), clamp(hi)};
}

void validate_intervals(const std::vector<TimeInterval>& keep, double duration) {
  std::vector<TimeInterval> sorted = keep;
  std::ranges::sort(sorted, {}, &TimeInterval::start_s);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& iv = sorted[i];
    require(iv.start_s >= 0.0 && iv.start_s <= iv.end_s && iv.end_s <= duration + 1e-9,
            "swt mask: interval outside the record duration");
    if (i > 0) require(iv.start_s > sorted[i - 1].end_s, "swt mask: overlapping keep intervals");
  }
}

void mask_plane(std::vector<double>& plane, const LevelMask& mask, double fs, double fraction) {
  switch (mask.kind) {
    case LevelMask::Kind::KeepAll:
      return;
    case LevelMask::Kind::ZeroAll:
      std::ranges::fill(plane, 0.0);
      return;
    case LevelMask::Kind::Intervals:
    case LevelMask::Kind::Auto: {
      const std::vector<TimeInterval> keep = mask.kind == LevelMask::Kind::Auto
                                                 ? auto_keep_intervals(plane, fs, fraction)
                                                 : mask.keep;
      std::vector<char> kept(plane.size(), 0);
      for (const auto& iv : keep) {
        const auto [lo, hi] = sample_range(iv, fs, plane.size());
        std::fill(kept.begin() + static_cast<std::ptrdiff_t>(lo),
                  kept.begin() + static_cast<std::ptrdiff_t>(hi), 1);
      }
      for (std::size_t i = 0; i < plane.size(); ++i) {
        if (!kept[i]) plane[i] = 0.0;
      }
      return;
    }
  }
}

}  // namespace

WaveletPlanes swt_decompose(std::span<const double> signal, std::string_view wavelet_name,
                            std::size_t levels, double sample_rate_hz) {
  const OrthogonalWavelet& w = wavelet_by_name(wavelet_name);
  const std::size_t n = signal.size();
  require(sample_rate_hz > 0.0, "swt: sample rate must be positive");
  if (n < w.lowpass.size()) {
    std::ostringstream msg;
    msg << "swt: signal length " << n << " is shorter than the " << w.name << " filter ("
        << w.lowpass.size() << " taps)";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  if (levels < 1 || levels > max_levels(n)) {
    std::ostringstream msg;
    msg << "swt: levels=" << levels << " must lie in [1, floor(log2(" << n
        << "))] = [1, " << max_levels(n) << "]";
    fail(ErrorCode::InvalidArgument, msg.str());
  }

  WaveletPlanes planes;
  planes.wavelet_name = w.name;
  planes.sample_rate_hz = sample_rate_hz;
  planes.details.assign(levels, std::vector<double>(n));
  std::vector<double> approx(signal.begin(), signal.end());
  std::vector<double> next(n);
  for (std::size_t j = 1; j <= levels; ++j) {
    const std::size_t step = std::size_t{1} << (j - 1);
    circular_convolve(approx, w.highpass, step, planes.details[j - 1]);
    circular_convolve(approx, w.lowpass, step, next);
    approx.swap(next);
  }
  planes.approx = std::move(approx);
  return planes;
}

std::vector<double> iswt_reconstruct(const WaveletPlanes& planes) {
  const OrthogonalWavelet& w = wavelet_by_name(planes.wavelet_name);
  const std::size_t n = planes.size();
  require(planes.levels() >= 1, "iswt: no detail planes");
  for (const auto& d : planes.details) {
    require(d.size() == n, "iswt: detail and approximation planes differ in length");
  }
  std::vector<double> approx = planes.approx;
  std::vector<double> low(n);
  std::vector<double> high(n);
  for (std::size_t j = planes.levels(); j >= 1; --j) {
    const std::size_t step = std::size_t{1} << (j - 1);
    circular_correlate(approx, w.lowpass, step, low);
    circular_correlate(planes.details[j - 1], w.highpass, step, high);
    for (std::size_t i = 0; i < n; ++i) approx[i] = 0.5 * (low[i] + high[i]);
  }
  return approx;
}

MaskSpec MaskSpec::uniform(std::size_t levels, LevelMask mask, double threshold_fraction) {
  MaskSpec spec;
  spec.details.assign(levels, mask);
  spec.approx = std::move(mask);
  spec.threshold_fraction = threshold_fraction;
  return spec;
}

MaskSpec parse_mask(std::string_view text, std::size_t levels) {
  if (text == "keep-all") return MaskSpec::uniform(levels, LevelMask::keep_all());
  if (text == "zero-all") return MaskSpec::uniform(levels, LevelMask::zero_all());
  if (text == "auto") return MaskSpec::uniform(levels, LevelMask::automatic());
  if (text.starts_with("auto:")) {
    const std::string_view value = text.substr(5);
    double fraction = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), fraction);
    if (ec == std::errc{} && ptr == value.data() + value.size() && fraction >= 0.0 &&
        fraction <= 1.0) {
      return MaskSpec::uniform(levels, LevelMask::automatic(), fraction);
    }
  }
  fail(ErrorCode::InvalidArgument,
       "swt mask: expected auto[:fraction in 0..1], keep-all or zero-all, got '" +
           std::string(text) + "'");
}

std::vector<TimeInterval> auto_keep_intervals(std::span<const double> plane,
                                              double sample_rate_hz, double threshold_fraction) {
  const std::size_t n = plane.size();
  const double fs = sample_rate_hz;
  if (n == 0) return {};

  const auto half = static_cast<std::size_t>(std::lround(kEnvelopeWindowS * fs / 2.0));
  std::vector<double> magnitude(n);
  std::ranges::transform(plane, magnitude.begin(), [](double v) { return std::abs(v); });
  const std::vector<double> envelope = moving_average(magnitude, half);

  const double peak = *std::ranges::max_element(envelope);
  const double duration = static_cast<double>(n) / fs;
  if (!(peak > 0.0)) return {{0.0, duration}};
  const double threshold = threshold_fraction * peak;
  const auto max_spike_run = static_cast<std::size_t>(std::lround(kMaxSpikeRunS * fs));

  std::vector<char> keep(n, 1);
  for (std::size_t i = 0; i < n;) {
    if (envelope[i] <= threshold) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && envelope[j] > threshold) ++j;
    if (j - i < max_spike_run) std::fill(keep.begin() + static_cast<std::ptrdiff_t>(i),
                                         keep.begin() + static_cast<std::ptrdiff_t>(j), 0);
    i = j;
  }

  std::vector<TimeInterval> intervals;
  for (std::size_t i = 0; i < n;) {
    if (!keep[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && keep[j]) ++j;
    intervals.push_back({static_cast<double>(i) / fs, static_cast<double>(j - 1) / fs});
    i = j;
  }
  return intervals;
}

WaveletPlanes apply_mask(const WaveletPlanes& planes, const MaskSpec& mask) {
  require(mask.details.size() == planes.levels(),
          "swt mask: number of level masks does not match the decomposition depth");
  require(mask.threshold_fraction >= 0.0 && mask.threshold_fraction <= 1.0,
          "swt mask: threshold_fraction must lie in [0, 1]");
  const double duration = static_cast<double>(planes.size()) / planes.sample_rate_hz;
  for (const auto& m : mask.details) validate_intervals(m.keep, duration);
  validate_intervals(mask.approx.keep, duration);

  WaveletPlanes out = planes;
  for (std::size_t j = 0; j < out.levels(); ++j) {
    mask_plane(out.details[j], mask.details[j], out.sample_rate_hz, mask.threshold_fraction);
  }
  mask_plane(out.approx, mask.approx, out.sample_rate_hz, mask.threshold_fraction);
  return out;
}

Recording extract_oscillations_swt(const Recording& rec, const SwtFilterConfig& cfg) {
  validate(rec);
  const MaskSpec mask = cfg.mask ? *cfg.mask
                                 : MaskSpec::uniform(cfg.levels, LevelMask::automatic(),
                                                     cfg.threshold_fraction);
  if (cfg.band) validate_band(*cfg.band, rec.sample_rate_hz, "swt");

  Matrix out(rec.n_channels(), rec.n_samples());
  parallel_for(rec.n_channels(), [&](std::size_t c) {
    const WaveletPlanes planes =
        swt_decompose(rec.data.row(c), cfg.wavelet, cfg.levels, rec.sample_rate_hz);
    std::vector<double> y = iswt_reconstruct(apply_mask(planes, mask));
    if (cfg.band) y = bandpass(y, rec.sample_rate_hz, *cfg.band);
    std::ranges::copy(y, out.row(c).begin());
  });
  return with_data(rec, std::move(out));
}

}  // namespace preictal
