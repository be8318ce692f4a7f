#include "preictal/fir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "preictal/error.hpp"
#include "preictal/kernels.hpp"
#include "preictal/padding.hpp"
#include "preictal/parallel.hpp"

namespace preictal {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

std::size_t tap_count(const Band& band, double fs) {
  const double narrowest = std::min(band.low_hz, band.high_hz - band.low_hz);
  auto n = static_cast<std::size_t>(std::lround(6.0 * fs / narrowest));
  if (n % 2 == 0) ++n;
  return std::max<std::size_t>(n, 3);
}

}  // namespace

std::vector<double> design_bandpass(const Band& band, double sample_rate_hz) {
  validate_band(band, sample_rate_hz, "bandpass");
  const std::size_t n = tap_count(band, sample_rate_hz);
  const auto half = static_cast<long long>(n / 2);
  const double f1 = band.low_hz / sample_rate_hz;
  const double f2 = band.high_hz / sample_rate_hz;

  // Left half computed, right half mirrored: exact symmetry, exact linear phase.
  std::vector<double> taps(n);
  for (std::size_t j = 0; j <= n / 2; ++j) {
    const double m = static_cast<double>(static_cast<long long>(j) - half);
    const double ideal = 2.0 * f2 * sinc(2.0 * f2 * m) - 2.0 * f1 * sinc(2.0 * f1 * m);
    const double window =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n - 1));
    taps[j] = ideal * window;
    taps[n - 1 - j] = taps[j];
  }

  const double centre = 0.5 * (f1 + f2);
  double gain = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double m = static_cast<double>(static_cast<long long>(j) - half);
    gain += taps[j] * std::cos(2.0 * std::numbers::pi * centre * m);
  }
  for (double& t : taps) t /= gain;
  return taps;
}

std::vector<double> apply_fir(std::span<const double> x, std::span<const double> taps) {
  const std::size_t half = taps.size() / 2;
  const std::vector<double> padded = reflect_pad(x, half, half);
  std::vector<double> out(x.size());
  kernels::correlate(padded, taps, 1, out);
  return out;
}

Recording bandpass_filter(const Recording& rec, const Band& band) {
  const std::vector<double> taps = design_bandpass(band, rec.sample_rate_hz);
  Matrix out(rec.n_channels(), rec.n_samples());
  parallel_for(rec.n_channels(), [&](std::size_t c) {
    const std::vector<double> y = apply_fir(rec.data.row(c), taps);
    std::ranges::copy(y, out.row(c).begin());
  });
  return with_data(rec, std::move(out));
}

std::vector<double> bandpass(std::span<const double> x, double sample_rate_hz, const Band& band) {
  return apply_fir(x, design_bandpass(band, sample_rate_hz));
}

}  // namespace preictal
