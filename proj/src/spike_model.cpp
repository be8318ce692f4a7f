#include "preictal/spike_model.hpp"

#include <algorithm>
#include <cmath>

namespace preictal {

double spike_model_value(const SpikeModelParams& p, double t) noexcept {
  const double dt = t - p.center_s;
  if (dt < 0.0) {
    const double u = dt + p.asymmetry_s;
    return -p.polarity * p.amplitude * std::exp(-(u * u) / p.scale_s2);
  }
  if (dt > 0.0) {
    const double u = dt - p.asymmetry_s;
    return p.polarity * p.amplitude * std::exp(-(u * u) / p.scale_s2);
  }
  return 0.0;
}

std::vector<double> evaluate_spike_model(const SpikeModelParams& p, std::span<const double> times) {
  std::vector<double> out(times.size());
  std::ranges::transform(times, out.begin(), [&](double t) { return spike_model_value(p, t); });
  return out;
}

double spike_model_support_s(const SpikeModelParams& p) noexcept {
  // exp(-u^2/b) < 1e-16 once u^2 > 36.9 b
  return std::abs(p.asymmetry_s) + std::sqrt(37.0 * p.scale_s2);
}

void add_spike_model(const SpikeModelParams& p, double sample_rate_hz, std::span<double> out,
                     double scale) {
  if (out.empty()) return;
  const double support = spike_model_support_s(p);
  const double lo = std::floor((p.center_s - support) * sample_rate_hz);
  const double hi = std::ceil((p.center_s + support) * sample_rate_hz);
  const auto n = static_cast<double>(out.size());
  const auto first = static_cast<std::size_t>(std::clamp(lo, 0.0, n));
  const auto last = static_cast<std::size_t>(std::clamp(hi + 1.0, 0.0, n));
  for (std::size_t i = first; i < last; ++i) {
    out[i] += scale * spike_model_value(p, static_cast<double>(i) / sample_rate_hz);
  }
}

}  // namespace preictal
