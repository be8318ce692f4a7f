#include "preictal/evaluate.hpp"

#include <chrono>
#include <cmath>

#include "preictal/error.hpp"
#include "preictal/fir.hpp"

namespace preictal {

namespace {

constexpr double kSpikeHalfWindowS = 0.050;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_shape(const Recording& filtered, const GroundTruth& truth, const char* what) {
  const Matrix& ref = truth.oscillation_component;
  if (filtered.data.rows() != ref.rows() || filtered.data.cols() != ref.cols()) {
    fail(ErrorCode::InvalidArgument, std::string(what) + ": filtered recording and ground truth differ in shape");
  }
}

// Per-sample membership in the union of [start, end] intervals.
std::vector<char> interval_mask(const std::vector<std::pair<double, double>>& intervals, double fs,
                                std::size_t n) {
  std::vector<char> mask(n, 0);
  for (const auto& [start, end] : intervals) {
    const auto lo = static_cast<long long>(std::ceil(start * fs - 1e-9));
    const auto hi = static_cast<long long>(std::floor(end * fs + 1e-9));
    for (long long i = std::max(0LL, lo); i <= std::min(static_cast<long long>(n) - 1, hi); ++i) {
      mask[static_cast<std::size_t>(i)] = 1;
    }
  }
  return mask;
}

// `output` is the method's spike-removal result before the gamma band-pass.
// The band-pass is common to every method and removes most spike energy by
// itself, so spike residuals are scored ahead of it.
MethodReport score(std::string method, const Recording& output, const GroundTruth& truth,
                   const SimulationSpec& spec, const EvaluationConfig& cfg, double runtime_s) {
  MethodReport m;
  m.method = std::move(method);
  m.spike_residual_fraction = residual_spike_energy(output, truth).value_or(0.0);
  m.oscillation_recovery_corr = oscillation_recovery_score(output, truth, cfg.band).value_or(0.0);
  const StmapResult st = run_stmap(output, cfg.stmap);
  m.buildup_onset_s = st.report.onset_s;
  if (st.report.onset_s) m.buildup_onset_error_s = std::abs(*st.report.onset_s - spec.ictal_onset_s);
  if (!st.report.ranked_channels.empty()) {
    const ChannelBuildup& top = st.report.ranked_channels.front();
    m.top_channel = top.label;
    m.buildup_channel_correct = top.channel == truth.seizure_channel;
  }
  m.runtime_s = runtime_s;
  return m;
}

}  // namespace

Matrix unfiltered_data(const GroundTruth& truth) {
  Matrix out(truth.spike_component.rows(), truth.spike_component.cols());
  const auto s = truth.spike_component.flat();
  const auto o = truth.oscillation_component.flat();
  const auto w = truth.noise_component.flat();
  auto dst = out.flat();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (s[i] + o[i]) + w[i];
  return out;
}

std::optional<double> residual_spike_energy(const Recording& filtered, const GroundTruth& truth) {
  check_shape(filtered, truth, "residual_spike_energy");
  const Matrix raw = unfiltered_data(truth);
  const std::size_t n = raw.cols();
  double num = 0.0;
  double den = 0.0;
  bool any = false;
  for (std::size_t c = 0; c < raw.rows() && c < truth.spikes.size(); ++c) {
    std::vector<std::pair<double, double>> windows;
    for (const auto& s : truth.spikes[c]) {
      windows.emplace_back(s.params.center_s - kSpikeHalfWindowS, s.params.center_s + kSpikeHalfWindowS);
    }
    if (windows.empty()) continue;
    any = true;
    const std::vector<char> mask = interval_mask(windows, filtered.sample_rate_hz, n);
    const auto f = filtered.data.row(c);
    const auto r = raw.row(c);
    for (std::size_t i = 0; i < n; ++i) {
      if (!mask[i]) continue;
      num += f[i] * f[i];
      den += r[i] * r[i];
    }
  }
  if (!any || den <= 0.0) return std::nullopt;
  return num / den;
}

std::optional<double> oscillation_recovery_score(const Recording& filtered, const GroundTruth& truth,
                                                 const Band& band) {
  check_shape(filtered, truth, "oscillation_recovery_score");
  const Recording truth_osc = with_data(filtered, truth.oscillation_component);
  const Recording a = bandpass_filter(filtered, band);
  const Recording b = bandpass_filter(truth_osc, band);
  const std::size_t n = a.n_samples();
  double total = 0.0;
  std::size_t channels = 0;
  for (std::size_t c = 0; c < a.n_channels() && c < truth.burst_windows.size(); ++c) {
    std::vector<std::pair<double, double>> windows;
    for (const auto& w : truth.burst_windows[c]) windows.emplace_back(w.start_s, w.end_s);
    if (windows.empty()) continue;
    const std::vector<char> mask = interval_mask(windows, filtered.sample_rate_hz, n);
    const auto x = a.data.row(c);
    const auto y = b.data.row(c);
    double mx = 0.0, my = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!mask[i]) continue;
      mx += x[i];
      my += y[i];
      ++count;
    }
    if (count < 2) continue;
    mx /= static_cast<double>(count);
    my /= static_cast<double>(count);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!mask[i]) continue;
      const double dx = x[i] - mx;
      const double dy = y[i] - my;
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
    // A silent output carries no oscillation: correlation 0.
    total += (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    ++channels;
  }
  if (channels == 0) return std::nullopt;
  return total / static_cast<double>(channels);
}

ComparisonReport compare_methods(const SimulationSpec& spec, const EvaluationConfig& cfg) {
  const auto [rec, truth] = synthesize_recording(spec);
  ComparisonReport report;
  report.seed = spec.seed;

  report.none = score("none", rec, truth, spec, cfg, 0.0);

  auto start = Clock::now();
  SwtFilterConfig full_band_swt = cfg.swt;
  full_band_swt.band.reset();
  const Recording swt_out = extract_oscillations_swt(rec, full_band_swt);
  report.swt = score("swt", swt_out, truth, spec, cfg, seconds_since(start));

  start = Clock::now();
  const DespikeResult ds = despike_recording(rec, cfg.despike);
  report.despike = score("despike", ds.despiked, truth, spec, cfg, seconds_since(start));
  return report;
}

bool buildup_ok(const MethodReport& m, double tolerance_s) {
  return m.buildup_channel_correct && m.buildup_onset_error_s && std::abs(*m.buildup_onset_error_s) <= tolerance_s;
}

MultiSeedSummary compare_methods_seeds(const SimulationSpec& spec, std::uint64_t first_seed,
                                       std::size_t n_seeds, const EvaluationConfig& cfg) {
  const auto start = Clock::now();
  MultiSeedSummary summary;
  for (std::size_t i = 0; i < n_seeds; ++i) {
    SimulationSpec s = spec;
    s.seed = first_seed + i;
    ComparisonReport r = compare_methods(s, cfg);
    summary.despike_beats_swt += r.despike.spike_residual_fraction < r.swt.spike_residual_fraction;
    summary.despike_residual_ok += r.despike.spike_residual_fraction <= 0.2;
    summary.swt_below_none += r.swt.spike_residual_fraction < 1.0;
    summary.despike_buildup_ok += buildup_ok(r.despike);
    summary.swt_buildup_ok += buildup_ok(r.swt);
    summary.runs.push_back(std::move(r));
  }
  summary.runtime_s = seconds_since(start);
  return summary;
}

}  // namespace preictal
