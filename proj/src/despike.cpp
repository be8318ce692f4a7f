#include "preictal/despike.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "preictal/error.hpp"
#include "preictal/padding.hpp"
#include "preictal/parallel.hpp"

namespace preictal {

namespace {

constexpr std::size_t kMinWindowSamples = 20;
constexpr double kClusterSearchS = 0.040;
constexpr std::size_t kSearchPasses = 2;
// Extrema this much smaller than an accepted one within its fit window are
// treated as ringing of the emphasis filter, not as separate spikes.
constexpr double kSidelobeRatio = 0.25;
constexpr double kAmplitudeFloor = std::numeric_limits<double>::min();

// Lobe FWHM grid (s) scanned by the initial search.
constexpr double kFwhmGrid[] = {0.008, 0.011, 0.016, 0.022, 0.032, 0.045, 0.064, 0.090, 0.128};

double fwhm_to_scale(double fwhm) { return 0.25 * fwhm * fwhm / std::numbers::ln2; }

std::size_t to_samples(double seconds, double fs) {
  return static_cast<std::size_t>(std::lround(std::max(0.0, seconds) * fs));
}

// Samples [first, last] whose times fall inside the window.
std::pair<std::size_t, std::size_t> window_samples(const TimeWindow& w, double fs, std::size_t n) {
  const double lo = std::max(0.0, std::ceil(w.start_s * fs - 1e-9));
  const double hi = std::min(static_cast<double>(n) - 1.0, std::floor(w.end_s * fs + 1e-9));
  if (hi < lo) return {1, 0};
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

struct Bounds {
  double amp_min, amp_max, a_min, a_max, b_min, b_max, gamma_max;

  void clamp(SpikeModelParams& p) const {
    p.amplitude = std::clamp(p.amplitude, amp_min, amp_max);
    p.center_s = std::clamp(p.center_s, a_min, a_max);
    p.scale_s2 = std::clamp(p.scale_s2, b_min, b_max);
    p.asymmetry_s = std::clamp(p.asymmetry_s, -gamma_max, gamma_max);
  }
};

class WindowFit {
 public:
  WindowFit(std::span<const double> data, std::size_t first, double fs)
      : data_(data), first_(first), fs_(fs) {}

  std::size_t size() const { return data_.size(); }
  double time(std::size_t k) const { return static_cast<double>(first_ + k) / fs_; }

  double cost(std::span<const SpikeModelParams> ps) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k) {
      double model = 0.0;
      for (const auto& p : ps) model += spike_model_value(p, time(k));
      const double r = model - data_[k];
      acc += r * r;
    }
    return acc;
  }

  // Residuals and Jacobian wrt (A, a, b, gamma) of every template.
  void linearize(std::span<const SpikeModelParams> ps, Eigen::VectorXd& r, Eigen::MatrixXd& jac) const {
    const auto n = static_cast<Eigen::Index>(data_.size());
    const auto m = static_cast<Eigen::Index>(ps.size());
    r.resize(n);
    jac.setZero(n, 4 * m);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double t = time(static_cast<std::size_t>(k));
      double model = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        const auto& p = ps[static_cast<std::size_t>(j)];
        const double dt = t - p.center_s;
        if (dt == 0.0) continue;
        const bool left = dt < 0.0;
        const double u = left ? dt + p.asymmetry_s : dt - p.asymmetry_s;
        const double e = std::exp(-(u * u) / p.scale_s2);
        const double lobe = (left ? -1.0 : 1.0) * p.polarity;
        const double g = lobe * p.amplitude * e;
        model += g;
        const double du = 2.0 * u / p.scale_s2;
        jac(k, 4 * j + 0) = lobe * e;
        jac(k, 4 * j + 1) = g * du;
        jac(k, 4 * j + 2) = g * (u * u) / (p.scale_s2 * p.scale_s2);
        jac(k, 4 * j + 3) = left ? -g * du : g * du;
      }
      r(k) = model - data_[static_cast<std::size_t>(k)];
    }
  }

  // Grid search over centre (half-sample offsets), lobe width and polarity
  // with gamma = 0 and the amplitude solved in closed form. `target` excludes
  // the other templates. Returns false when nothing beats `p`.
  bool search(std::span<const double> target, SpikeModelParams& p, double a_lo, double a_hi,
              const Bounds& bounds) const {
    const std::size_t n = target.size();
    double base = 0.0;
    for (double v : target) base += v * v;
    {
      double current = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double r = spike_model_value(p, time(k)) - target[k];
        current += r * r;
      }
      best_cost_ = current;
    }
    bool improved = false;

    std::vector<double> scales;
    for (double w : kFwhmGrid) scales.push_back(fwhm_to_scale(w));
    scales.push_back(p.scale_s2);

    const auto first = static_cast<long long>(first_);
    const auto p_lo = static_cast<long long>(std::ceil(a_lo * fs_ - 0.5));
    const auto p_hi = static_cast<long long>(std::floor(a_hi * fs_ - 0.5));
    std::vector<double> kernel;
    for (double b : scales) {
      if (b < bounds.b_min || b > bounds.b_max) continue;
      {
        const double gamma = 0.0;
        // kernel[q + reach] = G(t_i - a) for q = i - p, a = (p + 0.5) / fs.
        const auto reach =
            static_cast<long long>(std::ceil((std::sqrt(37.0 * b) + std::abs(gamma)) * fs_)) + 1;
        kernel.assign(static_cast<std::size_t>(2 * reach + 1), 0.0);
        for (long long q = -reach; q <= reach; ++q) {
          const double dt = (static_cast<double>(q) - 0.5) / fs_;
          const double u = dt < 0.0 ? dt + gamma : dt - gamma;
          kernel[static_cast<std::size_t>(q + reach)] = (dt < 0.0 ? -1.0 : 1.0) * std::exp(-(u * u) / b);
        }
        for (long long pos = p_lo; pos <= p_hi; ++pos) {
          const long long k_lo = std::max<long long>(0, pos - reach - first);
          const long long k_hi = std::min<long long>(static_cast<long long>(n) - 1, pos + reach - first);
          double dot = 0.0;
          double norm = 0.0;
          for (long long k = k_lo; k <= k_hi; ++k) {
            const double g = kernel[static_cast<std::size_t>(k + first - pos + reach)];
            dot += target[static_cast<std::size_t>(k)] * g;
            norm += g * g;
          }
          if (norm <= 0.0 || dot == 0.0) continue;
          const double amp = std::clamp(std::abs(dot) / norm, bounds.amp_min, bounds.amp_max);
          const double cost = base - 2.0 * amp * std::abs(dot) + amp * amp * norm;
          if (cost < best_cost_) {
            best_cost_ = cost;
            p.amplitude = amp;
            p.center_s = (static_cast<double>(pos) + 0.5) / fs_;
            p.scale_s2 = b;
            p.asymmetry_s = gamma;
            p.polarity = dot > 0.0 ? 1 : -1;
            improved = true;
          }
        }
      }
    }
    return improved;
  }

 private:
  std::span<const double> data_;
  std::size_t first_;
  double fs_;
  mutable double best_cost_ = 0.0;
};

struct LmOutcome {
  std::size_t iterations = 0;
  bool converged = false;
  bool numeric_failure = false;
};

// Damped Gauss-Newton on (A, a, b, gamma) per template; centres flagged in
// `locked` stay put. Only cost-decreasing steps are accepted.
LmOutcome levenberg_marquardt(const WindowFit& fit, const Bounds& bounds, const FitOptions& options,
                              const std::vector<char>& locked, std::vector<SpikeModelParams>& params,
                              double& cost) {
  LmOutcome out;
  const auto dim = static_cast<Eigen::Index>(4 * params.size());
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  Eigen::MatrixXd jtj;
  Eigen::VectorXd jtr;
  std::vector<SpikeModelParams> trial(params.size());
  double lambda = 1e-3;
  bool relinearize = true;

  while (out.iterations < options.max_iterations && cost > 0.0) {
    if (relinearize) {
      fit.linearize(params, r, jac);
      for (std::size_t j = 0; j < params.size(); ++j) {
        if (locked[j]) jac.col(static_cast<Eigen::Index>(4 * j + 1)).setZero();
      }
      jtj = jac.transpose() * jac;
      jtr = jac.transpose() * r;
      relinearize = false;
    }
    ++out.iterations;
    const double diag_max = jtj.diagonal().maxCoeff();
    Eigen::MatrixXd h = jtj;
    for (Eigen::Index i = 0; i < dim; ++i) {
      h(i, i) += lambda * std::max(jtj(i, i), 1e-12 * diag_max + 1e-300);
    }
    const Eigen::VectorXd step = h.ldlt().solve(-jtr);
    if (!step.allFinite()) {
      lambda *= 4.0;
    } else {
      for (std::size_t j = 0; j < params.size(); ++j) {
        const auto o = static_cast<Eigen::Index>(4 * j);
        trial[j] = params[j];
        trial[j].amplitude += step(o + 0);
        if (!locked[j]) trial[j].center_s += step(o + 1);
        trial[j].scale_s2 += step(o + 2);
        trial[j].asymmetry_s += step(o + 3);
        bounds.clamp(trial[j]);
      }
      const double trial_cost = fit.cost(trial);
      if (!std::isfinite(trial_cost)) {
        out.numeric_failure = true;
        return out;
      }
      if (trial_cost < cost) {
        const double decrease = (cost - trial_cost) / cost;
        params = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-15);
        relinearize = true;
        if (decrease < options.tolerance) {
          out.converged = true;
          break;
        }
        continue;
      }
      lambda *= 4.0;
    }
    if (lambda > 1e16) {
      out.converged = true;
      break;
    }
  }
  if (cost == 0.0) out.converged = true;
  return out;
}

void check_init(const SpikeModelParams& p) {
  require(p.amplitude > 0.0 && std::isfinite(p.amplitude), "spike fit: initial amplitude must be > 0");
  require(p.scale_s2 > 0.0 && std::isfinite(p.scale_s2), "spike fit: initial scale b must be > 0");
  require(std::isfinite(p.center_s) && std::isfinite(p.asymmetry_s),
          "spike fit: initial centre and asymmetry must be finite");
  require(p.polarity == 1 || p.polarity == -1, "spike fit: polarity must be +1 or -1");
}

}  // namespace

std::vector<double> emphasize_spikes(std::span<const double> signal, double sample_rate_hz,
                                     const DetectionConfig& cfg) {
  const std::size_t short_half = to_samples(cfg.smooth_s / 2.0, sample_rate_hz);
  const std::size_t long_half = to_samples(cfg.baseline_s / 2.0, sample_rate_hz);
  // Two passes (triangular kernel) to keep gamma-band ripple out of the emphasis.
  const std::vector<double> fast = moving_average(moving_average(signal, short_half), short_half);
  const std::vector<double> slow = moving_average(signal, long_half);
  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fast[i] - slow[i];
  return out;
}

double robust_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> v(values.begin(), values.end());
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double median = *mid;
  for (double& x : v) x = std::abs(x - median);
  std::nth_element(v.begin(), mid, v.end());
  return 1.4826 * *mid;
}

std::vector<SpikeCandidate> detect_spikes(std::span<const double> signal, double sample_rate_hz,
                                          const DetectionConfig& cfg, std::size_t channel) {
  require(sample_rate_hz > 0.0, "detect_spikes: sample rate must be positive");
  const std::size_t n = signal.size();
  if (n < 3) return {};
  const std::vector<double> e = emphasize_spikes(signal, sample_rate_hz, cfg);
  double peak_e = 0.0;
  for (double v : e) peak_e = std::max(peak_e, std::abs(v));
  if (peak_e == 0.0) return {};
  const double sigma = std::max(robust_std(e), 1e-12 * peak_e);
  const double threshold = cfg.k * sigma;

  struct Extremum {
    std::size_t index;
    double magnitude;
  };
  std::vector<Extremum> extrema;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double m = std::abs(e[i]);
    if (m > threshold && m >= std::abs(e[i - 1]) && m > std::abs(e[i + 1])) extrema.push_back({i, m});
  }
  // Largest first; anything within min_separation of an accepted extremum merges into it.
  std::ranges::sort(extrema, [](const Extremum& a, const Extremum& b) {
    return a.magnitude != b.magnitude ? a.magnitude > b.magnitude : a.index < b.index;
  });
  const std::size_t sep = to_samples(cfg.min_separation_s, sample_rate_hz);
  const std::size_t reach = to_samples(cfg.window_half_s, sample_rate_hz);
  std::vector<Extremum> kept;
  for (const auto& ex : extrema) {
    const bool merged = std::ranges::any_of(kept, [&](const Extremum& a) {
      const std::size_t d = a.index > ex.index ? a.index - ex.index : ex.index - a.index;
      return d < sep || (d <= reach && ex.magnitude < kSidelobeRatio * a.magnitude);
    });
    if (!merged) kept.push_back(ex);
  }
  std::vector<std::size_t> accepted;
  for (const auto& ex : kept) accepted.push_back(ex.index);
  std::ranges::sort(accepted);

  std::vector<SpikeCandidate> out;
  out.reserve(accepted.size());
  for (std::size_t idx : accepted) {
    // Opposite-sign partner lobe within the merge distance marks the centre.
    const double sign = e[idx] > 0.0 ? 1.0 : -1.0;
    const std::size_t lo = idx > sep ? idx - sep : 0;
    const std::size_t hi = std::min(n - 1, idx + sep);
    std::size_t partner = idx;
    double partner_mag = 0.5 * threshold;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (e[j] * sign < 0.0 && std::abs(e[j]) > partner_mag) {
        partner_mag = std::abs(e[j]);
        partner = j;
      }
    }
    const double centre = 0.5 * static_cast<double>(idx + partner) / sample_rate_hz;

    // Raw extremum near the dominant lobe.
    const std::size_t near = to_samples(0.010, sample_rate_hz);
    std::size_t best = idx;
    for (std::size_t j = idx > near ? idx - near : 0; j <= std::min(n - 1, idx + near); ++j) {
      if (std::abs(signal[j]) > std::abs(signal[best])) best = j;
    }

    SpikeCandidate c;
    c.channel = channel;
    c.peak_time_s = centre;
    c.peak_amplitude = signal[best];
    c.window = {std::max(0.0, centre - cfg.window_half_s),
                std::min(static_cast<double>(n - 1) / sample_rate_hz, centre + cfg.window_half_s)};
    out.push_back(c);
  }
  return out;
}

FitResult fit_spike_models(std::span<const double> signal, double sample_rate_hz,
                           const TimeWindow& window, std::span<const SpikeModelParams> inits,
                           const FitOptions& options) {
  require(sample_rate_hz > 0.0, "spike fit: sample rate must be positive");
  require(!inits.empty(), "spike fit: at least one template required");
  for (const auto& p : inits) check_init(p);
  const auto [first, last] = window_samples(window, sample_rate_hz, signal.size());
  if (last < first || last - first + 1 < kMinWindowSamples) {
    std::ostringstream msg;
    msg << "spike fit: window [" << window.start_s << ", " << window.end_s
        << "] s holds fewer than " << kMinWindowSamples << " samples";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  const std::span<const double> data = signal.subspan(first, last - first + 1);
  const WindowFit fit(data, first, sample_rate_hz);
  const double n = static_cast<double>(data.size());

  double peak = 0.0;
  for (double v : data) peak = std::max(peak, std::abs(v));
  const FitBounds& fb = options.bounds;
  Bounds bounds{kAmplitudeFloor, std::max(kAmplitudeFloor, fb.amplitude_factor * peak),
                fit.time(0), fit.time(data.size() - 1), fb.b_min, fb.b_max, fb.gamma_max};

  std::vector<SpikeModelParams> params(inits.begin(), inits.end());
  for (auto& p : params) bounds.clamp(p);

  FitResult result;
  result.params.assign(inits.begin(), inits.end());
  const double init_cost = fit.cost(inits);
  result.initial_residual_rms = std::sqrt(init_cost / n);
  result.residual_rms = result.initial_residual_rms;

  if (options.search_init) {
    // Coordinate-wise grid search, each template against the data minus the
    // others. Clusters search +-40 ms around their own detection.
    std::vector<double> target(data.size());
    const bool single = params.size() == 1;
    for (std::size_t pass = 0; pass < (single ? 1 : kSearchPasses); ++pass) {
      for (std::size_t j = 0; j < params.size(); ++j) {
        for (std::size_t k = 0; k < data.size(); ++k) {
          double others = 0.0;
          for (std::size_t o = 0; o < params.size(); ++o) {
            if (o != j) others += spike_model_value(params[o], fit.time(k));
          }
          target[k] = data[k] - others;
        }
        const double anchor = std::clamp(inits[j].center_s, bounds.a_min, bounds.a_max);
        const double lo = single ? bounds.a_min : std::max(bounds.a_min, anchor - kClusterSearchS);
        const double hi = single ? bounds.a_max : std::min(bounds.a_max, anchor + kClusterSearchS);
        fit.search(target, params[j], lo, hi, bounds);
      }
    }
  }

  double cost = fit.cost(params);
  if (!std::isfinite(cost)) {
    result.numeric_failure = true;
    return result;
  }
  if (cost > init_cost) {
    // Clamping or the search made things worse; restart from the caller's guess.
    params.assign(inits.begin(), inits.end());
    cost = init_cost;
  }

  std::vector<char> locked(params.size(), 0);
  LmOutcome lm = levenberg_marquardt(fit, bounds, options, locked, params, cost);
  std::size_t iterations = lm.iterations;
  if (lm.numeric_failure) {
    result.numeric_failure = true;
    return result;
  }

  // G(a) = 0 makes the cost jump whenever a centre crosses a sample, so a
  // spike centred exactly on a sample sits in a zero-width well no descent
  // step can reach. Try each centre snapped to its nearest sample and, if
  // that helps, polish again with the snapped centres held fixed.
  std::vector<SpikeModelParams> snapped = params;
  bool any_snap = false;
  for (std::size_t j = 0; j < params.size(); ++j) {
    SpikeModelParams candidate = snapped[j];
    candidate.center_s = std::round(candidate.center_s * sample_rate_hz) / sample_rate_hz;
    if (candidate.center_s < bounds.a_min || candidate.center_s > bounds.a_max) continue;
    std::vector<SpikeModelParams> probe = snapped;
    probe[j] = candidate;
    if (fit.cost(probe) < fit.cost(snapped)) {
      snapped = probe;
      locked[j] = 1;
      any_snap = true;
    }
  }
  if (any_snap) {
    double snapped_cost = fit.cost(snapped);
    const LmOutcome polish = levenberg_marquardt(fit, bounds, options, locked, snapped, snapped_cost);
    iterations += polish.iterations;
    if (!polish.numeric_failure && snapped_cost < cost) {
      params = snapped;
      cost = snapped_cost;
      lm.converged = polish.converged;
    }
  }

  result.iterations = iterations;
  result.converged = lm.converged || cost == 0.0;
  result.params = params;
  result.residual_rms = std::sqrt(cost / n);
  return result;
}

FitResult fit_spike_model(std::span<const double> signal, double sample_rate_hz,
                          const TimeWindow& window, const SpikeModelParams& init,
                          const FitOptions& options) {
  return fit_spike_models(signal, sample_rate_hz, window, std::span(&init, 1), options);
}

namespace {

// Half-amplitude width of the lobe holding the raw extremum, as a scale b.
double initial_scale(std::span<const double> signal, double fs, double centre_s, double peak) {
  const auto n = static_cast<long long>(signal.size());
  const auto c = static_cast<long long>(std::lround(centre_s * fs));
  const auto reach = static_cast<long long>(std::lround(0.05 * fs));
  long long at = std::clamp(c, 0LL, n - 1);
  for (long long i = std::max(0LL, c - reach); i <= std::min(n - 1, c + reach); ++i) {
    if (signal[static_cast<std::size_t>(i)] == peak) {
      at = i;
      break;
    }
  }
  const double half = 0.5 * std::abs(peak);
  const auto same_lobe = [&](long long i) {
    const double v = signal[static_cast<std::size_t>(i)];
    return v * peak > 0.0 && std::abs(v) >= half;
  };
  long long lo = at;
  long long hi = at;
  while (lo > 0 && same_lobe(lo - 1)) --lo;
  while (hi + 1 < n && same_lobe(hi + 1)) ++hi;
  const double fwhm = std::clamp(static_cast<double>(hi - lo + 1) / fs, 0.008, 0.128);
  return fwhm_to_scale(fwhm);
}

}  // namespace

ChannelDespike despike_channel(std::span<const double> signal, double sample_rate_hz,
                               const DespikeConfig& cfg, std::size_t channel) {
  const std::size_t n = signal.size();
  ChannelDespike out;
  out.model.assign(n, 0.0);
  const std::vector<SpikeCandidate> candidates =
      detect_spikes(signal, sample_rate_hz, cfg.detection, channel);

  const double half = cfg.detection.window_half_s;
  const double t_end = static_cast<double>(n == 0 ? 0 : n - 1) / sample_rate_hz;
  std::vector<double> target(n);

  for (std::size_t begin = 0; begin < candidates.size();) {
    std::size_t end = begin + 1;
    while (end < candidates.size() &&
           candidates[end].peak_time_s - candidates[end - 1].peak_time_s <= half) {
      ++end;
    }
    const TimeWindow window{std::max(0.0, candidates[begin].peak_time_s - half),
                            std::min(t_end, candidates[end - 1].peak_time_s + half)};
    const auto [first, last] = window_samples(window, sample_rate_hz, n);
    if (last < first || last - first + 1 < kMinWindowSamples) {
      begin = end;
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) target[i] = signal[i] - out.model[i];

    std::vector<SpikeModelParams> inits;
    for (std::size_t c = begin; c < end; ++c) {
      SpikeModelParams p;
      p.amplitude = std::max(std::abs(candidates[c].peak_amplitude), 1e-12);
      p.center_s = candidates[c].peak_time_s;
      p.scale_s2 = initial_scale(signal, sample_rate_hz, candidates[c].peak_time_s,
                                 candidates[c].peak_amplitude);
      p.asymmetry_s = 0.0;
      p.polarity = 1;
      inits.push_back(p);
    }
    FitResult fit = fit_spike_models(target, sample_rate_hz, window, inits, cfg.fit);

    // Projection: least-squares amplitudes of the fitted shapes against the data.
    const std::size_t len = last - first + 1;
    const auto m = static_cast<Eigen::Index>(fit.params.size());
    Eigen::MatrixXd shapes(static_cast<Eigen::Index>(len), m);
    Eigen::VectorXd y(static_cast<Eigen::Index>(len));
    for (std::size_t k = 0; k < len; ++k) {
      const double t = static_cast<double>(first + k) / sample_rate_hz;
      y(static_cast<Eigen::Index>(k)) = target[first + k];
      for (Eigen::Index j = 0; j < m; ++j) {
        SpikeModelParams unit = fit.params[static_cast<std::size_t>(j)];
        unit.amplitude = 1.0;
        shapes(static_cast<Eigen::Index>(k), j) = spike_model_value(unit, t);
      }
    }
    const Eigen::MatrixXd gram = shapes.transpose() * shapes;
    const Eigen::VectorXd amps = gram.ldlt().solve(shapes.transpose() * y);
    if (amps.allFinite()) {
      for (Eigen::Index j = 0; j < m; ++j) {
        fit.params[static_cast<std::size_t>(j)].amplitude = std::max(amps(j), kAmplitudeFloor);
      }
    }

    for (const auto& p : fit.params) add_spike_model(p, sample_rate_hz, out.model);
    double sq = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
      const double r = signal[k] - out.model[k];
      sq += r * r;
    }
    const double rms = std::sqrt(sq / static_cast<double>(len));
    for (std::size_t c = begin; c < end; ++c) {
      out.spikes.push_back({candidates[c], fit.params[c - begin], rms});
    }
    begin = end;
  }

  out.despiked.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.despiked[i] = signal[i] - out.model[i];
  return out;
}

DespikeResult despike_recording(const Recording& rec, const DespikeConfig& cfg) {
  validate(rec);
  DespikeResult result;
  result.model_signal = Matrix(rec.n_channels(), rec.n_samples());
  Matrix despiked(rec.n_channels(), rec.n_samples());
  result.spike_train.resize(rec.n_channels());
  parallel_for(rec.n_channels(), [&](std::size_t c) {
    ChannelDespike ch = despike_channel(rec.data.row(c), rec.sample_rate_hz, cfg, c);
    std::ranges::copy(ch.despiked, despiked.row(c).begin());
    std::ranges::copy(ch.model, result.model_signal.row(c).begin());
    result.spike_train[c] = std::move(ch.spikes);
  });
  result.despiked = with_data(rec, std::move(despiked));
  return result;
}

}  // namespace preictal
