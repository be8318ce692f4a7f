#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "preictal/error.hpp"
#include "preictal/evaluate.hpp"
#include "preictal/fir.hpp"
#include "preictal/simulate.hpp"

using namespace preictal;

namespace {

const Band kGamma{65.0, 85.0};

struct Sim {
  Recording rec;
  GroundTruth truth;
};

Sim simulate(std::uint64_t seed = 42) {
  SimulationSpec spec;
  spec.seed = seed;
  auto [rec, truth] = synthesize_recording(spec);
  return {std::move(rec), std::move(truth)};
}

bool near_spike(const GroundTruth& t, std::size_t c, double time) {
  for (const auto& s : t.spikes[c]) {
    if (std::abs(time - s.params.center_s) <= 0.050) return true;
  }
  return false;
}

bool in_burst(const GroundTruth& t, std::size_t c, double time) {
  for (const auto& w : t.burst_windows[c]) {
    if (time >= w.start_s && time <= w.end_s) return true;
  }
  return false;
}

}  // namespace

TEST(Residual, IdentityIsOne) {
  const Sim s = simulate();
  EXPECT_EQ(residual_spike_energy(s.rec, s.truth).value(), 1.0);
}

TEST(Residual, ZeroOutputIsZero) {
  const Sim s = simulate();
  const Recording zero = with_data(s.rec, Matrix(s.rec.n_channels(), s.rec.n_samples()));
  EXPECT_EQ(residual_spike_energy(zero, s.truth).value(), 0.0);
}

TEST(Residual, OscillationShareFromComponents) {
  const Sim s = simulate();
  const Recording osc = with_data(s.rec, s.truth.oscillation_component);
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < s.rec.n_channels(); ++c) {
    for (std::size_t i = 0; i < s.rec.n_samples(); ++i) {
      if (!near_spike(s.truth, c, static_cast<double>(i) / s.rec.sample_rate_hz)) continue;
      const double o = s.truth.oscillation_component(c, i);
      const double x = s.truth.spike_component(c, i) + o + s.truth.noise_component(c, i);
      num += o * o;
      den += x * x;
    }
  }
  EXPECT_NEAR(residual_spike_energy(osc, s.truth).value(), num / den, 1e-12);
}

TEST(Residual, NoSpikesGivesNothing) {
  SimulationSpec spec;
  spec.spike_rate_hz = 0.0;
  const auto [rec, truth] = synthesize_recording(spec);
  EXPECT_FALSE(residual_spike_energy(rec, truth).has_value());
}

TEST(Residual, ShapeMismatchThrows) {
  const Sim s = simulate();
  Recording shorter = s.rec;
  shorter.data = Matrix(s.rec.n_channels(), s.rec.n_samples() - 1);
  EXPECT_THROW(residual_spike_energy(shorter, s.truth), Error);
}

TEST(Correlation, SelfIsOneAndSignFlipIsMinusOne) {
  const Sim s = simulate();
  const Recording osc = with_data(s.rec, s.truth.oscillation_component);
  EXPECT_NEAR(oscillation_recovery_score(osc, s.truth, kGamma).value(), 1.0, 1e-9);
  Matrix neg = s.truth.oscillation_component;
  for (double& v : neg.flat()) v = -v;
  EXPECT_NEAR(oscillation_recovery_score(with_data(s.rec, neg), s.truth, kGamma).value(), -1.0, 1e-9);
}

TEST(Correlation, NoisyCopyMatchesDirectFormula) {
  const Sim s = simulate();
  const Matrix noisy = add_white_noise(s.truth.oscillation_component, 5.0, 1234);
  const Recording filtered = with_data(s.rec, noisy);
  const Recording a = bandpass_filter(filtered, kGamma);
  const Recording b = bandpass_filter(with_data(s.rec, s.truth.oscillation_component), kGamma);
  double total = 0.0;
  std::size_t channels = 0;
  for (std::size_t c = 0; c < s.rec.n_channels(); ++c) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < s.rec.n_samples(); ++i) {
      if (!in_burst(s.truth, c, static_cast<double>(i) / s.rec.sample_rate_hz)) continue;
      x.push_back(a.data(c, i));
      y.push_back(b.data(c, i));
    }
    if (x.empty()) continue;
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      syy += y[i] * y[i];
      sxy += x[i] * y[i];
    }
    total += (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    ++channels;
  }
  const double want = total / static_cast<double>(channels);
  const double got = oscillation_recovery_score(filtered, s.truth, kGamma).value();
  EXPECT_NEAR(got, want, 1e-9);
  EXPECT_LT(got, 1.0);
  EXPECT_GT(got, 0.5);
}

TEST(Compare, DefaultSeedOrdersMethods) {
  SimulationSpec spec;
  const ComparisonReport r = compare_methods(spec);
  EXPECT_EQ(r.seed, 42u);
  EXPECT_EQ(r.none.spike_residual_fraction, 1.0);
  EXPECT_LT(r.despike.spike_residual_fraction, r.swt.spike_residual_fraction);
  EXPECT_LT(r.swt.spike_residual_fraction, 1.0);
  EXPECT_GE(r.despike.oscillation_recovery_corr, 0.85);
  EXPECT_GE(r.swt.oscillation_recovery_corr, 0.7);
  EXPECT_TRUE(buildup_ok(r.despike));
  EXPECT_EQ(r.none.method, "none");
  EXPECT_EQ(r.swt.method, "swt");
  EXPECT_EQ(r.despike.method, "despike");
}

TEST(Compare, DeterministicPerSeed) {
  SimulationSpec spec;
  spec.seed = 7;
  const ComparisonReport a = compare_methods(spec);
  const ComparisonReport b = compare_methods(spec);
  for (auto m : {&MethodReport::spike_residual_fraction, &MethodReport::oscillation_recovery_corr}) {
    EXPECT_EQ(a.none.*m, b.none.*m);
    EXPECT_EQ(a.swt.*m, b.swt.*m);
    EXPECT_EQ(a.despike.*m, b.despike.*m);
  }
  EXPECT_EQ(a.despike.buildup_onset_s, b.despike.buildup_onset_s);
  EXPECT_EQ(a.swt.top_channel, b.swt.top_channel);
}

TEST(Compare, SummaryCountsRuns) {
  const MultiSeedSummary s = compare_methods_seeds(SimulationSpec{}, 3, 2);
  ASSERT_EQ(s.runs.size(), 2u);
  EXPECT_EQ(s.runs[0].seed, 3u);
  EXPECT_EQ(s.runs[1].seed, 4u);
  std::size_t beats = 0;
  for (const auto& r : s.runs) beats += r.despike.spike_residual_fraction < r.swt.spike_residual_fraction;
  EXPECT_EQ(s.despike_beats_swt, beats);
}

TEST(Compare, BuildupOkNeedsChannelAndOnset) {
  MethodReport m;
  EXPECT_FALSE(buildup_ok(m));
  m.buildup_channel_correct = true;
  m.buildup_onset_error_s = 0.4;
  EXPECT_TRUE(buildup_ok(m));
  m.buildup_onset_error_s = -0.6;
  EXPECT_FALSE(buildup_ok(m));
}
