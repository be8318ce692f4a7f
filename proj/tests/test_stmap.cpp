#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "preictal/error.hpp"
#include "preictal/simulate.hpp"
#include "preictal/stmap.hpp"

using namespace preictal;

namespace {

Recording blank(std::size_t channels, std::size_t samples, double fs = 1000.0) {
  Recording r;
  r.sample_rate_hz = fs;
  r.labels = default_labels(channels);
  r.data = Matrix(channels, samples);
  return r;
}

SpatioTemporalMap map_from(const Matrix& values, double fs = 1000.0) {
  SpatioTemporalMap m;
  m.labels = default_labels(values.rows());
  m.values = values;
  m.sample_rate_hz = fs;
  m.gamma_band = {65.0, 85.0};
  for (std::size_t i = 0; i < values.cols(); ++i) m.times_s.push_back(static_cast<double>(i) / fs);
  return m;
}

double row_mean(const Matrix& m, std::size_t r, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += m(r, i);
  return s / static_cast<double>(hi - lo);
}

double peak(std::span<const double> row) { return *std::ranges::max_element(row); }

}  // namespace

TEST(BandEnergy, BurstChannelDominates) {
  Recording rec = blank(6, 6000);
  for (std::size_t i = 2000; i < 3000; ++i) {
    const double t = static_cast<double>(i) / 1000.0;
    rec.data(3, i) = std::cos(2.0 * std::numbers::pi * 75.0 * t);
  }
  for (std::size_t c = 0; c < 6; ++c) {
    const auto noise = oracle::random_signal(6000, 70 + c, 0.05);
    for (std::size_t i = 0; i < 6000; ++i) rec.data(c, i) += noise[i];
  }
  const SpatioTemporalMap m = band_energy_map(rec, {65.0, 85.0}, 5.0);
  ASSERT_EQ(m.values.rows(), 6u);
  ASSERT_EQ(m.values.cols(), 6000u);
  const double p4 = peak(m.values.row(3));
  for (std::size_t c = 0; c < 6; ++c) {
    if (c != 3) {
      EXPECT_GE(p4, 5.0 * peak(m.values.row(c))) << c;
    }
  }
}

TEST(BandEnergy, ZeroRecordingGivesZeroMap) {
  const SpatioTemporalMap m = band_energy_map(blank(3, 3000), {65.0, 85.0}, 5.0);
  for (double v : m.values.flat()) EXPECT_EQ(v, 0.0);
}

TEST(BandEnergy, WhiteNoiseRowsAgree) {
  Recording rec = blank(4, 30000);
  for (std::size_t c = 0; c < 4; ++c) {
    const auto x = oracle::random_signal(30000, 900 + c);
    std::ranges::copy(x, rec.data.row(c).begin());
  }
  const SpatioTemporalMap m = band_energy_map(rec, {65.0, 85.0}, 5.0);
  std::vector<double> means;
  for (std::size_t c = 0; c < 4; ++c) means.push_back(row_mean(m.values, c, 0, 30000));
  const double avg = (means[0] + means[1] + means[2] + means[3]) / 4.0;
  for (double v : means) EXPECT_NEAR(v, avg, 0.2 * avg);
}

TEST(BandEnergy, RejectsBandAboveNyquist) {
  EXPECT_THROW(band_energy_map(blank(2, 3000, 128.0), {65.0, 85.0}, 5.0), Error);
  EXPECT_THROW(band_energy_map(blank(2, 3000), {85.0, 65.0}, 5.0), Error);
}

TEST(Normalize, EqualMapsGiveOnes) {
  Matrix v(2, 50);
  for (std::size_t i = 0; i < 50; ++i) {
    v(0, i) = 1.0 + static_cast<double>(i);
    v(1, i) = 0.5 * static_cast<double>(i + 3);
  }
  const SpatioTemporalMap a = map_from(v);
  const SpatioTemporalMap r = normalize_by_low_band(a, a, 0.0);
  for (double x : r.values.flat()) EXPECT_EQ(x, 1.0);
  ASSERT_TRUE(r.norm_band.has_value() || !a.norm_band.has_value());
}

TEST(Normalize, ShapeMismatchThrows) {
  EXPECT_THROW(normalize_by_low_band(map_from(Matrix(2, 10, 1.0)), map_from(Matrix(2, 11, 1.0))), Error);
  EXPECT_THROW(normalize_by_low_band(map_from(Matrix(3, 10, 1.0)), map_from(Matrix(2, 10, 1.0))), Error);
}

TEST(Normalize, SilentChannelStaysFinite) {
  const SpatioTemporalMap zero = map_from(Matrix(1, 10, 0.0));
  const SpatioTemporalMap r = normalize_by_low_band(zero, zero);
  for (double x : r.values.flat()) EXPECT_TRUE(std::isfinite(x));
}

TEST(Normalize, GainInvariant) {
  SimulationSpec spec;
  spec.duration_s = 8.0;
  spec.ictal_onset_s = 4.0;
  const auto [rec, truth] = synthesize_recording(spec);
  const StmapConfig cfg;
  const StmapResult base = run_stmap(rec, cfg);
  for (double c : {0.1, 10.0}) {
    Recording scaled = rec;
    for (double& v : scaled.data.row(2)) v *= c;
    const StmapResult r = run_stmap(scaled, cfg);
    for (std::size_t i = 0; i < r.map.values.cols(); ++i) {
      const double want = base.map.values(2, i);
      EXPECT_NEAR(r.map.values(2, i), want, 1e-9 * std::abs(want));
    }
  }
}

TEST(Normalize, SeizureChannelRisesAfterOnset) {
  const auto [rec, truth] = synthesize_recording(SimulationSpec{});
  StmapConfig cfg;
  cfg.smooth_ms = 0.0;
  const StmapResult r = run_stmap(rec, cfg);
  const std::size_t onset = static_cast<std::size_t>(truth.ictal_onset_s * rec.sample_rate_hz);
  const std::size_t c = truth.seizure_channel;
  EXPECT_GE(row_mean(r.map.values, c, onset, rec.n_samples()), 3.0 * row_mean(r.map.values, c, 0, onset));
}

TEST(Smooth, ZeroWindowIsIdentity) {
  Matrix v(2, 300);
  const auto x = oracle::random_signal(600, 3);
  std::ranges::copy(x, v.flat().begin());
  const SpatioTemporalMap m = map_from(v);
  EXPECT_EQ(smooth_map(m, 0.0).values, m.values);
}

TEST(Smooth, ConstantUnchanged) {
  const SpatioTemporalMap m = map_from(Matrix(2, 2000, 3.25));
  for (double v : smooth_map(m, 500.0).values.flat()) EXPECT_NEAR(v, 3.25, 1e-12);
}

TEST(Smooth, ImpulseBecomesPlateau) {
  Matrix v(1, 3000, 0.0);
  v(0, 1500) = 1.0;
  const SpatioTemporalMap s = smooth_map(map_from(v), 500.0);
  EXPECT_DOUBLE_EQ(s.smoothed_ms, 500.0);
  for (std::size_t i = 0; i < 3000; ++i) {
    const bool inside = i >= 1250 && i <= 1750;
    EXPECT_NEAR(s.values(0, i), inside ? 1.0 / 501.0 : 0.0, 1e-15) << i;
  }
}

TEST(Smooth, ConservesRowMean) {
  const std::size_t n = 20000;
  Matrix v(3, n);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto x = oracle::random_signal(n, 40 + c);
    for (std::size_t i = 0; i < n; ++i) v(c, i) = 5.0 + x[i] + std::sin(static_cast<double>(i) * 1e-3 * (c + 1));
  }
  // Window of 5% of the record.
  const SpatioTemporalMap s = smooth_map(map_from(v), 1000.0);
  for (std::size_t c = 0; c < 3; ++c) {
    const double before = row_mean(v, c, 0, n);
    EXPECT_NEAR(row_mean(s.values, c, 0, n), before, 0.01 * std::abs(before));
  }
}

TEST(Smooth, NegativeWindowThrows) {
  EXPECT_THROW(smooth_map(map_from(Matrix(1, 10, 1.0)), -1.0), Error);
}

TEST(LogScale, ZerosUseSmallestPositive) {
  Matrix v(1, 3);
  v(0, 0) = 0.0;
  v(0, 1) = 10.0;
  v(0, 2) = 1000.0;
  const SpatioTemporalMap l = log_scale(map_from(v));
  EXPECT_TRUE(l.log_scaled);
  EXPECT_DOUBLE_EQ(l.values(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(l.values(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(l.values(0, 2), 3.0);
}

TEST(Buildup, ConstantMapHasNoOnset) {
  const BuildupReport r = detect_buildup(map_from(Matrix(3, 10000, 2.0)));
  EXPECT_FALSE(r.onset_s.has_value());
  ASSERT_EQ(r.ranked_channels.size(), 3u);
  for (const auto& c : r.ranked_channels) EXPECT_FALSE(c.onset_s.has_value());
}

TEST(Buildup, StepIsFoundAndRanked) {
  Matrix v(3, 10000, 1.0);
  const auto noise = oracle::random_signal(30000, 8, 0.01);
  std::ranges::transform(v.flat(), noise, v.flat().begin(), std::plus<>{});
  for (std::size_t i = 6000; i < 10000; ++i) v(1, i) += 2.0;
  for (std::size_t i = 8000; i < 10000; ++i) v(2, i) += 1.0;
  const BuildupReport r = detect_buildup(map_from(v));
  ASSERT_TRUE(r.onset_s.has_value());
  EXPECT_NEAR(*r.onset_s, 6.0, 1e-3);
  EXPECT_EQ(r.ranked_channels[0].label, "ch2");
  EXPECT_EQ(r.ranked_channels[1].label, "ch3");
  EXPECT_NEAR(*r.ranked_channels[1].onset_s, 8.0, 1e-3);
  EXPECT_DOUBLE_EQ(r.threshold_used, 3.0);
  EXPECT_DOUBLE_EQ(r.baseline_s, 2.0);
}

TEST(Buildup, ShortRunsIgnored) {
  Matrix v(1, 10000, 1.0);
  const auto noise = oracle::random_signal(10000, 9, 0.01);
  for (std::size_t i = 0; i < 10000; ++i) v(0, i) += noise[i];
  for (std::size_t i = 5000; i < 5200; ++i) v(0, i) += 5.0;
  BuildupConfig cfg;
  cfg.min_duration_ms = 300.0;
  EXPECT_FALSE(detect_buildup(map_from(v), cfg).onset_s.has_value());
  cfg.min_duration_ms = 150.0;
  EXPECT_TRUE(detect_buildup(map_from(v), cfg).onset_s.has_value());
}

TEST(Buildup, RaisingKSigmaNeverAdvancesOnset) {
  const auto [rec, truth] = synthesize_recording(SimulationSpec{});
  const StmapResult r = run_stmap(rec);
  std::optional<double> previous;
  for (double k : {1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0}) {
    BuildupConfig cfg;
    cfg.k_sigma = k;
    const BuildupReport rep = detect_buildup(r.map, cfg);
    if (previous && rep.onset_s) {
      EXPECT_GE(*rep.onset_s, *previous) << k;
    }
    if (rep.onset_s) previous = rep.onset_s;
    else previous = std::numeric_limits<double>::infinity();
  }
}

TEST(Buildup, ShortRecordRejected) {
  EXPECT_THROW(detect_buildup(map_from(Matrix(2, 4000, 1.0))), Error);
  EXPECT_NO_THROW(detect_buildup(map_from(Matrix(2, 5000, 1.0))));
}

TEST(Buildup, SimulatedSeizureChannelFirst) {
  const auto [rec, truth] = synthesize_recording(SimulationSpec{});
  const StmapResult r = run_stmap(rec);
  ASSERT_TRUE(r.report.onset_s.has_value());
  EXPECT_NEAR(*r.report.onset_s, truth.ictal_onset_s, 0.5);
  EXPECT_EQ(r.report.ranked_channels.front().label, "ch4");
  for (std::size_t i = 1; i < r.report.ranked_channels.size(); ++i) {
    EXPECT_GE(r.report.ranked_channels[i - 1].peak_value, r.report.ranked_channels[i].peak_value);
  }
}

TEST(Buildup, Deterministic) {
  const auto [rec, truth] = synthesize_recording(SimulationSpec{});
  const StmapResult a = run_stmap(rec);
  const StmapResult b = run_stmap(rec);
  EXPECT_EQ(a.map.values, b.map.values);
  EXPECT_EQ(a.report.onset_s, b.report.onset_s);
  ASSERT_EQ(a.report.ranked_channels.size(), b.report.ranked_channels.size());
  for (std::size_t i = 0; i < a.report.ranked_channels.size(); ++i) {
    EXPECT_EQ(a.report.ranked_channels[i].label, b.report.ranked_channels[i].label);
    EXPECT_EQ(a.report.ranked_channels[i].peak_value, b.report.ranked_channels[i].peak_value);
  }
}

TEST(Stmap, ExternalNormSourceMustMatch) {
  const auto [rec, truth] = synthesize_recording(SimulationSpec{});
  Recording other = blank(rec.n_channels(), rec.n_samples() - 10);
  EXPECT_THROW(run_stmap(rec, other, StmapConfig{}), Error);
}
