#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "preictal/error.hpp"
#include "preictal/fir.hpp"
#include "preictal/padding.hpp"
#include "preictal/simulate.hpp"

using namespace preictal;

namespace {

std::vector<double> sine(double f, double fs, std::size_t n, double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs);
  return x;
}

// Peak amplitude over the middle half, away from edge transients.
double steady_amplitude(const std::vector<double>& y) {
  double m = 0.0;
  for (std::size_t i = y.size() / 4; i < 3 * y.size() / 4; ++i) m = std::max(m, std::abs(y[i]));
  return m;
}

double snr_db(const GroundTruth& t) {
  Matrix clean(t.spike_component.rows(), t.spike_component.cols());
  for (std::size_t i = 0; i < clean.flat().size(); ++i) {
    clean.flat()[i] = t.spike_component.flat()[i] + t.oscillation_component.flat()[i];
  }
  return 10.0 * std::log10(mean_power(clean) / mean_power(t.noise_component));
}

}  // namespace

TEST(Recording, ValidateRejectsBrokenInvariants) {
  Recording r{1000.0, {"a", "b"}, Matrix(2, 10)};
  EXPECT_NO_THROW(validate(r));
  Recording no_labels = r;
  no_labels.labels = {"a"};
  EXPECT_THROW(validate(no_labels), Error);
  Recording bad_rate = r;
  bad_rate.sample_rate_hz = 0.0;
  EXPECT_THROW(validate(bad_rate), Error);
  Recording nan = r;
  nan.data(1, 3) = std::nan("");
  EXPECT_THROW(validate(nan), Error);
  Recording empty{1000.0, {}, Matrix()};
  EXPECT_THROW(validate(empty), Error);
}

TEST(Recording, BandValidation) {
  EXPECT_NO_THROW(validate_band({65, 85}, 1000.0, "t"));
  EXPECT_THROW(validate_band({65, 85}, 128.0, "t"), Error);
  EXPECT_THROW(validate_band({85, 65}, 1000.0, "t"), Error);
  EXPECT_THROW(validate_band({0, 65}, 1000.0, "t"), Error);
}

TEST(Padding, ReflectIndexMirrorsWithoutRepeat) {
  EXPECT_EQ(reflect_index(-1, 5), 1u);
  EXPECT_EQ(reflect_index(5, 5), 3u);
  EXPECT_EQ(reflect_index(-9, 5), 1u);
  EXPECT_EQ(reflect_index(3, 1), 0u);
  for (long long i = -50; i < 50; ++i) EXPECT_EQ(reflect_index(i, 7), oracle::mirror(i, 7));
}

TEST(Padding, PeriodicPads) {
  const std::vector<double> x = {1, 2, 3};
  EXPECT_EQ(periodic_pad_left(x, 4), (std::vector<double>{3, 1, 2, 3, 1, 2, 3}));
  EXPECT_EQ(periodic_pad_right(x, 4), (std::vector<double>{1, 2, 3, 1, 2, 3, 1}));
}

TEST(Padding, MovingAverageMatchesDirectSum) {
  const auto x = oracle::random_signal(10000, 3);
  const std::size_t half = 17;
  const auto y = moving_average(x, half);
  for (std::size_t i = 0; i < x.size(); i += 97) {
    double acc = 0.0;
    for (long long k = -17; k <= 17; ++k) acc += x[oracle::mirror(static_cast<long long>(i) + k, x.size())];
    EXPECT_NEAR(y[i], acc / 35.0, 1e-13);
  }
  EXPECT_EQ(moving_average(x, 0), x);
}

TEST(Fir, PassbandGainWithinOnePercent) {
  const auto x = sine(75.0, 1000.0, 8000);
  const auto y = bandpass(x, 1000.0, {65, 85});
  EXPECT_NEAR(steady_amplitude(y), 1.0, 0.01);
}

TEST(Fir, StopbandAttenuationAtLeast40dB) {
  const auto x = sine(10.0, 1000.0, 8000);
  const auto y = bandpass(x, 1000.0, {65, 85});
  EXPECT_LE(20.0 * std::log10(steady_amplitude(y)), -40.0);
}

TEST(Fir, ZeroDelayOnSymmetricPulse) {
  std::vector<double> x(2001, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = (static_cast<double>(i) - 1000.0) / 1000.0;
    x[i] = std::exp(-t * t / (2 * 0.02 * 0.02)) * std::cos(2 * std::numbers::pi * 75.0 * t);
  }
  const auto y = bandpass(x, 1000.0, {65, 85});
  std::size_t arg = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::abs(y[i]) > std::abs(y[arg])) arg = i;
  }
  EXPECT_EQ(arg, 1000u);
}

TEST(Fir, LinearityAndZero) {
  const auto x = oracle::random_signal(3000, 11);
  const auto z = oracle::random_signal(3000, 12);
  std::vector<double> mix(3000);
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.5 * x[i] - 0.75 * z[i];
  const auto fx = bandpass(x, 1000.0, {65, 85});
  const auto fz = bandpass(z, 1000.0, {65, 85});
  const auto fm = bandpass(mix, 1000.0, {65, 85});
  double scale = oracle::max_abs(fm);
  for (std::size_t i = 0; i < mix.size(); ++i) EXPECT_NEAR(fm[i], 2.5 * fx[i] - 0.75 * fz[i], 1e-9 * scale);
  EXPECT_EQ(oracle::max_abs(bandpass(std::vector<double>(500, 0.0), 1000.0, {8, 30})), 0.0);
}

TEST(Fir, TapsAreSymmetricAndOdd) {
  const auto taps = design_bandpass({65, 85}, 1000.0);
  ASSERT_EQ(taps.size() % 2, 1u);
  for (std::size_t i = 0; i < taps.size(); ++i) EXPECT_DOUBLE_EQ(taps[i], taps[taps.size() - 1 - i]);
}

TEST(Fir, RecordingFormKeepsShapeAndLabels) {
  Recording r{1000.0, {"x", "y"}, Matrix(2, 1000)};
  r.data(0, 10) = 1.0;
  const Recording out = bandpass_filter(r, {65, 85});
  EXPECT_EQ(out.labels, r.labels);
  EXPECT_EQ(out.n_samples(), 1000u);
  EXPECT_THROW(bandpass_filter(r, {400, 600}), Error);
}

TEST(Simulate, DefaultShapeAndExactAdditivity) {
  const auto [rec, truth] = synthesize_recording(SimulationSpec{});
  EXPECT_EQ(rec.n_channels(), 6u);
  EXPECT_EQ(rec.n_samples(), 20000u);
  EXPECT_EQ(rec.labels[3], "ch4");
  for (std::size_t i = 0; i < rec.data.flat().size(); ++i) {
    const double sum = (truth.spike_component.flat()[i] + truth.oscillation_component.flat()[i]) +
                       truth.noise_component.flat()[i];
    ASSERT_EQ(rec.data.flat()[i], sum);
  }
}

TEST(Simulate, SeedDeterminism) {
  SimulationSpec s;
  s.seed = 99;
  const auto a = synthesize_recording(s);
  const auto b = synthesize_recording(s);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second.noise_component, b.second.noise_component);
  s.seed = 100;
  EXPECT_FALSE(synthesize_recording(s).first == a.first);
}

TEST(Simulate, SnrCalibration) {
  SimulationSpec s;
  s.n_channels = 1;
  s.seizure_channel = 0;
  s.duration_s = 10.0;
  s.spike_rate_hz = 1.0;
  s.seed = 7;
  EXPECT_NEAR(snr_db(synthesize_recording(s).second), 5.0, 0.1);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SimulationSpec d;
    d.seed = seed;
    EXPECT_NEAR(snr_db(synthesize_recording(d).second), 5.0, 0.1);
  }
}

TEST(Simulate, NoNoiseSentinel) {
  SimulationSpec s;
  s.snr_db = SimulationSpec::no_noise;
  const auto [rec, truth] = synthesize_recording(s);
  EXPECT_EQ(oracle::max_abs(std::vector<double>(truth.noise_component.flat().begin(),
                                                truth.noise_component.flat().end())),
            0.0);
}

TEST(Simulate, GroundTruthInvariants) {
  const auto [rec, truth] = synthesize_recording(SimulationSpec{});
  bool ictal_seen = false;
  for (std::size_t c = 0; c < truth.burst_windows.size(); ++c) {
    for (const auto& w : truth.burst_windows[c]) {
      EXPECT_GE(w.start_s, 0.0);
      EXPECT_LE(w.end_s, rec.duration_s());
      EXPECT_GE(w.center_freq_hz, 65.0);
      EXPECT_LE(w.center_freq_hz, 85.0);
      if (w.ictal) {
        ictal_seen = true;
        EXPECT_EQ(c, 3u);
        EXPECT_DOUBLE_EQ(w.start_s, 10.0);
      }
    }
  }
  EXPECT_TRUE(ictal_seen);
  std::size_t total = 0;
  for (const auto& ch : truth.spikes) {
    total += ch.size();
    for (const auto& s : ch) {
      const double fwhm = 2.0 * std::sqrt(s.params.scale_s2 * std::numbers::ln2);
      EXPECT_GE(fwhm, 0.030 - 1e-12);
      EXPECT_LE(fwhm, 0.070 + 1e-12);
      EXPECT_LE(std::abs(s.params.asymmetry_s), 0.010 + 1e-12);
      EXPECT_GE(s.params.amplitude, 3.0 / std::sqrt(2.0) - 1e-12);
      EXPECT_LE(s.params.amplitude, 8.0 / std::sqrt(2.0) + 1e-12);
    }
  }
  EXPECT_EQ(total, 6u * 20u);
}

TEST(Simulate, InvalidSpecNamesField) {
  SimulationSpec s;
  s.gamma_band = {85, 65};
  try {
    validate(s);
    FAIL() << "expected rejection";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("gamma_band"), std::string::npos);
  }
  s = {};
  s.n_channels = 0;
  EXPECT_THROW(synthesize_recording(s), Error);
  s = {};
  s.duration_s = -1;
  EXPECT_THROW(synthesize_recording(s), Error);
  s = {};
  s.gamma_band = {400, 600};
  EXPECT_THROW(synthesize_recording(s), Error);
}

TEST(WhiteNoise, PowerMatchesSnr) {
  Matrix unit(1, 200000);
  const auto x = sine(13.0, 1000.0, 200000, std::sqrt(2.0));
  std::ranges::copy(x, unit.row(0).begin());
  const Matrix noise5 = white_noise_for(unit, 5.0, 1);
  EXPECT_NEAR(mean_power(noise5) / std::pow(10.0, -0.5), 1.0, 0.02);
  const Matrix noise0 = white_noise_for(unit, 0.0, 1);
  EXPECT_NEAR(mean_power(noise0) / mean_power(unit), 1.0, 0.02);
}

TEST(WhiteNoise, DeterministicAndRejectsSilence) {
  Matrix m(2, 1000, 0.5);
  EXPECT_EQ(add_white_noise(m, 5.0, 3), add_white_noise(m, 5.0, 3));
  EXPECT_THROW(add_white_noise(Matrix(2, 100), 5.0, 3), Error);
  EXPECT_EQ(add_white_noise(Matrix(2, 100), SimulationSpec::no_noise, 3), Matrix(2, 100));
}
