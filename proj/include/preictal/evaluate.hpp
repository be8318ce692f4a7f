#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "preictal/despike.hpp"
#include "preictal/simulate.hpp"
#include "preictal/stmap.hpp"
#include "preictal/swt.hpp"

namespace preictal {

/// (spike + oscillation) + noise, the recording a GroundTruth describes.
Matrix unfiltered_data(const GroundTruth& truth);

/// Energy of `filtered` within +-50 ms of every true spike centre divided by
/// the unfiltered recording's energy over the same samples (windows merged
/// per channel). nullopt when the truth holds no spikes or the windows carry
/// no energy.
std::optional<double> residual_spike_energy(const Recording& filtered, const GroundTruth& truth);

/// Pearson correlation between band-passed `filtered` and band-passed true
/// oscillation over the union of each channel's burst windows, averaged over
/// channels with bursts. nullopt when no channel has a burst.
std::optional<double> oscillation_recovery_score(const Recording& filtered, const GroundTruth& truth,
                                                 const Band& band);

struct EvaluationConfig {
  SwtFilterConfig swt;
  DespikeConfig despike;
  StmapConfig stmap;
  Band band{65.0, 85.0};  // oscillation band for band-passing and scoring
};

struct MethodReport {
  std::string method;
  double spike_residual_fraction = 0.0;
  double oscillation_recovery_corr = 0.0;
  std::optional<double> buildup_onset_s;
  std::optional<double> buildup_onset_error_s;
  std::string top_channel;
  bool buildup_channel_correct = false;
  double runtime_s = 0.0;  // method only, scoring excluded
};

struct ComparisonReport {
  std::uint64_t seed = 0;
  MethodReport none;
  MethodReport swt;
  MethodReport despike;
};

/// Simulate, run no filtering, SWT (masked reconstruction, no band-pass) and
/// despiking, then score each output against the ground truth: spike residual
/// on the output itself, oscillation correlation after the gamma band-pass,
/// build-up detection on the output's normalized gamma map.
ComparisonReport compare_methods(const SimulationSpec& spec, const EvaluationConfig& cfg = {});

struct MultiSeedSummary {
  std::vector<ComparisonReport> runs;
  std::size_t despike_beats_swt = 0;       // despike residual < swt residual
  std::size_t despike_residual_ok = 0;     // despike residual <= 0.2
  std::size_t swt_below_none = 0;          // swt residual < 1
  std::size_t despike_buildup_ok = 0;      // right channel first, onset within 0.5 s
  std::size_t swt_buildup_ok = 0;
  double runtime_s = 0.0;
};

/// compare_methods for seeds first_seed .. first_seed + n_seeds - 1.
MultiSeedSummary compare_methods_seeds(const SimulationSpec& spec, std::uint64_t first_seed,
                                       std::size_t n_seeds, const EvaluationConfig& cfg = {});

/// True when the method ranks the seizure channel first and its onset lies
/// within `tolerance_s` of the true onset.
bool buildup_ok(const MethodReport& m, double tolerance_s = 0.5);

}  // namespace preictal
