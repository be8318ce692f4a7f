// preictal: command-line front end.
//
//   preictal simulate --seed 42 --out rec.csv
//   preictal swt      --in rec.csv --out swt.csv
//   preictal despike  --in rec.csv --out despiked.csv --spikes spikes.json
//   preictal tfmap    --in rec.csv --channel 4 --out tf.csv
//   preictal stmap    --in rec.csv --out map.csv --report report.json
//   preictal compare  --seeds 20 --out report.json
//
// Failures print one line, `error[E_CODE]: message`, and exit nonzero.

#include <CLI11.hpp>

#include <cmath>
#include <deque>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "preictal/config.hpp"
#include "preictal/error.hpp"
#include "preictal/fir.hpp"
#include "preictal/io.hpp"
#include "preictal/kernels.hpp"

namespace {

using preictal::ErrorCode;

// Flags bound to RunConfig keys. Precedence: explicit flag > --config file > default.
struct Overrides {
  struct Entry {
    std::string flag;
    std::string key;
    std::string value;
  };
  std::string config_path;
  std::deque<Entry> entries;  // stable addresses for CLI11 bindings

  preictal::RunConfig resolve(const CLI::App* app) const {
    preictal::RunConfig cfg;
    if (!config_path.empty()) cfg.load(config_path);
    for (const auto& e : entries) {
      if (app->count("--" + e.flag) > 0) cfg.set(e.key, e.value);
    }
    return cfg;
  }
};

void add_config(CLI::App* app, Overrides& ov) {
  app->add_option("--config", ov.config_path, "key=value file; explicit flags take precedence")
      ->check(CLI::ExistingFile);
}

void bind(CLI::App* app, Overrides& ov, const std::string& flag, const std::string& key,
          const std::string& help) {
  auto& e = ov.entries.emplace_back(Overrides::Entry{flag, key, {}});
  app->add_option("--" + flag, e.value, help + " (default " + preictal::RunConfig{}.get(key) + ")");
}

std::size_t channel_index(const preictal::Recording& rec, const std::string& which) {
  for (std::size_t c = 0; c < rec.labels.size(); ++c) {
    if (rec.labels[c] == which) return c;
  }
  std::size_t idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoul(which, &used);
    if (used != which.size()) idx = 0;
  } catch (const std::exception&) {
    idx = 0;
  }
  if (idx < 1 || idx > rec.n_channels()) {
    preictal::fail(ErrorCode::InvalidArgument,
                   "--channel '" + which + "' is neither a label nor an index in 1.." +
                       std::to_string(rec.n_channels()));
  }
  return idx - 1;
}

std::string one_line(std::string text) {
  for (char& ch : text) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

int report_error(std::string_view code, const std::string& message, int status) {
  std::cerr << "error[" << code << "]: " << one_line(message) << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pre-ictal gamma extraction: SWT filtering, spike template removal and build-up maps"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  bool scalar_only = false;
  app.add_flag("--scalar", scalar_only, "Use the scalar kernels even when AVX2 is available");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Synthesize a recording with ground truth");
  preictal::SimulationSpec spec;
  std::string sim_out;
  std::string snr_text = "5";
  std::string sim_gamma = "65:85";
  std::size_t seizure_channel = spec.seizure_channel + 1;
  bool no_truth = false;
  sim->add_option("--out", sim_out, "Recording CSV")->required();
  sim->add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
  sim->add_option("--channels", spec.n_channels, "Channel count")->capture_default_str();
  sim->add_option("--rate", spec.sample_rate_hz, "Sample rate, Hz")->capture_default_str();
  sim->add_option("--duration", spec.duration_s, "Duration, s")->capture_default_str();
  sim->add_option("--snr", snr_text, "SNR in dB, or 'inf' for no noise")->capture_default_str();
  sim->add_option("--spike-rate", spec.spike_rate_hz, "Spikes per second per channel")->capture_default_str();
  sim->add_option("--gamma", sim_gamma, "Gamma band low:high, Hz")->capture_default_str();
  sim->add_option("--overlap", spec.overlap_fraction, "Fraction of spikes inside bursts")->capture_default_str();
  sim->add_option("--onset", spec.ictal_onset_s, "Ictal onset, s")->capture_default_str();
  sim->add_option("--seizure-channel", seizure_channel, "Seizure channel, 1-based")->capture_default_str();
  sim->add_option("--burst-amplitude", spec.burst_amplitude, "Pre-ictal burst amplitude")->capture_default_str();
  sim->add_option("--ictal-amplitude", spec.ictal_amplitude, "Ictal oscillation amplitude")->capture_default_str();
  sim->add_flag("--no-truth", no_truth, "Skip the ground-truth files");

  // swt
  auto* swt = app.add_subcommand("swt", "SWT masking and reconstruction");
  Overrides swt_ov;
  std::string swt_in, swt_out, swt_mask, swt_band;
  swt->add_option("--in", swt_in, "Input recording CSV")->required();
  swt->add_option("--out", swt_out, "Output recording CSV")->required();
  add_config(swt, swt_ov);
  bind(swt, swt_ov, "wavelet", "wavelet", "Symlet sym2..sym8");
  bind(swt, swt_ov, "levels", "levels", "Decomposition depth");
  bind(swt, swt_ov, "threshold", "mask_threshold", "AUTO mask threshold fraction");
  swt->add_option("--mask", swt_mask, "auto[:fraction] | keep-all | zero-all");
  swt->add_option("--band", swt_band, "Output band low:high, or 'none' for the full-band reconstruction");

  // despike
  auto* des = app.add_subcommand("despike", "Detect, fit and subtract spike templates");
  Overrides des_ov;
  std::string des_in, des_out, des_spikes, des_model;
  des->add_option("--in", des_in, "Input recording CSV")->required();
  des->add_option("--out", des_out, "Despiked recording CSV")->required();
  des->add_option("--spikes", des_spikes, "Fitted spikes JSON");
  des->add_option("--model", des_model, "Subtracted spike model CSV");
  add_config(des, des_ov);
  bind(des, des_ov, "k", "detector_k", "Detection threshold, robust std units");
  bind(des, des_ov, "window-ms", "window_ms", "Fit window half-width, ms");
  bind(des, des_ov, "min-separation-ms", "min_separation_ms", "Merge distance, ms");

  // tfmap
  auto* tf = app.add_subcommand("tfmap", "Morlet time-frequency power of one channel");
  Overrides tf_ov;
  std::string tf_in, tf_out, tf_channel = "1";
  double fmin = 1.0, fmax = 120.0, fstep = 1.0;
  std::optional<double> score_at;
  tf->add_option("--in", tf_in, "Input recording CSV")->required();
  tf->add_option("--out", tf_out, "Output CSV")->required();
  tf->add_option("--channel", tf_channel, "Channel label or 1-based index")->capture_default_str();
  add_config(tf, tf_ov);
  bind(tf, tf_ov, "omega", "tf_omega", "Morlet oscillation number");
  tf->add_option("--fmin", fmin, "Lowest frequency, Hz")->capture_default_str();
  tf->add_option("--fmax", fmax, "Highest frequency, Hz")->capture_default_str();
  tf->add_option("--fstep", fstep, "Frequency step, Hz")->capture_default_str();
  tf->add_option("--score-at", score_at, "Print the spike signature score at this time, s");

  // stmap
  auto* st = app.add_subcommand("stmap", "Normalized gamma map and build-up detection");
  Overrides st_ov;
  std::string st_in, st_norm_in, st_out, st_report;
  bool st_log = false;
  st->add_option("--in", st_in, "Input recording CSV")->required();
  st->add_option("--norm-in", st_norm_in, "Recording for the low-band map (default: --in)");
  st->add_option("--out", st_out, "Map CSV")->required();
  st->add_option("--report", st_report, "Build-up report JSON");
  st->add_flag("--log", st_log, "Write log10 values to the map CSV");
  add_config(st, st_ov);
  bind(st, st_ov, "gamma", "gamma_band", "Gamma band low:high, Hz");
  bind(st, st_ov, "norm", "norm_band", "Normalization band low:high, Hz");
  bind(st, st_ov, "omega", "st_omega", "Morlet oscillation number");
  bind(st, st_ov, "smooth-ms", "smooth_ms", "Smoothing window, ms");
  bind(st, st_ov, "k-sigma", "k_sigma", "Detection threshold, baseline std units");
  bind(st, st_ov, "min-duration-ms", "min_duration_ms", "Minimum supra-threshold run, ms");

  // compare
  auto* cmp = app.add_subcommand("compare", "SWT vs despiking on simulated seeds");
  Overrides cmp_ov;
  std::size_t n_seeds = 1;
  std::uint64_t first_seed = 0;
  std::string cmp_spec = "default", cmp_out;
  cmp->add_option("--seeds", n_seeds, "Number of seeds")->capture_default_str()->check(CLI::PositiveNumber);
  cmp->add_option("--first-seed", first_seed, "First seed")->capture_default_str();
  cmp->add_option("--spec", cmp_spec, "Simulation spec ('default')")->capture_default_str();
  cmp->add_option("--out", cmp_out, "Report JSON")->required();
  add_config(cmp, cmp_ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("E_ARG", e.what(), 2);
  }

  try {
    if (scalar_only) preictal::kernels::set_active_isa(preictal::kernels::Isa::Scalar);

    if (*sim) {
      spec.snr_db = snr_text == "inf" ? preictal::SimulationSpec::no_noise : preictal::parse_double(snr_text);
      spec.gamma_band = preictal::parse_band(sim_gamma);
      preictal::require(seizure_channel >= 1, "--seizure-channel is 1-based");
      spec.seizure_channel = seizure_channel - 1;
      const auto [rec, truth] = preictal::synthesize_recording(spec);
      preictal::write_recording(rec, sim_out);
      if (!no_truth) preictal::write_ground_truth(truth, rec, sim_out);
    } else if (*swt) {
      const preictal::RunConfig cfg = swt_ov.resolve(swt);
      preictal::SwtFilterConfig swt_cfg = cfg.swt();
      if (!swt_mask.empty()) swt_cfg.mask = preictal::parse_mask(swt_mask, swt_cfg.levels);
      if (swt_band == "none") {
        swt_cfg.band.reset();
      } else if (!swt_band.empty()) {
        swt_cfg.band = preictal::parse_band(swt_band);
      }
      const preictal::Recording rec = preictal::read_recording(swt_in);
      preictal::write_recording(preictal::extract_oscillations_swt(rec, swt_cfg), swt_out);
    } else if (*des) {
      const preictal::RunConfig cfg = des_ov.resolve(des);
      const preictal::Recording rec = preictal::read_recording(des_in);
      const preictal::DespikeResult result = preictal::despike_recording(rec, cfg.despike());
      preictal::write_recording(result.despiked, des_out);
      if (!des_spikes.empty()) preictal::write_json(preictal::to_json(result.spike_train), des_spikes);
      if (!des_model.empty()) preictal::write_recording(preictal::with_data(rec, result.model_signal), des_model);
    } else if (*tf) {
      const preictal::RunConfig cfg = tf_ov.resolve(tf);
      const preictal::Recording rec = preictal::read_recording(tf_in);
      const std::size_t c = channel_index(rec, tf_channel);
      preictal::MorletSpec ms;
      ms.omega = cfg.tf_omega();
      ms.freqs_hz = preictal::frequency_grid(fmin, fmax, fstep);
      const preictal::TimeFrequencyMap map =
          preictal::wavelet_transform(rec.data.row(c), rec.sample_rate_hz, ms, rec.labels[c]);
      preictal::write_tf_csv(map, tf_out);
      if (score_at) std::cout << "spike_signature_score=" << preictal::spike_signature_score(map, *score_at) << '\n';
    } else if (*st) {
      const preictal::RunConfig cfg = st_ov.resolve(st);
      const preictal::Recording rec = preictal::read_recording(st_in);
      const preictal::StmapResult result =
          st_norm_in.empty() ? preictal::run_stmap(rec, cfg.stmap())
                             : preictal::run_stmap(rec, preictal::read_recording(st_norm_in), cfg.stmap());
      preictal::write_map_csv(st_log ? preictal::log_scale(result.map) : result.map, st_out);
      if (!st_report.empty()) preictal::write_json(preictal::to_json(result.report), st_report);
    } else if (*cmp) {
      const preictal::RunConfig cfg = cmp_ov.resolve(cmp);
      preictal::require(cmp_spec == "default", "--spec: only 'default' is available");
      const preictal::MultiSeedSummary summary =
          preictal::compare_methods_seeds(preictal::SimulationSpec{}, first_seed, n_seeds, cfg.evaluation());
      preictal::write_json(preictal::to_json(summary), cmp_out);
      std::cout << "seeds=" << summary.runs.size() << " despike<swt=" << summary.despike_beats_swt
                << " despike<=0.2=" << summary.despike_residual_ok
                << " despike_buildup_ok=" << summary.despike_buildup_ok
                << " runtime_s=" << summary.runtime_s << '\n';
    }
  } catch (const preictal::Error& e) {
    return report_error(preictal::error_code_name(e.code()), e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("E_INTERNAL", e.what(), 1);
  }
  return 0;
}
