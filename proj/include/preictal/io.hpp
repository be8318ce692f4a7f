#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "preictal/despike.hpp"
#include "preictal/evaluate.hpp"
#include "preictal/recording.hpp"
#include "preictal/simulate.hpp"
#include "preictal/stmap.hpp"
#include "preictal/tfmap.hpp"

namespace preictal {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Whole-string decimal parse; throws Error(Format) on trailing junk.
double parse_double(std::string_view text);

// Recording CSV:
//   # sample_rate_hz=<decimal>
//   label1,label2,...
//   one row per sample instant, one value per channel
void write_recording(const Recording& rec, const std::filesystem::path& path);
void write_recording(const Recording& rec, std::ostream& out);

/// Throws Error(Io) for unreadable files and Error(Format) naming the line
/// for a missing header, ragged rows or non-finite values.
Recording read_recording(const std::filesystem::path& path);
Recording read_recording(std::istream& in, std::string_view source = "<stream>");

/// <stem>_spike.csv, <stem>_oscillation.csv, <stem>_noise.csv and
/// <stem>_truth.json next to `recording_path` (stem without extension).
void write_ground_truth(const GroundTruth& truth, const Recording& like,
                        const std::filesystem::path& recording_path);

nlohmann::json to_json(const GroundTruth& truth);
nlohmann::json to_json(const std::vector<std::vector<FittedSpike>>& spike_train);
nlohmann::json to_json(const BuildupReport& report);
nlohmann::json to_json(const MethodReport& report);
nlohmann::json to_json(const ComparisonReport& report);
nlohmann::json to_json(const MultiSeedSummary& summary);

/// First row: frequencies; first column: times; body: power.
void write_tf_csv(const TimeFrequencyMap& map, const std::filesystem::path& path);

/// First row: times; first column: channel labels.
void write_map_csv(const SpatioTemporalMap& map, const std::filesystem::path& path);

void write_json(const nlohmann::json& value, const std::filesystem::path& path);

}  // namespace preictal
