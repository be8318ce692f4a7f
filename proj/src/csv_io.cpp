#include "preictal/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "preictal/error.hpp"

namespace preictal {

namespace {

constexpr std::string_view kRateKey = "# sample_rate_hz=";

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) fail(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

void append(std::string& buf, double v) {
  char tmp[32];
  const auto res = std::to_chars(tmp, tmp + sizeof tmp, v);
  buf.append(tmp, res.ptr);
}

[[noreturn]] void format_error(std::string_view source, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ": line " << line << ": " << what;
  fail(ErrorCode::Format, msg.str());
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

void write_matrix_csv(const Matrix& data, const Recording& like, const std::filesystem::path& path) {
  Recording r = like;
  r.data = data;
  write_recording(r, path);
}

}  // namespace

std::string format_double(double v) {
  std::string s;
  append(s, v);
  return s;
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || begin == end) {
    fail(ErrorCode::Format, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

void write_recording(const Recording& rec, std::ostream& out) {
  validate(rec);
  std::string buf;
  buf.append(kRateKey);
  append(buf, rec.sample_rate_hz);
  buf.push_back('\n');
  for (std::size_t c = 0; c < rec.labels.size(); ++c) {
    if (c > 0) buf.push_back(',');
    buf.append(rec.labels[c]);
  }
  buf.push_back('\n');
  for (std::size_t i = 0; i < rec.n_samples(); ++i) {
    for (std::size_t c = 0; c < rec.n_channels(); ++c) {
      if (c > 0) buf.push_back(',');
      append(buf, rec.data(c, i));
    }
    buf.push_back('\n');
    if (buf.size() > (1u << 20)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_recording(const Recording& rec, const std::filesystem::path& path) {
  for (const auto& label : rec.labels) {
    require(label.find_first_of(",\n\r") == std::string::npos,
            "write_recording: channel label '" + label + "' contains a comma or newline");
  }
  std::ofstream out = open_out(path);
  write_recording(rec, out);
  finish(out, path);
}

Recording read_recording(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || !line.starts_with(kRateKey)) {
    format_error(source, 1, "expected header '# sample_rate_hz=<value>'");
  }
  Recording rec;
  try {
    rec.sample_rate_hz = parse_double(std::string_view(line).substr(kRateKey.size()));
  } catch (const Error&) {
    format_error(source, 1, "unparseable sample rate");
  }
  if (!(rec.sample_rate_hz > 0.0) || !std::isfinite(rec.sample_rate_hz)) {
    format_error(source, 1, "sample rate must be positive and finite");
  }
  ++line_no;
  if (!std::getline(in, line) || line.empty()) format_error(source, 2, "expected channel labels");
  for (auto label : split(line)) rec.labels.emplace_back(label);
  const std::size_t n_ch = rec.labels.size();

  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != n_ch) {
      std::ostringstream what;
      what << "expected " << n_ch << " values, found " << cells.size();
      format_error(source, line_no, what.str());
    }
    for (std::size_t c = 0; c < n_ch; ++c) {
      double v = 0.0;
      try {
        v = parse_double(cells[c]);
      } catch (const Error&) {
        format_error(source, line_no, "column " + std::to_string(c + 1) + ": not a number '" +
                                          std::string(cells[c]) + "'");
      }
      if (!std::isfinite(v)) {
        format_error(source, line_no, "column " + std::to_string(c + 1) + ": non-finite value");
      }
      values.push_back(v);
    }
  }
  const std::size_t n = values.size() / n_ch;
  if (n == 0) format_error(source, line_no, "no samples");
  rec.data = Matrix(n_ch, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < n_ch; ++c) rec.data(c, i) = values[i * n_ch + c];
  }
  return rec;
}

Recording read_recording(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  return read_recording(in, path.string());
}

void write_ground_truth(const GroundTruth& truth, const Recording& like,
                        const std::filesystem::path& recording_path) {
  const std::filesystem::path base = recording_path.parent_path() / recording_path.stem();
  write_matrix_csv(truth.spike_component, like, base.string() + "_spike.csv");
  write_matrix_csv(truth.oscillation_component, like, base.string() + "_oscillation.csv");
  write_matrix_csv(truth.noise_component, like, base.string() + "_noise.csv");
  write_json(to_json(truth), base.string() + "_truth.json");
}

nlohmann::json to_json(const GroundTruth& truth) {
  nlohmann::json bursts = nlohmann::json::array();
  for (std::size_t c = 0; c < truth.burst_windows.size(); ++c) {
    for (const auto& w : truth.burst_windows[c]) {
      bursts.push_back({{"channel", c}, {"start_s", w.start_s}, {"end_s", w.end_s},
                        {"center_freq_hz", w.center_freq_hz}, {"ictal", w.ictal}});
    }
  }
  nlohmann::json spikes = nlohmann::json::array();
  for (std::size_t c = 0; c < truth.spikes.size(); ++c) {
    for (const auto& s : truth.spikes[c]) {
      spikes.push_back({{"channel", c}, {"A", s.params.amplitude}, {"a", s.params.center_s},
                        {"b", s.params.scale_s2}, {"gamma", s.params.asymmetry_s},
                        {"sign", s.params.polarity}});
    }
  }
  return {{"ictal_onset_s", truth.ictal_onset_s},
          {"seizure_channel", truth.seizure_channel},
          {"burst_windows", bursts},
          {"spikes", spikes}};
}

nlohmann::json to_json(const std::vector<std::vector<FittedSpike>>& spike_train) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& channel : spike_train) {
    for (const auto& s : channel) {
      out.push_back({{"channel", s.candidate.channel},
                     {"peak_time_s", s.candidate.peak_time_s},
                     {"A", s.params.amplitude},
                     {"a", s.params.center_s},
                     {"b", s.params.scale_s2},
                     {"gamma", s.params.asymmetry_s},
                     {"sign", s.params.polarity},
                     {"residual_rms", s.residual_rms}});
    }
  }
  return out;
}

nlohmann::json to_json(const BuildupReport& report) {
  nlohmann::json ranked = nlohmann::json::array();
  for (const auto& ch : report.ranked_channels) {
    ranked.push_back({{"label", ch.label},
                      {"peak_value", ch.peak_value},
                      {"onset_s", optional_json(ch.onset_s)},
                      {"threshold", ch.threshold}});
  }
  return {{"onset_s", optional_json(report.onset_s)},
          {"ranked_channels", ranked},
          {"threshold_used", report.threshold_used},
          {"baseline_s", report.baseline_s}};
}

nlohmann::json to_json(const MethodReport& m) {
  return {{"spike_residual_fraction", m.spike_residual_fraction},
          {"oscillation_recovery_corr", m.oscillation_recovery_corr},
          {"buildup_onset_s", optional_json(m.buildup_onset_s)},
          {"buildup_onset_error_s", optional_json(m.buildup_onset_error_s)},
          {"buildup_top_channel", m.top_channel},
          {"buildup_channel_correct", m.buildup_channel_correct},
          {"runtime_s", m.runtime_s}};
}

nlohmann::json to_json(const ComparisonReport& r) {
  return {{"seed", r.seed}, {"none", to_json(r.none)}, {"swt", to_json(r.swt)}, {"despike", to_json(r.despike)}};
}

nlohmann::json to_json(const MultiSeedSummary& s) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : s.runs) runs.push_back(to_json(r));
  const auto mean = [&](auto member, auto field) {
    double total = 0.0;
    for (const auto& r : s.runs) total += (r.*member).*field;
    return s.runs.empty() ? 0.0 : total / static_cast<double>(s.runs.size());
  };
  nlohmann::json methods;
  for (auto [name, member] : {std::pair{"none", &ComparisonReport::none},
                              std::pair{"swt", &ComparisonReport::swt},
                              std::pair{"despike", &ComparisonReport::despike}}) {
    std::size_t channel_ok = 0;
    for (const auto& r : s.runs) channel_ok += (r.*member).buildup_channel_correct;
    methods[name] = {{"mean_spike_residual_fraction", mean(member, &MethodReport::spike_residual_fraction)},
                     {"mean_oscillation_recovery_corr", mean(member, &MethodReport::oscillation_recovery_corr)},
                     {"buildup_channel_correct_runs", channel_ok},
                     {"mean_runtime_s", mean(member, &MethodReport::runtime_s)}};
  }
  return {{"n_seeds", s.runs.size()},
          {"methods", methods},
          {"despike_residual_below_swt_runs", s.despike_beats_swt},
          {"despike_residual_at_most_0_2_runs", s.despike_residual_ok},
          {"swt_residual_below_1_runs", s.swt_below_none},
          {"despike_buildup_ok_runs", s.despike_buildup_ok},
          {"swt_buildup_ok_runs", s.swt_buildup_ok},
          {"runtime_s", s.runtime_s},
          {"per_seed", runs}};
}

void write_tf_csv(const TimeFrequencyMap& map, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  std::string buf = "time_s";
  for (double f : map.freqs_hz) {
    buf.push_back(',');
    append(buf, f);
  }
  buf.push_back('\n');
  for (std::size_t i = 0; i < map.times_s.size(); ++i) {
    append(buf, map.times_s[i]);
    for (std::size_t f = 0; f < map.freqs_hz.size(); ++f) {
      buf.push_back(',');
      append(buf, map.power(f, i));
    }
    buf.push_back('\n');
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  finish(out, path);
}

void write_map_csv(const SpatioTemporalMap& map, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  std::string buf = "channel";
  for (double t : map.times_s) {
    buf.push_back(',');
    append(buf, t);
  }
  buf.push_back('\n');
  for (std::size_t c = 0; c < map.values.rows(); ++c) {
    buf.append(c < map.labels.size() ? map.labels[c] : std::to_string(c + 1));
    for (double v : map.values.row(c)) {
      buf.push_back(',');
      append(buf, v);
    }
    buf.push_back('\n');
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  finish(out, path);
}

void write_json(const nlohmann::json& value, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << value.dump(2) << '\n';
  finish(out, path);
}

}  // namespace preictal
