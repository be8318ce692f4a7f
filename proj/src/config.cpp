#include "preictal/config.hpp"

#include <cmath>
#include <fstream>

#include "preictal/error.hpp"
#include "preictal/io.hpp"
#include "preictal/wavelets.hpp"

namespace preictal {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double number(std::string_view key, std::string_view value) {
  try {
    const double v = parse_double(value);
    if (std::isfinite(v)) return v;
  } catch (const Error&) {
  }
  fail(ErrorCode::InvalidArgument, "config " + std::string(key) + ": not a finite number '" +
                                       std::string(value) + "'");
}

double positive(std::string_view key, std::string_view value) {
  const double v = number(key, value);
  require(v > 0.0, "config " + std::string(key) + ": must be > 0");
  return v;
}

double non_negative(std::string_view key, std::string_view value) {
  const double v = number(key, value);
  require(v >= 0.0, "config " + std::string(key) + ": must be >= 0");
  return v;
}

std::size_t count(std::string_view key, std::string_view value) {
  const double v = number(key, value);
  require(v >= 1.0 && v == std::floor(v) && v < 1e9,
          "config " + std::string(key) + ": must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::string band_text(const Band& b) { return format_double(b.low_hz) + ":" + format_double(b.high_hz); }

}  // namespace

Band parse_band(std::string_view text) {
  const auto colon = text.find(':');
  const auto bad = [&] {
    fail(ErrorCode::InvalidArgument, "band: expected 'low:high' with 0 < low < high, got '" +
                                         std::string(text) + "'");
  };
  if (colon == std::string_view::npos) bad();
  Band b;
  try {
    b.low_hz = parse_double(trim(text.substr(0, colon)));
    b.high_hz = parse_double(trim(text.substr(colon + 1)));
  } catch (const Error&) {
    bad();
  }
  if (!(b.low_hz > 0.0 && b.high_hz > b.low_hz && std::isfinite(b.high_hz))) bad();
  return b;
}

void RunConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "wavelet") {
    wavelet_ = wavelet_by_name(value).name;
  } else if (key == "levels") {
    levels_ = count(key, value);
  } else if (key == "mask_threshold") {
    const double v = number(key, value);
    require(v >= 0.0 && v <= 1.0, "config mask_threshold: must lie in [0, 1]");
    mask_threshold_ = v;
  } else if (key == "detector_k") {
    detection_.k = positive(key, value);
  } else if (key == "min_separation_ms") {
    detection_.min_separation_s = non_negative(key, value) / 1000.0;
  } else if (key == "window_ms") {
    detection_.window_half_s = positive(key, value) / 1000.0;
  } else if (key == "fit_b_min") {
    fit_.bounds.b_min = positive(key, value);
  } else if (key == "fit_b_max") {
    fit_.bounds.b_max = positive(key, value);
  } else if (key == "fit_gamma_max") {
    fit_.bounds.gamma_max = non_negative(key, value);
  } else if (key == "fit_amplitude_factor") {
    fit_.bounds.amplitude_factor = positive(key, value);
  } else if (key == "fit_max_iterations") {
    fit_.max_iterations = count(key, value);
  } else if (key == "tf_omega") {
    tf_omega_ = number(key, value);
    require(tf_omega_ >= 1.0, "config tf_omega: must be >= 1");
  } else if (key == "st_omega") {
    stmap_.omega = number(key, value);
    require(stmap_.omega >= 1.0, "config st_omega: must be >= 1");
  } else if (key == "gamma_band") {
    stmap_.gamma_band = parse_band(value);
  } else if (key == "norm_band") {
    stmap_.norm_band = parse_band(value);
  } else if (key == "freq_step_hz") {
    stmap_.freq_step_hz = positive(key, value);
  } else if (key == "smooth_ms") {
    stmap_.smooth_ms = non_negative(key, value);
  } else if (key == "k_sigma") {
    stmap_.buildup.k_sigma = non_negative(key, value);
  } else if (key == "min_duration_ms") {
    stmap_.buildup.min_duration_ms = non_negative(key, value);
  } else if (key == "baseline_fraction") {
    const double v = number(key, value);
    require(v > 0.0 && v <= 1.0, "config baseline_fraction: must lie in (0, 1]");
    stmap_.buildup.baseline_fraction = v;
  } else {
    fail(ErrorCode::InvalidArgument, "config: unknown key '" + std::string(key) + "'");
  }
  require(fit_.bounds.b_min < fit_.bounds.b_max, "config: fit_b_min must be < fit_b_max");
}

std::string RunConfig::get(std::string_view key) const {
  if (key == "wavelet") return wavelet_;
  if (key == "levels") return std::to_string(levels_);
  if (key == "mask_threshold") return format_double(mask_threshold_);
  if (key == "detector_k") return format_double(detection_.k);
  if (key == "min_separation_ms") return format_double(detection_.min_separation_s * 1000.0);
  if (key == "window_ms") return format_double(detection_.window_half_s * 1000.0);
  if (key == "fit_b_min") return format_double(fit_.bounds.b_min);
  if (key == "fit_b_max") return format_double(fit_.bounds.b_max);
  if (key == "fit_gamma_max") return format_double(fit_.bounds.gamma_max);
  if (key == "fit_amplitude_factor") return format_double(fit_.bounds.amplitude_factor);
  if (key == "fit_max_iterations") return std::to_string(fit_.max_iterations);
  if (key == "tf_omega") return format_double(tf_omega_);
  if (key == "st_omega") return format_double(stmap_.omega);
  if (key == "gamma_band") return band_text(stmap_.gamma_band);
  if (key == "norm_band") return band_text(stmap_.norm_band);
  if (key == "freq_step_hz") return format_double(stmap_.freq_step_hz);
  if (key == "smooth_ms") return format_double(stmap_.smooth_ms);
  if (key == "k_sigma") return format_double(stmap_.buildup.k_sigma);
  if (key == "min_duration_ms") return format_double(stmap_.buildup.min_duration_ms);
  if (key == "baseline_fraction") return format_double(stmap_.buildup.baseline_fraction);
  fail(ErrorCode::InvalidArgument, "config: unknown key '" + std::string(key) + "'");
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> all = {
      "wavelet",   "levels",        "mask_threshold", "detector_k",     "min_separation_ms",
      "window_ms", "fit_b_min",     "fit_b_max",      "fit_gamma_max",  "fit_amplitude_factor",
      "fit_max_iterations", "tf_omega", "st_omega",   "gamma_band",     "norm_band",
      "freq_step_hz", "smooth_ms",  "k_sigma",        "min_duration_ms", "baseline_fraction"};
  return all;
}

void RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    try {
      if (eq == std::string_view::npos) fail(ErrorCode::InvalidArgument, "expected key=value");
      set(trim(text.substr(0, eq)), text.substr(eq + 1));
    } catch (const Error& e) {
      fail(e.code(), path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  for (const auto& key : keys()) out << key << '=' << get(key) << '\n';
  if (!out) fail(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

SwtFilterConfig RunConfig::swt() const {
  SwtFilterConfig cfg;
  cfg.wavelet = wavelet_;
  cfg.levels = levels_;
  cfg.threshold_fraction = mask_threshold_;
  cfg.band = stmap_.gamma_band;
  return cfg;
}

DespikeConfig RunConfig::despike() const { return {detection_, fit_}; }

StmapConfig RunConfig::stmap() const { return stmap_; }

EvaluationConfig RunConfig::evaluation() const {
  EvaluationConfig cfg;
  cfg.swt = swt();
  cfg.despike = despike();
  cfg.stmap = stmap_;
  cfg.band = stmap_.gamma_band;
  return cfg;
}

}  // namespace preictal
