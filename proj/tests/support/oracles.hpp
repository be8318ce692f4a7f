#pragma once

// Straightforward reference computations used to check the optimized code.
// Nothing here calls into the library's kernels or padding helpers.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline std::vector<double> random_signal(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

// Filter with 2^(j-1) - 1 zeros inserted between taps.
inline std::vector<double> upsample(const std::vector<double>& h, std::size_t level) {
  const std::size_t step = std::size_t{1} << (level - 1);
  std::vector<double> out((h.size() - 1) * step + 1, 0.0);
  for (std::size_t k = 0; k < h.size(); ++k) out[k * step] = h[k];
  return out;
}

// out[n] = sum_m f[m] x[(n - m) mod N]
inline std::vector<double> circular_convolution(const std::vector<double>& x, const std::vector<double>& f) {
  const auto n = static_cast<long long>(x.size());
  std::vector<double> out(x.size(), 0.0);
  for (long long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long long m = 0; m < static_cast<long long>(f.size()); ++m) {
      long long idx = (i - m) % n;
      if (idx < 0) idx += n;
      acc += f[static_cast<std::size_t>(m)] * x[static_cast<std::size_t>(idx)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

struct Planes {
  std::vector<double> approx;
  std::vector<std::vector<double>> details;
};

inline Planes atrous(const std::vector<double>& x, const std::vector<double>& lo,
                     const std::vector<double>& hi, std::size_t levels) {
  Planes p;
  std::vector<double> a = x;
  for (std::size_t j = 1; j <= levels; ++j) {
    p.details.push_back(circular_convolution(a, upsample(hi, j)));
    a = circular_convolution(a, upsample(lo, j));
  }
  p.approx = a;
  return p;
}

// Biphasic template written out branch by branch.
inline double spike(double A, double a, double b, double g, int sign, double t) {
  if (t < a) return sign * -A * std::exp(-((t - a) + g) * ((t - a) + g) / b);
  if (t > a) return sign * A * std::exp(-((t - a) - g) * ((t - a) - g) / b);
  return 0.0;
}

// Mirror without repeating the edge sample, by walking back and forth.
inline std::size_t mirror(long long i, std::size_t n) {
  const auto last = static_cast<long long>(n) - 1;
  if (last == 0) return 0;
  while (i < 0 || i > last) i = i < 0 ? -i : 2 * last - i;
  return static_cast<std::size_t>(i);
}

// Morlet power by explicit complex convolution sums; amplitude normalization (a cosine
// of unit amplitude at f has unit power), +-3.5 sigma truncation.
inline std::vector<double> morlet_power(const std::vector<double>& x, double fs, double f, double omega) {
  const double sigma = omega / (2.0 * std::numbers::pi * f);
  const auto half = static_cast<long long>(std::ceil(3.5 * sigma * fs));
  double norm = 0.0;
  for (long long k = -half; k <= half; ++k) {
    const double t = static_cast<double>(k) / fs;
    norm += std::exp(-t * t / (2.0 * sigma * sigma));
  }
  norm /= 2.0;
  std::vector<double> power(x.size());
  for (long long n = 0; n < static_cast<long long>(x.size()); ++n) {
    std::complex<double> acc = 0.0;
    for (long long k = -half; k <= half; ++k) {
      const double t = static_cast<double>(k) / fs;
      const std::complex<double> psi =
          std::exp(-t * t / (2.0 * sigma * sigma)) * std::polar(1.0, 2.0 * std::numbers::pi * f * t);
      acc += psi * x[mirror(n - k, x.size())];
    }
    acc /= norm;
    power[static_cast<std::size_t>(n)] = std::norm(acc);
  }
  return power;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace oracle
