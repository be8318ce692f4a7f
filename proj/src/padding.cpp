#include "preictal/padding.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "preictal/parallel.hpp"

namespace preictal {

std::size_t reflect_index(long long i, std::size_t n) noexcept {
  if (n <= 1) return 0;
  const long long period = 2 * static_cast<long long>(n - 1);
  long long m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<long long>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

std::vector<double> reflect_pad(std::span<const double> x, std::size_t left, std::size_t right) {
  const std::size_t n = x.size();
  std::vector<double> out(n + left + right);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = x[reflect_index(static_cast<long long>(j) - static_cast<long long>(left), n)];
  }
  return out;
}

std::vector<double> periodic_pad_left(std::span<const double> x, std::size_t left) {
  const std::size_t n = x.size();
  std::vector<double> out(n + left);
  const std::size_t shift = n - left % n;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = x[(j + shift) % n];
  return out;
}

std::vector<double> periodic_pad_right(std::span<const double> x, std::size_t right) {
  const std::size_t n = x.size();
  std::vector<double> out(n + right);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = x[j % n];
  return out;
}

std::vector<double> moving_average(std::span<const double> x, std::size_t half) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  if (half == 0) {
    std::copy(x.begin(), x.end(), out.begin());
    return out;
  }
  const std::vector<double> padded = reflect_pad(x, half, half);
  const std::size_t width = 2 * half + 1;
  const double inv = 1.0 / static_cast<double>(width);
  // Running sum, re-summed every 4096 steps to bound drift.
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 4096 == 0) {
      running = 0.0;
      for (std::size_t k = 0; k < width; ++k) running += padded[i + k];
    } else {
      running += padded[i + width - 1] - padded[i - 1];
    }
    out[i] = running * inv;
  }
  return out;
}

std::size_t worker_count() {
  std::size_t requested = 0;
  if (const char* env = std::getenv("PREICTAL_THREADS"); env != nullptr) {
    requested = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
  }
  if (requested == 0) {
    requested = std::thread::hardware_concurrency();
  }
  return requested == 0 ? 1 : requested;
}

}  // namespace preictal
