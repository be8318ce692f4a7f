#include <cassert>

#include "preictal/kernels.hpp"

namespace preictal::kernels::scalar {

void correlate(std::span<const double> x, std::span<const double> taps,
               std::size_t dilation, std::span<double> out) {
  assert(!taps.empty());
  assert(x.size() >= out.size() + (taps.size() - 1) * dilation);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    const double* xi = x.data() + i;
    for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * xi[k * dilation];
    out[i] = acc;
  }
}

void accumulate_power(std::span<const double> x, std::span<const double> taps_re,
                      std::span<const double> taps_im, double weight,
                      std::span<double> power) {
  assert(taps_re.size() == taps_im.size() && !taps_re.empty());
  assert(x.size() >= power.size() + taps_re.size() - 1);
  const std::size_t n_taps = taps_re.size();
  for (std::size_t i = 0; i < power.size(); ++i) {
    double re = 0.0;
    double im = 0.0;
    const double* xi = x.data() + i;
    for (std::size_t k = 0; k < n_taps; ++k) {
      re += taps_re[k] * xi[k];
      im += taps_im[k] * xi[k];
    }
    power[i] += weight * (re * re + im * im);
  }
}

}  // namespace preictal::kernels::scalar
