#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace preictal {

/// Orthonormal two-channel filter bank (sum lowpass^2 = 1, sum lowpass = sqrt 2).
struct OrthogonalWavelet {
  std::string name;
  std::vector<double> lowpass;   // analysis scaling filter
  std::vector<double> highpass;  // highpass[k] = (-1)^k lowpass[L-1-k]
};

/// Symlets sym2..sym8. Throws Error(InvalidArgument) for any other name.
const OrthogonalWavelet& wavelet_by_name(std::string_view name);

std::vector<std::string> supported_wavelets();

}  // namespace preictal
