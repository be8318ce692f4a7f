#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace preictal {

/// Mirror index without edge repetition (x[-1] = x[1], x[n] = x[n-2]).
/// Valid for any integer i; n == 1 always maps to 0.
std::size_t reflect_index(long long i, std::size_t n) noexcept;

/// x extended by `left` and `right` reflected samples.
std::vector<double> reflect_pad(std::span<const double> x, std::size_t left, std::size_t right);

/// x extended to the left by `left` samples taken circularly.
std::vector<double> periodic_pad_left(std::span<const double> x, std::size_t left);

/// x extended to the right by `right` samples taken circularly.
std::vector<double> periodic_pad_right(std::span<const double> x, std::size_t right);

/// Centred moving average over 2 * half + 1 samples, reflected edges.
std::vector<double> moving_average(std::span<const double> x, std::size_t half);

}  // namespace preictal
