// cepstra/cepstrum.hpp

// Copyright 2026  The cepstra authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cepstra/errors.hpp"
#include "cepstra/fft.hpp"

namespace cepstra {

// Magnitude floor applied before the log so silent bins stay finite.
inline constexpr double kDefaultLogFloor = 1e-10;

/// Real cepstrum of one frame: the inverse transform of the log-magnitude
/// spectrum. Coefficients are even-symmetric (c[n] == c[N-n]) for real input;
/// a periodic signal with period P samples peaks at quefrency index P.
struct CepstrumFrame {
  std::vector<double> coefficients;  // length fft_size
  std::size_t fft_size = 0;
  int sample_rate_hz = 0;
  double log_floor = kDefaultLogFloor;
};

// Smallest power of two covering twice the frame, so every pitch-period
// candidate up to the frame length gets its own quefrency sample.
inline std::size_t default_fft_size(std::size_t frame_len) {
  return next_power_of_two(2 * frame_len);
}

inline CepstrumFrame real_cepstrum(std::span<const double> frame, std::size_t fft_size,
                                   double log_floor = kDefaultLogFloor,
                                   int sample_rate_hz = 0) {
  if (!is_power_of_two(fft_size)) {
    throw BadFftSize("fft size must be a power of two, got " + std::to_string(fft_size));
  }
  if (fft_size < frame.size()) {
    throw BadFftSize("fft size " + std::to_string(fft_size) + " smaller than frame length " +
                     std::to_string(frame.size()));
  }
  if (log_floor <= 0.0) throw ConfigMismatch("log_floor must be > 0");

  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  fft_inplace(buf, false);
  for (auto& bin : buf) {
    bin = std::log(std::max(std::abs(bin), log_floor));
  }
  fft_inplace(buf, true);

  CepstrumFrame out;
  out.fft_size = fft_size;
  out.sample_rate_hz = sample_rate_hz;
  out.log_floor = log_floor;
  out.coefficients.resize(fft_size);
  // The imaginary residue is rounding noise (the log spectrum is real and
  // even); drop it.
  for (std::size_t i = 0; i < fft_size; ++i) out.coefficients[i] = buf[i].real();
  return out;
}

/// Frequency addressed by a quefrency index: sample_rate / index.
inline double quefrency_to_hz(std::size_t index, int sample_rate_hz) {
  if (index == 0) throw ZeroQuefrency("quefrency index 0 has no frequency interpretation");
  return static_cast<double>(sample_rate_hz) / static_cast<double>(index);
}

}  // namespace cepstra
