// cepstra/mel_features.hpp

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
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cepstra/cepstrum.hpp"
#include "cepstra/digest.hpp"
#include "cepstra/errors.hpp"
#include "cepstra/fft.hpp"
#include "cepstra/framing.hpp"

namespace cepstra {

// M = 2595 * log10(f/700 + 1)
inline double mel_from_hz(double f) { return 2595.0 * std::log10(f / 700.0 + 1.0); }

inline double hz_from_mel(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

/// Bank of triangular filters with centers equally spaced on the Mel axis and
/// snapped to FFT bin centers. Each filter rises linearly to apex weight 1 and
/// falls back to zero at its neighbours' centers.
struct MelFilterbank {
  int num_filters = 0;
  std::size_t fft_size = 0;
  int sample_rate_hz = 0;
  double f_low_hz = 0.0;
  double f_high_hz = 0.0;
  std::vector<std::vector<double>> weights;  // num_filters x (fft_size/2 + 1)
  std::vector<double> boundary_mels;         // num_filters + 2 points
  std::vector<std::size_t> boundary_bins;
  std::vector<double> center_freqs_hz;       // snapped apex frequencies
};

inline MelFilterbank build_filterbank(int num_filters, std::size_t fft_size, int sample_rate_hz,
                                      double f_low_hz, double f_high_hz) {
  if (num_filters < 1) throw ConfigMismatch("num_filters must be >= 1");
  if (!is_power_of_two(fft_size)) {
    throw BadFftSize("fft size must be a power of two, got " + std::to_string(fft_size));
  }
  if (f_low_hz < 0.0 || f_low_hz >= f_high_hz || f_high_hz > sample_rate_hz / 2.0) {
    throw ConfigMismatch("filterbank band requires 0 <= f_low < f_high <= sample_rate/2");
  }

  MelFilterbank bank;
  bank.num_filters = num_filters;
  bank.fft_size = fft_size;
  bank.sample_rate_hz = sample_rate_hz;
  bank.f_low_hz = f_low_hz;
  bank.f_high_hz = f_high_hz;

  const std::size_t num_bins = fft_size / 2 + 1;
  const double mel_lo = mel_from_hz(f_low_hz);
  const double mel_hi = mel_from_hz(f_high_hz);
  const double bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(fft_size);

  bank.boundary_mels.resize(static_cast<std::size_t>(num_filters) + 2);
  bank.boundary_bins.resize(static_cast<std::size_t>(num_filters) + 2);
  for (std::size_t i = 0; i < bank.boundary_mels.size(); ++i) {
    const double m = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                  static_cast<double>(num_filters + 1);
    bank.boundary_mels[i] = m;
    const long bin = std::lround(hz_from_mel(m) / bin_hz);
    bank.boundary_bins[i] =
        static_cast<std::size_t>(std::clamp<long>(bin, 0, static_cast<long>(num_bins) - 1));
  }
  for (std::size_t i = 1; i + 1 < bank.boundary_bins.size(); ++i) {
    if (bank.boundary_bins[i] == bank.boundary_bins[i - 1] ||
        bank.boundary_bins[i] == bank.boundary_bins[i + 1]) {
      throw DegenerateBank("adjacent filter boundaries land on the same FFT bin; "
                           "increase fft_size or reduce num_filters");
    }
  }

  bank.weights.assign(static_cast<std::size_t>(num_filters), std::vector<double>(num_bins, 0.0));
  bank.center_freqs_hz.resize(static_cast<std::size_t>(num_filters));
  for (int f = 0; f < num_filters; ++f) {
    const std::size_t left = bank.boundary_bins[static_cast<std::size_t>(f)];
    const std::size_t apex = bank.boundary_bins[static_cast<std::size_t>(f) + 1];
    const std::size_t right = bank.boundary_bins[static_cast<std::size_t>(f) + 2];
    bank.center_freqs_hz[static_cast<std::size_t>(f)] = static_cast<double>(apex) * bin_hz;
    auto& row = bank.weights[static_cast<std::size_t>(f)];
    for (std::size_t k = left + 1; k <= apex; ++k) {
      row[k] = static_cast<double>(k - left) / static_cast<double>(apex - left);
    }
    for (std::size_t k = apex + 1; k < right; ++k) {
      row[k] = static_cast<double>(right - k) / static_cast<double>(right - apex);
    }
  }
  return bank;
}

inline std::vector<double> filterbank_energies(const MelFilterbank& bank,
                                               std::span<const double> power_spectrum) {
  if (power_spectrum.size() != bank.fft_size / 2 + 1) {
    throw ConfigMismatch("power spectrum length does not match the filterbank fft size");
  }
  std::vector<double> energies(static_cast<std::size_t>(bank.num_filters), 0.0);
  for (std::size_t f = 0; f < energies.size(); ++f) {
    const auto& row = bank.weights[f];
    double acc = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * power_spectrum[k];
    energies[f] = acc;
  }
  return energies;
}

/// Orthonormal DCT-II; with num_coeffs == input size it preserves the
/// Euclidean norm.
inline std::vector<double> dct_orthonormal(std::span<const double> input, int num_coeffs) {
  const std::size_t m = input.size();
  if (m == 0) throw ConfigMismatch("DCT input must be non-empty");
  if (num_coeffs < 1 || static_cast<std::size_t>(num_coeffs) > m) {
    throw ConfigMismatch("DCT coefficient count must lie in [1, input size]");
  }
  std::vector<double> out(static_cast<std::size_t>(num_coeffs), 0.0);
  const double norm0 = std::sqrt(1.0 / static_cast<double>(m));
  const double norm = std::sqrt(2.0 / static_cast<double>(m));
  for (std::size_t k = 0; k < out.size(); ++k) {
    double acc = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
      acc += input[n] * std::cos(std::numbers::pi * (2.0 * n + 1.0) * k /
                                 (2.0 * static_cast<double>(m)));
    }
    out[k] = acc * (k == 0 ? norm0 : norm);
  }
  return out;
}

struct FeatureMatrix {
  std::vector<std::vector<double>> vectors;  // num_frames x num_ceps
  int num_ceps = 0;
  std::vector<double> frame_times_s;
  std::string config_digest;
};

/// MFCC chain: signal-level pre-emphasis, Hamming-windowed framing, power
/// spectrum, Mel filterbank, log (floored), orthonormal DCT-II truncated to
/// num_ceps coefficients.
inline FeatureMatrix extract_mfcc(const AudioSignal& signal, const MelFilterbank& bank,
                                  const FrameConfig& frame_cfg, int num_ceps,
                                  double log_floor = kDefaultLogFloor) {
  if (num_ceps < 1 || num_ceps > bank.num_filters) {
    throw ConfigMismatch("num_ceps must lie in [1, num_filters]");
  }
  if (bank.sample_rate_hz != signal.sample_rate_hz) {
    throw ConfigMismatch("filterbank sample rate " + std::to_string(bank.sample_rate_hz) +
                         " does not match signal rate " +
                         std::to_string(signal.sample_rate_hz));
  }
  const int frame_len = frame_cfg.frame_len_samples(signal.sample_rate_hz);
  if (static_cast<std::size_t>(frame_len) > bank.fft_size) {
    throw ConfigMismatch("frame of " + std::to_string(frame_len) +
                         " samples exceeds fft size " + std::to_string(bank.fft_size));
  }

  const AudioSignal emphasized = pre_emphasis(signal, frame_cfg.preemph_alpha);
  FrameConfig windowed_cfg = frame_cfg;
  windowed_cfg.window = Window::hamming;
  const FrameSequence frames = frame_signal(emphasized, windowed_cfg);

  FeatureMatrix out;
  out.num_ceps = num_ceps;
  out.config_digest =
      hex_digest("fs=" + std::to_string(signal.sample_rate_hz) +
                 ";frame_len_ms=" + std::to_string(frame_cfg.frame_len_ms) +
                 ";hop_ms=" + std::to_string(frame_cfg.hop_ms) +
                 ";preemph_alpha=" + std::to_string(frame_cfg.preemph_alpha) +
                 ";num_filters=" + std::to_string(bank.num_filters) +
                 ";fft_size=" + std::to_string(bank.fft_size) +
                 ";f_low_hz=" + std::to_string(bank.f_low_hz) +
                 ";f_high_hz=" + std::to_string(bank.f_high_hz) +
                 ";num_ceps=" + std::to_string(num_ceps) +
                 ";log_floor=" + std::to_string(log_floor));
  out.vectors.reserve(frames.num_frames());
  out.frame_times_s.reserve(frames.num_frames());

  const std::size_t num_bins = bank.fft_size / 2 + 1;
  std::vector<double> power(num_bins);
  std::vector<double> log_energies(static_cast<std::size_t>(bank.num_filters));
  for (std::size_t i = 0; i < frames.num_frames(); ++i) {
    const auto spectrum = fft_real(frames.frames[i], bank.fft_size);
    for (std::size_t k = 0; k < num_bins; ++k) power[k] = std::norm(spectrum[k]);
    const std::vector<double> energies = filterbank_energies(bank, power);
    for (std::size_t f = 0; f < energies.size(); ++f) {
      log_energies[f] = std::log(std::max(energies[f], log_floor));
    }
    out.vectors.push_back(dct_orthonormal(log_energies, num_ceps));
    out.frame_times_s.push_back(frames.frame_time_s(i));
  }
  return out;
}

}  // namespace cepstra
