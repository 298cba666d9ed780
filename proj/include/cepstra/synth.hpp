// cepstra/synth.hpp

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
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "cepstra/audio_io.hpp"
#include "cepstra/errors.hpp"

namespace cepstra {

// Deterministic signal generators used by the CLI `synth` subcommand and the
// test suites.

namespace detail {

inline std::size_t synth_length(double seconds, int sample_rate_hz) {
  if (seconds <= 0.0 || sample_rate_hz < kMinSampleRateHz) {
    throw ConfigMismatch("synthesis needs seconds > 0 and sample rate >= " +
                         std::to_string(kMinSampleRateHz));
  }
  return static_cast<std::size_t>(std::lround(seconds * sample_rate_hz));
}

}  // namespace detail

/// Impulse every round(fs/f0) samples.
inline AudioSignal synth_pulse_train(double f0_hz, double seconds, double amplitude,
                                     int sample_rate_hz) {
  if (f0_hz <= 0.0) throw ConfigMismatch("pulse train f0 must be > 0");
  AudioSignal out;
  out.sample_rate_hz = sample_rate_hz;
  out.source_label = "pulse_" + std::to_string(f0_hz);
  out.samples.assign(detail::synth_length(seconds, sample_rate_hz), 0.0);
  const std::size_t period = static_cast<std::size_t>(std::lround(sample_rate_hz / f0_hz));
  if (period == 0) throw ConfigMismatch("pulse train f0 above the sample rate");
  for (std::size_t n = 0; n < out.samples.size(); n += period) out.samples[n] = amplitude;
  return out;
}

inline AudioSignal synth_tone(double freq_hz, double seconds, double amplitude,
                              int sample_rate_hz) {
  AudioSignal out;
  out.sample_rate_hz = sample_rate_hz;
  out.source_label = "tone_" + std::to_string(freq_hz);
  out.samples.resize(detail::synth_length(seconds, sample_rate_hz));
  for (std::size_t n = 0; n < out.samples.size(); ++n) {
    out.samples[n] =
        amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * n / sample_rate_hz);
  }
  return out;
}

/// Seeded uniform white noise in [-amplitude, amplitude). The raw mt19937
/// word stream is mapped directly so output is identical across platforms.
inline AudioSignal synth_noise(double seconds, double amplitude, int sample_rate_hz,
                               std::uint32_t seed) {
  AudioSignal out;
  out.sample_rate_hz = sample_rate_hz;
  out.source_label = "noise_" + std::to_string(seed);
  out.samples.resize(detail::synth_length(seconds, sample_rate_hz));
  std::mt19937 engine(seed);
  for (double& s : out.samples) {
    s = amplitude * (static_cast<double>(engine()) / 2147483648.0 - 1.0);
  }
  return out;
}

inline AudioSignal synth_silence(double seconds, int sample_rate_hz) {
  AudioSignal out;
  out.sample_rate_hz = sample_rate_hz;
  out.source_label = "silence";
  out.samples.assign(detail::synth_length(seconds, sample_rate_hz), 0.0);
  return out;
}

inline AudioSignal concat(AudioSignal head, const AudioSignal& tail) {
  if (head.sample_rate_hz != tail.sample_rate_hz) {
    throw ConfigMismatch("cannot concatenate signals with different sample rates");
  }
  head.samples.insert(head.samples.end(), tail.samples.begin(), tail.samples.end());
  return head;
}

}  // namespace cepstra
