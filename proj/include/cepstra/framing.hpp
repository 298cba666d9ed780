// cepstra/framing.hpp

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
#include <string>
#include <vector>

#include "cepstra/audio_io.hpp"
#include "cepstra/errors.hpp"

namespace cepstra {

enum class Window { rectangular, hamming };

inline const char* to_string(Window w) {
  return w == Window::hamming ? "hamming" : "rectangular";
}

inline Window window_from_string(const std::string& s) {
  if (s == "rectangular") return Window::rectangular;
  if (s == "hamming") return Window::hamming;
  throw UsageError("unknown window '" + s + "' (expected rectangular or hamming)");
}

struct FrameConfig {
  double frame_len_ms = 32.0;
  double hop_ms = 10.0;
  Window window = Window::rectangular;
  double preemph_alpha = 0.97;

  int frame_len_samples(int sample_rate_hz) const {
    return static_cast<int>(std::lround(frame_len_ms * sample_rate_hz / 1000.0));
  }
  int hop_samples(int sample_rate_hz) const {
    return static_cast<int>(std::lround(hop_ms * sample_rate_hz / 1000.0));
  }

  void validate(int sample_rate_hz) const {
    const int flen = frame_len_samples(sample_rate_hz);
    const int hop = hop_samples(sample_rate_hz);
    if (flen < 2) throw ConfigMismatch("frame length must cover at least 2 samples");
    if (hop < 1 || hop_ms > frame_len_ms) {
      throw ConfigMismatch("hop must satisfy 0 < hop_ms <= frame_len_ms");
    }
    if (preemph_alpha < 0.0 || preemph_alpha >= 1.0) {
      throw ConfigMismatch("preemph_alpha must lie in [0, 1)");
    }
  }
};

/// Overlapping frames cut from one signal. All frames share the same length;
/// the final partial frame is zero-padded.
struct FrameSequence {
  std::vector<std::vector<double>> frames;
  int sample_rate_hz = 0;
  int hop_samples = 0;
  std::vector<std::size_t> start_offsets;

  std::size_t num_frames() const { return frames.size(); }
  std::size_t frame_len() const { return frames.empty() ? 0 : frames.front().size(); }
  double frame_time_s(std::size_t i) const {
    return static_cast<double>(start_offsets[i]) / sample_rate_hz;
  }
};

// y[0] = x[0]; y[n] = x[n] - alpha * x[n-1]
inline AudioSignal pre_emphasis(const AudioSignal& signal, double alpha) {
  if (alpha < 0.0 || alpha >= 1.0) throw ConfigMismatch("pre-emphasis alpha must lie in [0, 1)");
  if (signal.samples.empty()) throw EmptyAudio("pre_emphasis on empty signal");
  AudioSignal out = signal;
  for (std::size_t n = out.samples.size(); n-- > 1;) {
    out.samples[n] = signal.samples[n] - alpha * signal.samples[n - 1];
  }
  return out;
}

// w[n] = 0.54 - 0.46 * cos(2*pi*n / (N-1))
inline std::vector<double> hamming_window(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / static_cast<double>(n - 1));
  }
  return w;
}

inline FrameSequence frame_signal(const AudioSignal& signal, const FrameConfig& cfg) {
  cfg.validate(signal.sample_rate_hz);
  const std::size_t flen = static_cast<std::size_t>(cfg.frame_len_samples(signal.sample_rate_hz));
  const std::size_t hop = static_cast<std::size_t>(cfg.hop_samples(signal.sample_rate_hz));
  const std::size_t len = signal.samples.size();
  if (len < flen) {
    throw SignalTooShort("signal of " + std::to_string(len) + " samples is shorter than one " +
                         std::to_string(flen) + "-sample frame");
  }

  const std::size_t num_frames = 1 + (len - flen + hop - 1) / hop;
  FrameSequence seq;
  seq.sample_rate_hz = signal.sample_rate_hz;
  seq.hop_samples = static_cast<int>(hop);
  seq.frames.reserve(num_frames);
  seq.start_offsets.reserve(num_frames);

  const std::vector<double> window =
      cfg.window == Window::hamming ? hamming_window(flen) : std::vector<double>(flen, 1.0);

  for (std::size_t f = 0; f < num_frames; ++f) {
    const std::size_t start = f * hop;
    std::vector<double> frame(flen, 0.0);
    const std::size_t avail = std::min(flen, len - start);
    for (std::size_t i = 0; i < avail; ++i) frame[i] = signal.samples[start + i] * window[i];
    seq.frames.push_back(std::move(frame));
    seq.start_offsets.push_back(start);
  }
  return seq;
}

}  // namespace cepstra
