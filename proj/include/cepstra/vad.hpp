// cepstra/vad.hpp

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

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cepstra/errors.hpp"
#include "cepstra/framing.hpp"

namespace cepstra {

struct VadConfig {
  // Fraction of the mean frame energy that a frame must reach to be kept.
  double energy_threshold_ratio = 0.1;
  double zcr_threshold = 0.25;
  // Runs of kept frames shorter than this are discarded as spikes.
  int min_speech_run = 3;

  void validate() const {
    if (energy_threshold_ratio <= 0.0) {
      throw ConfigMismatch("energy_threshold_ratio must be > 0");
    }
    if (min_speech_run < 1) throw ConfigMismatch("min_speech_run must be >= 1");
  }
};

struct EndpointResult {
  std::vector<bool> keep_mask;
  // Present iff at least one frame is kept: (first_sample, last_sample) of
  // the kept frame extent in the source signal.
  std::optional<std::pair<std::size_t, std::size_t>> trimmed_range;
  std::vector<double> frame_energies;
  std::vector<double> frame_zcrs;
};

/// Mean of squared samples; scale-free across frame lengths.
inline double short_time_energy(std::span<const double> frame) {
  if (frame.empty()) throw FrameTooShort("short_time_energy on empty frame");
  double acc = 0.0;
  for (double x : frame) acc += x * x;
  return acc / static_cast<double>(frame.size());
}

/// Fraction of adjacent sample pairs with strictly opposite signs, zero
/// counting as non-negative.
inline double zero_crossing_rate(std::span<const double> frame) {
  if (frame.size() < 2) throw FrameTooShort("zero_crossing_rate needs at least 2 samples");
  std::size_t crossings = 0;
  for (std::size_t i = 1; i < frame.size(); ++i) {
    const bool prev_neg = frame[i - 1] < 0.0;
    const bool cur_neg = frame[i] < 0.0;
    if (prev_neg != cur_neg) ++crossings;
  }
  return static_cast<double>(crossings) / static_cast<double>(frame.size() - 1);
}

inline EndpointResult detect_endpoints(const FrameSequence& frames, const VadConfig& cfg) {
  cfg.validate();
  const std::size_t n = frames.num_frames();
  if (n == 0) throw SignalTooShort("detect_endpoints on empty frame sequence");

  EndpointResult res;
  res.frame_energies.reserve(n);
  res.frame_zcrs.reserve(n);
  double mean_energy = 0.0;
  for (const auto& frame : frames.frames) {
    res.frame_energies.push_back(short_time_energy(frame));
    res.frame_zcrs.push_back(zero_crossing_rate(frame));
    mean_energy += res.frame_energies.back();
  }
  mean_energy /= static_cast<double>(n);

  res.keep_mask.assign(n, false);
  // An all-zero recording has no speech; without this the 0 >= 0 comparison
  // would keep every frame.
  if (mean_energy > 0.0) {
    const double threshold = cfg.energy_threshold_ratio * mean_energy;
    for (std::size_t i = 0; i < n; ++i) res.keep_mask[i] = res.frame_energies[i] >= threshold;
  }

  // Drop kept runs shorter than min_speech_run.
  std::size_t run_start = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const bool kept = i < n && res.keep_mask[i];
    if (kept && (i == 0 || !res.keep_mask[i - 1])) run_start = i;
    if (!kept && i > 0 && res.keep_mask[i - 1]) {
      if (i - run_start < static_cast<std::size_t>(cfg.min_speech_run)) {
        std::fill(res.keep_mask.begin() + static_cast<std::ptrdiff_t>(run_start),
                  res.keep_mask.begin() + static_cast<std::ptrdiff_t>(i), false);
      }
    }
  }

  const auto first = std::find(res.keep_mask.begin(), res.keep_mask.end(), true);
  if (first != res.keep_mask.end()) {
    const std::size_t first_idx = static_cast<std::size_t>(first - res.keep_mask.begin());
    std::size_t last_idx = first_idx;
    for (std::size_t i = first_idx; i < n; ++i) {
      if (res.keep_mask[i]) last_idx = i;
    }
    res.trimmed_range = {frames.start_offsets[first_idx],
                         frames.start_offsets[last_idx] + frames.frame_len() - 1};
  }
  return res;
}

/// Cuts the signal down to the detected speech extent (clamped to the signal
/// end, since the final frame may be zero-padded past it).
inline AudioSignal trim_to_range(const AudioSignal& signal,
                                 std::pair<std::size_t, std::size_t> range) {
  const std::size_t first = std::min(range.first, signal.samples.size());
  const std::size_t last = std::min(range.second, signal.samples.size() - 1);
  AudioSignal out;
  out.sample_rate_hz = signal.sample_rate_hz;
  out.source_label = signal.source_label;
  out.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(first),
                     signal.samples.begin() + static_cast<std::ptrdiff_t>(last + 1));
  return out;
}

}  // namespace cepstra
