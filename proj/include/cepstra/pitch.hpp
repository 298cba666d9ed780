// cepstra/pitch.hpp

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
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cepstra/cepstrum.hpp"
#include "cepstra/errors.hpp"
#include "cepstra/framing.hpp"
#include "cepstra/vad.hpp"

namespace cepstra {

enum class VoicingLabel { voiced, unvoiced, silence };

inline const char* to_string(VoicingLabel label) {
  switch (label) {
    case VoicingLabel::voiced: return "voiced";
    case VoicingLabel::unvoiced: return "unvoiced";
    default: return "silence";
  }
}

struct PitchConfig {
  double f_min_hz = 60.0;
  double f_max_hz = 500.0;
  // A frame is voiced when its cepstral band peak exceeds this (natural-log
  // cepstrum units); otherwise the ZCR test decides unvoiced vs silence.
  double cepstral_peak_threshold = 0.2;
  double zcr_unvoiced_threshold = 0.25;
  // 40 ms frames hold two full periods of the lowest searchable pitch.
  FrameConfig frame{.frame_len_ms = 40.0,
                    .hop_ms = 10.0,
                    .window = Window::hamming,
                    .preemph_alpha = 0.97};
  int median_smooth_width = 5;

  void validate(int sample_rate_hz) const {
    if (f_min_hz <= 0.0 || f_min_hz >= f_max_hz) {
      throw ConfigMismatch("pitch band requires 0 < f_min_hz < f_max_hz");
    }
    if (f_max_hz >= sample_rate_hz / 2.0) {
      throw ConfigMismatch("f_max_hz must stay below the Nyquist frequency");
    }
    if (median_smooth_width < 1 || median_smooth_width % 2 == 0) {
      throw ConfigMismatch("median_smooth_width must be an odd positive integer");
    }
    if (cepstral_peak_threshold <= 0.0) {
      throw ConfigMismatch("cepstral_peak_threshold must be > 0");
    }
  }
};

struct FramePitch {
  VoicingLabel label = VoicingLabel::silence;
  std::optional<double> f0_hz;  // present iff voiced
  double peak_value = 0.0;      // cepstral band maximum
  double zcr = 0.0;
};

struct PitchEntry {
  double time_s = 0.0;
  VoicingLabel label = VoicingLabel::silence;
  std::optional<double> f0_hz;
  double peak_value = 0.0;
  double zcr = 0.0;
};

struct PitchTrack {
  std::vector<PitchEntry> entries;
};

/// Classifies one Hamming-windowed frame. The cepstral peak is searched over
/// quefrency indices [ceil(fs/f_max), floor(fs/f_min)], so a reported f0 is
/// inside the band by construction.
inline FramePitch detect_pitch_frame(std::span<const double> frame, int sample_rate_hz,
                                     const PitchConfig& cfg) {
  cfg.validate(sample_rate_hz);
  const double min_len = 2.0 * sample_rate_hz / cfg.f_min_hz;
  if (static_cast<double>(frame.size()) < min_len) {
    throw FrameTooShortForBand("frame of " + std::to_string(frame.size()) +
                               " samples holds fewer than two periods at " +
                               std::to_string(cfg.f_min_hz) + " Hz");
  }

  const std::size_t fft_size = default_fft_size(frame.size());
  const CepstrumFrame cep = real_cepstrum(frame, fft_size, kDefaultLogFloor, sample_rate_hz);

  const std::size_t lo =
      static_cast<std::size_t>(std::ceil(sample_rate_hz / cfg.f_max_hz));
  const std::size_t hi = std::min(
      static_cast<std::size_t>(std::floor(sample_rate_hz / cfg.f_min_hz)), fft_size / 2);
  if (lo > hi) {
    throw ConfigMismatch("pitch band [" + std::to_string(cfg.f_min_hz) + ", " +
                         std::to_string(cfg.f_max_hz) +
                         "] Hz contains no quefrency index at this sample rate");
  }

  std::size_t best = lo;
  double peak = cep.coefficients[lo];
  for (std::size_t q = lo + 1; q <= hi; ++q) {
    if (cep.coefficients[q] > peak) {
      peak = cep.coefficients[q];
      best = q;
    }
  }

  FramePitch out;
  out.peak_value = peak;
  out.zcr = zero_crossing_rate(frame);
  if (peak > cfg.cepstral_peak_threshold) {
    out.label = VoicingLabel::voiced;
    out.f0_hz = quefrency_to_hz(best, sample_rate_hz);
  } else if (out.zcr > cfg.zcr_unvoiced_threshold) {
    out.label = VoicingLabel::unvoiced;
  } else {
    out.label = VoicingLabel::silence;
  }
  return out;
}

/// Median filter with replicated endpoints, iterated to its fixpoint so that
/// smoothing twice equals smoothing once. Width 1 is the identity.
inline std::vector<double> median_smooth(std::vector<double> values, int width) {
  if (width < 1 || width % 2 == 0) {
    throw ConfigMismatch("median filter width must be an odd positive integer");
  }
  if (width == 1 || values.size() < 2) return values;
  const std::size_t half = static_cast<std::size_t>(width / 2);
  const std::size_t n = values.size();
  std::vector<double> window(static_cast<std::size_t>(width));
  // A length-n signal reaches a median-filter root in at most ~n/2 passes.
  for (std::size_t pass = 0; pass <= n / 2 + 1; ++pass) {
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < static_cast<std::size_t>(width); ++k) {
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i + k) -
                                 static_cast<std::ptrdiff_t>(half);
        const std::size_t idx =
            static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0,
                                                                static_cast<std::ptrdiff_t>(n) - 1));
        window[k] = values[idx];
      }
      std::nth_element(window.begin(), window.begin() + half, window.end());
      next[i] = window[half];
    }
    if (next == values) break;
    values = std::move(next);
  }
  return values;
}

/// Frame-by-frame cepstral pitch track over the full-band signal (no
/// pre-filtering), with median smoothing of f0 inside maximal voiced runs.
/// Labels are not changed by the smoothing.
inline PitchTrack track_pitch(const AudioSignal& signal, const PitchConfig& cfg) {
  cfg.validate(signal.sample_rate_hz);
  FrameConfig frame_cfg = cfg.frame;
  frame_cfg.window = Window::hamming;
  const FrameSequence frames = frame_signal(signal, frame_cfg);

  PitchTrack track;
  track.entries.reserve(frames.num_frames());
  for (std::size_t i = 0; i < frames.num_frames(); ++i) {
    const FramePitch fp = detect_pitch_frame(frames.frames[i], signal.sample_rate_hz, cfg);
    track.entries.push_back(
        {frames.frame_time_s(i), fp.label, fp.f0_hz, fp.peak_value, fp.zcr});
  }

  if (cfg.median_smooth_width > 1) {
    std::size_t i = 0;
    const std::size_t n = track.entries.size();
    while (i < n) {
      if (track.entries[i].label != VoicingLabel::voiced) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < n && track.entries[j].label == VoicingLabel::voiced) ++j;
      std::vector<double> run;
      run.reserve(j - i);
      for (std::size_t k = i; k < j; ++k) run.push_back(*track.entries[k].f0_hz);
      run = median_smooth(std::move(run), cfg.median_smooth_width);
      for (std::size_t k = i; k < j; ++k) track.entries[k].f0_hz = run[k - i];
      i = j;
    }
  }
  return track;
}

}  // namespace cepstra
