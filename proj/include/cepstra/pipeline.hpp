// cepstra/pipeline.hpp

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

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cepstra/audio_io.hpp"
#include "cepstra/digest.hpp"
#include "cepstra/errors.hpp"
#include "cepstra/framing.hpp"
#include "cepstra/mel_features.hpp"
#include "cepstra/pitch.hpp"
#include "cepstra/vad.hpp"
#include "cepstra/vq.hpp"

namespace cepstra {

struct MelConfig {
  int num_filters = 26;
  int num_ceps = 13;
  std::size_t fft_size = 512;
  double f_low_hz = 0.0;
  double f_high_hz = 0.0;  // 0 selects sample_rate/2 at time of use

  double resolve_f_high(int sample_rate_hz) const {
    return f_high_hz > 0.0 ? f_high_hz : sample_rate_hz / 2.0;
  }
};

struct VqTrainConfig {
  std::size_t target_size = 16;
  LbgParams lbg;
};

/// Full parameter set for the processing chain; loadable from a flat
/// key=value file, with every key overridable by a same-named CLI flag.
struct PipelineConfig {
  FrameConfig frame;   // analysis geometry for VAD and MFCC
  VadConfig vad;
  PitchConfig pitch;   // carries its own frame geometry
  MelConfig mel;
  VqTrainConfig vq;
  bool apply_vad_before_features = true;

  void validate(int sample_rate_hz) const {
    frame.validate(sample_rate_hz);
    vad.validate();
    pitch.validate(sample_rate_hz);
    if (static_cast<std::size_t>(frame.frame_len_samples(sample_rate_hz)) > mel.fft_size) {
      throw ConfigMismatch("fft_size must be >= the frame length in samples");
    }
    if (mel.resolve_f_high(sample_rate_hz) > sample_rate_hz / 2.0) {
      throw ConfigMismatch("f_high_hz must not exceed sample_rate/2");
    }
  }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw UsageError("config key " + key + ": '" + value + "' is not a number");
  }
  if (used != value.size()) {
    throw UsageError("config key " + key + ": '" + value + "' is not a number");
  }
  return v;
}

inline long parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(value, &used);
  } catch (const std::exception&) {
    throw UsageError("config key " + key + ": '" + value + "' is not an integer");
  }
  if (used != value.size()) {
    throw UsageError("config key " + key + ": '" + value + "' is not an integer");
  }
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw UsageError("config key " + key + ": '" + value + "' is not a boolean");
}

}  // namespace detail

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "frame_len_ms", "hop_ms", "window", "preemph_alpha",
      "energy_threshold_ratio", "zcr_threshold", "min_speech_run",
      "f_min_hz", "f_max_hz", "cepstral_peak_threshold", "zcr_unvoiced_threshold",
      "median_smooth_width", "pitch_frame_len_ms", "pitch_hop_ms",
      "num_filters", "num_ceps", "fft_size", "f_low_hz", "f_high_hz",
      "target_size", "epsilon_split", "distortion_rel_tol", "max_iters",
      "apply_vad_before_features"};
  return keys;
}

inline void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                               const std::string& value) {
  using detail::parse_bool;
  using detail::parse_double;
  using detail::parse_int;
  if (key == "frame_len_ms") cfg.frame.frame_len_ms = parse_double(key, value);
  else if (key == "hop_ms") cfg.frame.hop_ms = parse_double(key, value);
  else if (key == "window") cfg.frame.window = window_from_string(value);
  else if (key == "preemph_alpha") {
    cfg.frame.preemph_alpha = parse_double(key, value);
    cfg.pitch.frame.preemph_alpha = cfg.frame.preemph_alpha;
  } else if (key == "energy_threshold_ratio") cfg.vad.energy_threshold_ratio = parse_double(key, value);
  else if (key == "zcr_threshold") cfg.vad.zcr_threshold = parse_double(key, value);
  else if (key == "min_speech_run") cfg.vad.min_speech_run = static_cast<int>(parse_int(key, value));
  else if (key == "f_min_hz") cfg.pitch.f_min_hz = parse_double(key, value);
  else if (key == "f_max_hz") cfg.pitch.f_max_hz = parse_double(key, value);
  else if (key == "cepstral_peak_threshold") cfg.pitch.cepstral_peak_threshold = parse_double(key, value);
  else if (key == "zcr_unvoiced_threshold") cfg.pitch.zcr_unvoiced_threshold = parse_double(key, value);
  else if (key == "median_smooth_width") cfg.pitch.median_smooth_width = static_cast<int>(parse_int(key, value));
  else if (key == "pitch_frame_len_ms") cfg.pitch.frame.frame_len_ms = parse_double(key, value);
  else if (key == "pitch_hop_ms") cfg.pitch.frame.hop_ms = parse_double(key, value);
  else if (key == "num_filters") cfg.mel.num_filters = static_cast<int>(parse_int(key, value));
  else if (key == "num_ceps") cfg.mel.num_ceps = static_cast<int>(parse_int(key, value));
  else if (key == "fft_size") cfg.mel.fft_size = static_cast<std::size_t>(parse_int(key, value));
  else if (key == "f_low_hz") cfg.mel.f_low_hz = parse_double(key, value);
  else if (key == "f_high_hz") cfg.mel.f_high_hz = parse_double(key, value);
  else if (key == "target_size") cfg.vq.target_size = static_cast<std::size_t>(parse_int(key, value));
  else if (key == "epsilon_split") cfg.vq.lbg.epsilon_split = parse_double(key, value);
  else if (key == "distortion_rel_tol") cfg.vq.lbg.distortion_rel_tol = parse_double(key, value);
  else if (key == "max_iters") cfg.vq.lbg.max_iters = static_cast<int>(parse_int(key, value));
  else if (key == "apply_vad_before_features") cfg.apply_vad_before_features = parse_bool(key, value);
  else throw UsageError("unknown config key '" + key + "'");
}

/// Parses flat key=value text; '#' starts a comment, blank lines are skipped.
inline PipelineConfig parse_config_text(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::size_t last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto strip = [](std::string& s) {
      const std::size_t b = s.find_first_not_of(" \t");
      const std::size_t e = s.find_last_not_of(" \t");
      s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    strip(key);
    strip(value);
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

inline PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

inline std::string canonical_config_string(const PipelineConfig& cfg, int sample_rate_hz) {
  std::string s;
  const auto add = [&s](const std::string& key, const std::string& value) {
    s += key;
    s += '=';
    s += value;
    s += ';';
  };
  add("fs", std::to_string(sample_rate_hz));
  add("frame_len_ms", format_double(cfg.frame.frame_len_ms));
  add("hop_ms", format_double(cfg.frame.hop_ms));
  add("window", to_string(cfg.frame.window));
  add("preemph_alpha", format_double(cfg.frame.preemph_alpha));
  add("energy_threshold_ratio", format_double(cfg.vad.energy_threshold_ratio));
  add("zcr_threshold", format_double(cfg.vad.zcr_threshold));
  add("min_speech_run", std::to_string(cfg.vad.min_speech_run));
  add("f_min_hz", format_double(cfg.pitch.f_min_hz));
  add("f_max_hz", format_double(cfg.pitch.f_max_hz));
  add("cepstral_peak_threshold", format_double(cfg.pitch.cepstral_peak_threshold));
  add("zcr_unvoiced_threshold", format_double(cfg.pitch.zcr_unvoiced_threshold));
  add("median_smooth_width", std::to_string(cfg.pitch.median_smooth_width));
  add("pitch_frame_len_ms", format_double(cfg.pitch.frame.frame_len_ms));
  add("pitch_hop_ms", format_double(cfg.pitch.frame.hop_ms));
  add("num_filters", std::to_string(cfg.mel.num_filters));
  add("num_ceps", std::to_string(cfg.mel.num_ceps));
  add("fft_size", std::to_string(cfg.mel.fft_size));
  add("f_low_hz", format_double(cfg.mel.f_low_hz));
  add("f_high_hz", format_double(cfg.mel.resolve_f_high(sample_rate_hz)));
  add("target_size", std::to_string(cfg.vq.target_size));
  add("epsilon_split", format_double(cfg.vq.lbg.epsilon_split));
  add("distortion_rel_tol", format_double(cfg.vq.lbg.distortion_rel_tol));
  add("max_iters", std::to_string(cfg.vq.lbg.max_iters));
  add("apply_vad_before_features", cfg.apply_vad_before_features ? "true" : "false");
  return s;
}

/// Hex fingerprint of the full parameter set; embedded in every output file.
inline std::string config_digest(const PipelineConfig& cfg, int sample_rate_hz) {
  return hex_digest(canonical_config_string(cfg, sample_rate_hz));
}

}  // namespace cepstra
