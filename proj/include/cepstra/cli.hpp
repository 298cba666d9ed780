// cepstra/cli.hpp

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
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cepstra/audio_io.hpp"
#include "cepstra/errors.hpp"
#include "cepstra/framing.hpp"
#include "cepstra/mel_features.hpp"
#include "cepstra/pipeline.hpp"
#include "cepstra/pitch.hpp"
#include "cepstra/synth.hpp"
#include "cepstra/vad.hpp"
#include "cepstra/vq.hpp"

namespace cepstra {

namespace cli_detail {

struct CommonOpts {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::string out_path;  // empty writes to stdout
  std::string format = "csv";
};

inline void add_common_options(CLI::App* sub, CommonOpts& opts, bool with_table_output) {
  sub->add_option("--config", opts.config_path, "flat key=value config file");
  if (with_table_output) {
    sub->add_option("--out", opts.out_path, "output file (default: stdout)");
    sub->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
  }
  for (const auto& key : config_keys()) {
    sub->add_option_function<std::string>(
        "--" + key,
        [&opts, key](const std::string& value) { opts.overrides[key] = value; },
        "override config key " + key);
  }
}

// Config file first, then flags on top: flags win.
inline PipelineConfig resolve_config(const CommonOpts& opts) {
  PipelineConfig cfg;
  if (!opts.config_path.empty()) cfg = load_config_file(opts.config_path);
  for (const auto& [key, value] : opts.overrides) apply_config_entry(cfg, key, value);
  return cfg;
}

inline void emit_table(const Table& table, const CommonOpts& opts, const std::string& digest) {
  const TableFormat format = table_format_from_string(opts.format);
  const TableMeta meta = {{"config_digest", digest}};
  if (opts.out_path.empty()) {
    write_table(table, std::cout, format, meta);
  } else {
    save_table(table, opts.out_path, format, meta);
  }
}

inline std::vector<std::filesystem::path> sorted_files_with_extension(
    const std::string& dir, const std::string& extension) {
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw IoFailure("cannot read directory " + dir + ": " + ec.message());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == extension) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

struct ExtractedFeatures {
  FeatureMatrix features;
  double time_offset_s = 0.0;  // of the trimmed region within the source
  bool all_silence = false;
};

// Endpoint trim (when enabled) precedes feature extraction.
inline ExtractedFeatures compute_features(const AudioSignal& signal,
                                          const PipelineConfig& cfg) {
  cfg.validate(signal.sample_rate_hz);
  ExtractedFeatures out;
  AudioSignal input = signal;
  if (cfg.apply_vad_before_features) {
    const FrameSequence frames = frame_signal(signal, cfg.frame);
    const EndpointResult endpoints = detect_endpoints(frames, cfg.vad);
    if (!endpoints.trimmed_range) {
      out.all_silence = true;
      return out;
    }
    input = trim_to_range(signal, *endpoints.trimmed_range);
    out.time_offset_s =
        static_cast<double>(endpoints.trimmed_range->first) / signal.sample_rate_hz;
  }
  const MelFilterbank bank =
      build_filterbank(cfg.mel.num_filters, cfg.mel.fft_size, input.sample_rate_hz,
                       cfg.mel.f_low_hz, cfg.mel.resolve_f_high(input.sample_rate_hz));
  out.features = extract_mfcc(input, bank, cfg.frame, cfg.mel.num_ceps);
  out.features.config_digest = config_digest(cfg, signal.sample_rate_hz);
  return out;
}

inline int cmd_vad(const std::string& input, const CommonOpts& opts) {
  const PipelineConfig cfg = resolve_config(opts);
  const AudioSignal signal = load_wav(input);
  cfg.validate(signal.sample_rate_hz);
  const FrameSequence frames = frame_signal(signal, cfg.frame);
  const EndpointResult endpoints = detect_endpoints(frames, cfg.vad);

  Table table;
  table.columns = {"frame_index", "start_sample", "energy", "zcr", "kept"};
  for (std::size_t i = 0; i < frames.num_frames(); ++i) {
    table.add_row({static_cast<std::int64_t>(i),
                   static_cast<std::int64_t>(frames.start_offsets[i]),
                   endpoints.frame_energies[i], endpoints.frame_zcrs[i],
                   static_cast<std::int64_t>(endpoints.keep_mask[i] ? 1 : 0)});
  }
  emit_table(table, opts, config_digest(cfg, signal.sample_rate_hz));
  return 0;
}

inline int cmd_pitch(const std::string& input, const CommonOpts& opts) {
  const PipelineConfig cfg = resolve_config(opts);
  const AudioSignal signal = load_wav(input);
  cfg.validate(signal.sample_rate_hz);
  const PitchTrack track = track_pitch(signal, cfg.pitch);

  Table table;
  table.columns = {"time_s", "label", "f0_hz", "peak_value", "zcr"};
  for (const PitchEntry& e : track.entries) {
    table.add_row({e.time_s, std::string(to_string(e.label)),
                   e.f0_hz ? TableValue(*e.f0_hz) : TableValue(std::monostate{}),
                   e.peak_value, e.zcr});
  }
  emit_table(table, opts, config_digest(cfg, signal.sample_rate_hz));
  return 0;
}

inline int cmd_mfcc(const std::string& input, const CommonOpts& opts) {
  const PipelineConfig cfg = resolve_config(opts);
  const AudioSignal signal = load_wav(input);
  const ExtractedFeatures extracted = compute_features(signal, cfg);

  Table table;
  table.columns = {"time_s"};
  for (int c = 0; c < cfg.mel.num_ceps; ++c) table.columns.push_back("c" + std::to_string(c));
  if (!extracted.all_silence) {
    for (std::size_t i = 0; i < extracted.features.vectors.size(); ++i) {
      std::vector<TableValue> row;
      row.reserve(table.columns.size());
      row.emplace_back(extracted.time_offset_s + extracted.features.frame_times_s[i]);
      for (double c : extracted.features.vectors[i]) row.emplace_back(c);
      table.add_row(std::move(row));
    }
  }
  emit_table(table, opts, config_digest(cfg, signal.sample_rate_hz));
  return 0;
}

inline int cmd_train(const std::string& wav_dir, const std::string& label,
                     const std::string& out, const CommonOpts& opts) {
  const PipelineConfig cfg = resolve_config(opts);
  const auto wavs = sorted_files_with_extension(wav_dir, ".wav");
  if (wavs.empty()) throw EmptyTrainingSet("no .wav files in " + wav_dir);

  std::vector<std::vector<double>> training;
  int sample_rate = 0;
  for (const auto& path : wavs) {
    const AudioSignal signal = load_wav(path.string());
    if (sample_rate == 0) {
      sample_rate = signal.sample_rate_hz;
    } else if (signal.sample_rate_hz != sample_rate) {
      throw ConfigMismatch(path.string() + ": sample rate differs from the rest of the set");
    }
    const ExtractedFeatures extracted = compute_features(signal, cfg);
    if (extracted.all_silence) continue;
    training.insert(training.end(), extracted.features.vectors.begin(),
                    extracted.features.vectors.end());
  }
  if (training.empty()) {
    throw EmptyTrainingSet("every training file was trimmed to silence");
  }

  const Codebook book = lbg_train(training, cfg.vq.target_size, cfg.vq.lbg, label);
  const std::string out_path = out.empty() ? label + ".codebook.json" : out;
  save_codebook(book, out_path, config_digest(cfg, sample_rate));
  std::cout << "trained " << label << ": " << training.size() << " vectors, "
            << book.codewords.size() << " codewords, distortion "
            << format_double(book.train_distortion) << "\n";
  return 0;
}

inline int cmd_recognize(const std::string& input, const std::string& books_dir,
                         const CommonOpts& opts) {
  const PipelineConfig cfg = resolve_config(opts);
  const auto paths = sorted_files_with_extension(books_dir, ".json");
  if (paths.empty()) throw NoModels("no codebook files in " + books_dir);
  std::vector<Codebook> books;
  books.reserve(paths.size());
  for (const auto& path : paths) books.push_back(load_codebook(path.string()));

  const AudioSignal signal = load_wav(input);
  const ExtractedFeatures extracted = compute_features(signal, cfg);
  if (extracted.all_silence) {
    throw EmptyFeatures(input + ": trimmed to silence, nothing to recognize");
  }
  const RecognitionResult result = recognize(extracted.features, books);

  // Ranked ascending by score; stable sort preserves codebook order on ties.
  std::vector<std::size_t> order(result.scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.scores[a].second < result.scores[b].second;
  });

  Table table;
  table.columns = {"rank", "label", "score"};
  for (std::size_t r = 0; r < order.size(); ++r) {
    table.add_row({static_cast<std::int64_t>(r + 1), result.scores[order[r]].first,
                   result.scores[order[r]].second});
  }
  emit_table(table, opts, config_digest(cfg, signal.sample_rate_hz));
  return 0;
}

struct SynthOpts {
  std::string out;
  std::string kind;
  double f0_hz = 100.0;
  double freq_hz = 1000.0;
  double seconds = 1.0;
  double amplitude = 0.8;
  int sample_rate_hz = 16000;
  std::uint32_t seed = 1;
};

inline int cmd_synth(const SynthOpts& o) {
  AudioSignal signal;
  if (o.kind == "pulse") {
    signal = synth_pulse_train(o.f0_hz, o.seconds, o.amplitude, o.sample_rate_hz);
  } else if (o.kind == "tone") {
    signal = synth_tone(o.freq_hz, o.seconds, o.amplitude, o.sample_rate_hz);
  } else if (o.kind == "noise") {
    signal = synth_noise(o.seconds, o.amplitude, o.sample_rate_hz, o.seed);
  } else {
    signal = synth_silence(o.seconds, o.sample_rate_hz);
  }
  save_wav_pcm16(signal, o.out);
  return 0;
}

}  // namespace cli_detail

/// Entry point shared by the cepstra binary and the test suites. `args` holds
/// everything after the program name. Returns 0 on success, 1 on usage
/// errors, 2 on data errors.
inline int run_command(const std::vector<std::string>& args) {
  using namespace cli_detail;

  CLI::App app{"speech front-end: endpoint detection, cepstral pitch, MFCC, VQ recognition"};
  app.require_subcommand(1);

  std::string vad_input, pitch_input, mfcc_input;
  CommonOpts vad_opts, pitch_opts, mfcc_opts, train_opts, recognize_opts;

  CLI::App* vad = app.add_subcommand("vad", "per-frame energy/ZCR endpoint detection");
  vad->add_option("input", vad_input, "input WAV file")->required();
  add_common_options(vad, vad_opts, true);

  CLI::App* pitch = app.add_subcommand("pitch", "cepstral pitch track with voicing labels");
  pitch->add_option("input", pitch_input, "input WAV file")->required();
  add_common_options(pitch, pitch_opts, true);

  CLI::App* mfcc = app.add_subcommand("mfcc", "MFCC feature matrix");
  mfcc->add_option("input", mfcc_input, "input WAV file")->required();
  add_common_options(mfcc, mfcc_opts, true);

  std::string train_dir, train_label, train_out;
  CLI::App* train = app.add_subcommand("train", "train a VQ codebook from a directory of WAVs");
  train->add_option("wav_dir", train_dir, "directory of training WAVs for one label")
      ->required();
  train->add_option("--label", train_label, "codebook label")->required();
  train->add_option("--out", train_out, "codebook file (default: <label>.codebook.json)");
  add_common_options(train, train_opts, false);

  std::string rec_input, rec_dir;
  CLI::App* rec = app.add_subcommand("recognize", "score a WAV against stored codebooks");
  rec->add_option("input", rec_input, "input WAV file")->required();
  rec->add_option("codebook_dir", rec_dir, "directory of codebook .json files")->required();
  add_common_options(rec, recognize_opts, true);

  SynthOpts synth_opts;
  CLI::App* synth = app.add_subcommand("synth", "generate test signals");
  synth->group("");  // hidden
  synth->add_option("output", synth_opts.out, "output WAV file")->required();
  synth->add_option("--kind", synth_opts.kind, "pulse, tone, noise or silence")
      ->required()
      ->check(CLI::IsMember({"pulse", "tone", "noise", "silence"}));
  synth->add_option("--f0", synth_opts.f0_hz, "pulse train fundamental (Hz)");
  synth->add_option("--freq", synth_opts.freq_hz, "tone frequency (Hz)");
  synth->add_option("--seconds", synth_opts.seconds, "duration");
  synth->add_option("--amplitude", synth_opts.amplitude, "peak amplitude");
  synth->add_option("--rate", synth_opts.sample_rate_hz, "sample rate (Hz)");
  synth->add_option("--seed", synth_opts.seed, "noise seed");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("cepstra");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (vad->parsed()) return cmd_vad(vad_input, vad_opts);
    if (pitch->parsed()) return cmd_pitch(pitch_input, pitch_opts);
    if (mfcc->parsed()) return cmd_mfcc(mfcc_input, mfcc_opts);
    if (train->parsed()) return cmd_train(train_dir, train_label, train_out, train_opts);
    if (rec->parsed()) return cmd_recognize(rec_input, rec_dir, recognize_opts);
    if (synth->parsed()) return cmd_synth(synth_opts);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace cepstra
