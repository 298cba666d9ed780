// cepstra/audio_io.hpp

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
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cepstra/errors.hpp"

namespace cepstra {

/// Mono signal with normalized samples in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate_hz = 0;
  std::string source_label;

  double duration_s() const {
    return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
  }
};

namespace detail {

inline std::uint16_t read_u16le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void write_u16le(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void write_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline float read_f32le(const unsigned char* p) {
  std::uint32_t bits = read_u32le(p);
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

}  // namespace detail

// Accepted WAVE encodings: PCM 16-bit and IEEE float 32-bit, 1 or 2 channels.
inline constexpr std::uint16_t kWaveFormatPcm = 0x0001;
inline constexpr std::uint16_t kWaveFormatIeeeFloat = 0x0003;
inline constexpr int kMinSampleRateHz = 8000;

/// Loads a RIFF/WAVE file into a normalized mono signal. Stereo input is
/// downmixed by averaging the channels; 16-bit samples are divided by 32768.
inline AudioSignal load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw MalformedContainer(path + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format_tag = 0, channels = 0, bits_per_sample = 0;
  std::uint32_t sample_rate = 0;
  std::size_t data_offset = 0, data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t chunk_size = detail::read_u32le(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      throw MalformedContainer(path + ": chunk overruns file");
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw MalformedContainer(path + ": fmt chunk too small");
      format_tag = detail::read_u16le(bytes.data() + body + 0);
      channels = detail::read_u16le(bytes.data() + body + 2);
      sample_rate = detail::read_u32le(bytes.data() + body + 4);
      bits_per_sample = detail::read_u16le(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_offset = body;
      data_size = chunk_size;
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are 2-byte aligned
  }
  if (!have_fmt) throw MalformedContainer(path + ": missing fmt chunk");
  if (!have_data) throw MalformedContainer(path + ": missing data chunk");

  const bool pcm16 = format_tag == kWaveFormatPcm && bits_per_sample == 16;
  const bool float32 = format_tag == kWaveFormatIeeeFloat && bits_per_sample == 32;
  if (!pcm16 && !float32) {
    throw UnsupportedEncoding(path + ": only PCM16 and float32 are supported (format tag " +
                              std::to_string(format_tag) + ", " +
                              std::to_string(bits_per_sample) + " bits)");
  }
  if (channels != 1 && channels != 2) {
    throw UnsupportedEncoding(path + ": " + std::to_string(channels) + " channels");
  }
  if (sample_rate < kMinSampleRateHz) {
    throw UnsupportedEncoding(path + ": sample rate " + std::to_string(sample_rate) +
                              " below " + std::to_string(kMinSampleRateHz));
  }

  const std::size_t bytes_per_sample = bits_per_sample / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t num_frames = data_size / frame_bytes;
  if (num_frames == 0) throw EmptyAudio(path + ": zero data samples");

  AudioSignal out;
  out.sample_rate_hz = static_cast<int>(sample_rate);
  out.source_label = std::filesystem::path(path).filename().string();
  out.samples.resize(num_frames);
  const unsigned char* data = bytes.data() + data_offset;
  for (std::size_t i = 0; i < num_frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + (i * channels + c) * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<std::int16_t>(detail::read_u16le(p)) / 32768.0;
      } else {
        acc += std::clamp(static_cast<double>(detail::read_f32le(p)), -1.0, 1.0);
      }
    }
    out.samples[i] = acc / channels;
  }
  return out;
}

/// Writes a mono PCM16 WAVE file. Samples are clamped to [-1, 1].
inline void save_wav_pcm16(const AudioSignal& signal, const std::string& path) {
  if (signal.samples.empty()) throw EmptyAudio("refusing to write empty signal to " + path);
  std::string body;
  body.reserve(44 + 2 * signal.samples.size());
  const std::uint32_t data_size = static_cast<std::uint32_t>(2 * signal.samples.size());
  body += "RIFF";
  detail::write_u32le(body, 36 + data_size);
  body += "WAVEfmt ";
  detail::write_u32le(body, 16);
  detail::write_u16le(body, kWaveFormatPcm);
  detail::write_u16le(body, 1);
  detail::write_u32le(body, static_cast<std::uint32_t>(signal.sample_rate_hz));
  detail::write_u32le(body, static_cast<std::uint32_t>(signal.sample_rate_hz) * 2);
  detail::write_u16le(body, 2);
  detail::write_u16le(body, 16);
  body += "data";
  detail::write_u32le(body, data_size);
  for (double x : signal.samples) {
    const long q = std::lround(std::clamp(x, -1.0, 1.0) * 32768.0);
    detail::write_u16le(body, static_cast<std::uint16_t>(
                                  static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L))));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out.write(body.data(), static_cast<std::streamsize>(body.size()))) {
    throw IoFailure("cannot write " + path);
  }
}

// ---------------------------------------------------------------------------
// Tabular output (CSV / JSON)
// ---------------------------------------------------------------------------

// monostate renders as an empty CSV cell / JSON null.
using TableValue = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<TableValue>> rows;

  void add_row(std::vector<TableValue> row) {
    if (row.size() != columns.size()) {
      throw Error("row width " + std::to_string(row.size()) + " does not match " +
                  std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
};

enum class TableFormat { csv, json };

inline TableFormat table_format_from_string(const std::string& s) {
  if (s == "csv") return TableFormat::csv;
  if (s == "json") return TableFormat::json;
  throw UsageError("unknown table format '" + s + "' (expected csv or json)");
}

// 17 significant digits round-trip any double exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_cell(const TableValue& v) {
  if (std::holds_alternative<std::monostate>(v)) return "";
  if (const double* d = std::get_if<double>(&v)) return format_double(*d);
  if (const std::int64_t* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return csv_escape(std::get<std::string>(v));
}

inline nlohmann::json json_cell(const TableValue& v) {
  if (std::holds_alternative<std::monostate>(v)) return nullptr;
  if (const double* d = std::get_if<double>(&v)) return *d;
  if (const std::int64_t* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

}  // namespace detail

using TableMeta = std::vector<std::pair<std::string, std::string>>;

// CSV: optional '# key: value' comment lines, then a header row, then data,
// LF line endings. JSON: a top-level array of row objects; with meta the file
// becomes {"<meta keys>": ..., "rows": [...]} so the metadata has a place to
// live inside the document.
inline void write_table(const Table& table, std::ostream& out, TableFormat format,
                        const TableMeta& meta = {}) {
  if (format == TableFormat::csv) {
    for (const auto& [key, value] : meta) out << "# " << key << ": " << value << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out << ',';
      out << detail::csv_escape(table.columns[c]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ',';
        out << detail::csv_cell(row[c]);
      }
      out << '\n';
    }
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json obj;
      for (std::size_t c = 0; c < row.size(); ++c) {
        obj[table.columns[c]] = detail::json_cell(row[c]);
      }
      rows.push_back(std::move(obj));
    }
    if (meta.empty()) {
      out << rows.dump(2) << '\n';
    } else {
      nlohmann::json doc;
      for (const auto& [key, value] : meta) doc[key] = value;
      doc["rows"] = std::move(rows);
      out << doc.dump(2) << '\n';
    }
  }
}

inline void save_table(const Table& table, const std::string& path, TableFormat format,
                       const TableMeta& meta = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  write_table(table, out, format, meta);
  if (!out) throw IoFailure("failed writing " + path);
}

}  // namespace cepstra
