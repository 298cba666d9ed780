// tests/test_audio_io.cpp

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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "cepstra/audio_io.hpp"
#include "cepstra/synth.hpp"
#include "testutil.hpp"

using namespace cepstra;

namespace {

// Hand-assembled WAV bytes so the reader is checked against the container
// spec, not against our own writer.
std::string make_wav(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                     std::uint16_t bits, const std::string& payload) {
  std::string w;
  w += "RIFF";
  detail::write_u32le(w, 36 + static_cast<std::uint32_t>(payload.size()));
  w += "WAVEfmt ";
  detail::write_u32le(w, 16);
  detail::write_u16le(w, format);
  detail::write_u16le(w, channels);
  detail::write_u32le(w, rate);
  detail::write_u32le(w, rate * channels * bits / 8);
  detail::write_u16le(w, static_cast<std::uint16_t>(channels * bits / 8));
  detail::write_u16le(w, bits);
  w += "data";
  detail::write_u32le(w, static_cast<std::uint32_t>(payload.size()));
  w += payload;
  return w;
}

std::string pcm16_payload(const std::vector<std::int16_t>& samples) {
  std::string p;
  for (std::int16_t s : samples) detail::write_u16le(p, static_cast<std::uint16_t>(s));
  return p;
}

}  // namespace

TEST_CASE("load_wav decodes PCM16 with 1/32768 scaling") {
  testutil::TempDir tmp;
  const auto path = tmp.file("a.wav");
  testutil::write_file(path, make_wav(1, 1, 16000, 16, pcm16_payload({0, -32768, 16384, 32767})));
  const AudioSignal sig = load_wav(path);
  REQUIRE(sig.sample_rate_hz == 16000);
  REQUIRE(sig.samples.size() == 4);
  CHECK(sig.samples[0] == 0.0);
  CHECK(sig.samples[1] == -1.0);
  CHECK(sig.samples[2] == 0.5);
  CHECK_THAT(sig.samples[3], Catch::Matchers::WithinAbs(32767.0 / 32768.0, 1e-15));
}

TEST_CASE("load_wav downmixes stereo by averaging") {
  testutil::TempDir tmp;
  const auto path = tmp.file("st.wav");
  // (0.5, -0.5) -> 0.0 ; (0.25, 0.25) -> 0.25
  testutil::write_file(path, make_wav(1, 2, 16000, 16, pcm16_payload({16384, -16384, 8192, 8192})));
  const AudioSignal sig = load_wav(path);
  REQUIRE(sig.samples.size() == 2);
  CHECK(sig.samples[0] == 0.0);
  CHECK(sig.samples[1] == 0.25);
}

TEST_CASE("stereo downmix is order-independent") {
  std::mt19937 rng(7);
  std::vector<std::int16_t> left(50), right(50);
  for (std::size_t i = 0; i < 50; ++i) {
    left[i] = static_cast<std::int16_t>(rng() % 65536 - 32768);
    right[i] = static_cast<std::int16_t>(rng() % 65536 - 32768);
  }
  std::vector<std::int16_t> ab, ba;
  for (std::size_t i = 0; i < 50; ++i) {
    ab.push_back(left[i]);
    ab.push_back(right[i]);
    ba.push_back(right[i]);
    ba.push_back(left[i]);
  }
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("ab.wav"), make_wav(1, 2, 16000, 16, pcm16_payload(ab)));
  testutil::write_file(tmp.file("ba.wav"), make_wav(1, 2, 16000, 16, pcm16_payload(ba)));
  CHECK(load_wav(tmp.file("ab.wav")).samples == load_wav(tmp.file("ba.wav")).samples);
}

TEST_CASE("load_wav reads float32 and clamps to [-1, 1]") {
  std::string payload;
  for (float f : {0.25f, -0.75f, 1.5f, -2.0f}) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof bits);
    detail::write_u32le(payload, bits);
  }
  testutil::TempDir tmp;
  const auto path = tmp.file("f.wav");
  testutil::write_file(path, make_wav(3, 1, 44100, 32, payload));
  const AudioSignal sig = load_wav(path);
  REQUIRE(sig.samples.size() == 4);
  CHECK(sig.samples[0] == 0.25);
  CHECK(sig.samples[1] == -0.75);
  CHECK(sig.samples[2] == 1.0);
  CHECK(sig.samples[3] == -1.0);
}

TEST_CASE("load_wav rejects bad containers and encodings") {
  testutil::TempDir tmp;

  testutil::write_file(tmp.file("x.wav"), "JUNKdata");
  CHECK_THROWS_AS(load_wav(tmp.file("x.wav")), MalformedContainer);

  // mu-law format tag
  testutil::write_file(tmp.file("mu.wav"), make_wav(7, 1, 16000, 8, std::string(8, '\0')));
  CHECK_THROWS_AS(load_wav(tmp.file("mu.wav")), UnsupportedEncoding);

  // 24-bit PCM
  testutil::write_file(tmp.file("b24.wav"), make_wav(1, 1, 16000, 24, std::string(6, '\0')));
  CHECK_THROWS_AS(load_wav(tmp.file("b24.wav")), UnsupportedEncoding);

  // empty data chunk
  testutil::write_file(tmp.file("empty.wav"), make_wav(1, 1, 16000, 16, ""));
  CHECK_THROWS_AS(load_wav(tmp.file("empty.wav")), EmptyAudio);

  // chunk size overrunning the file
  std::string truncated = make_wav(1, 1, 16000, 16, pcm16_payload({1, 2, 3, 4}));
  truncated.resize(truncated.size() - 4);
  testutil::write_file(tmp.file("tr.wav"), truncated);
  CHECK_THROWS_AS(load_wav(tmp.file("tr.wav")), MalformedContainer);

  // below the minimum sample rate
  testutil::write_file(tmp.file("slow.wav"), make_wav(1, 1, 4000, 16, pcm16_payload({0})));
  CHECK_THROWS_AS(load_wav(tmp.file("slow.wav")), UnsupportedEncoding);

  CHECK_THROWS_AS(load_wav(tmp.file("missing.wav")), IoFailure);
}

TEST_CASE("save_wav_pcm16 then load_wav recovers within quantization") {
  const AudioSignal sig = synth_tone(440.0, 0.05, 0.9, 16000);
  testutil::TempDir tmp;
  const auto path = tmp.file("rt.wav");
  save_wav_pcm16(sig, path);
  const AudioSignal back = load_wav(path);
  REQUIRE(back.samples.size() == sig.samples.size());
  REQUIRE(back.sample_rate_hz == sig.sample_rate_hz);
  for (std::size_t i = 0; i < sig.samples.size(); ++i) {
    CHECK_THAT(back.samples[i], Catch::Matchers::WithinAbs(sig.samples[i], 1.0 / 32768.0));
  }
}

TEST_CASE("save_table writes a header-only CSV for empty rows") {
  Table t;
  t.columns = {"t", "f0"};
  testutil::TempDir tmp;
  const auto path = tmp.file("empty.csv");
  save_table(t, path, TableFormat::csv);
  CHECK(testutil::read_file(path) == "t,f0\n");
}

TEST_CASE("save_table single record") {
  Table t;
  t.columns = {"t", "f0"};
  t.add_row({0.0, 200.0});
  testutil::TempDir tmp;
  const auto path = tmp.file("one.csv");
  save_table(t, path, TableFormat::csv);
  const auto csv = testutil::parse_csv(testutil::read_file(path));
  REQUIRE(csv.header == std::vector<std::string>{"t", "f0"});
  REQUIRE(csv.rows.size() == 1);
  CHECK(std::stod(csv.rows[0][0]) == 0.0);
  CHECK(std::stod(csv.rows[0][1]) == 200.0);
}

TEST_CASE("table round-trips through CSV and JSON within 1e-9") {
  std::mt19937 rng(123);
  Table t;
  t.columns = {"a", "b", "c"};
  std::vector<std::vector<double>> expect;
  for (int i = 0; i < 20; ++i) {
    const double a = (static_cast<double>(rng()) / 4294967296.0 - 0.5) * 1e4;
    const double b = std::exp((static_cast<double>(rng()) / 4294967296.0 - 0.5) * 20.0);
    const double c = static_cast<double>(rng()) * 1e-12;
    t.add_row({a, b, c});
    expect.push_back({a, b, c});
  }

  testutil::TempDir tmp;
  save_table(t, tmp.file("t.csv"), TableFormat::csv);
  const auto csv = testutil::parse_csv(testutil::read_file(tmp.file("t.csv")));
  REQUIRE(csv.rows.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double v = std::stod(csv.rows[i][j]);
      CHECK_THAT(v, Catch::Matchers::WithinAbs(expect[i][j], 1e-9) ||
                        Catch::Matchers::WithinRel(expect[i][j], 1e-9));
    }
  }

  save_table(t, tmp.file("t.json"), TableFormat::json);
  const auto doc = nlohmann::json::parse(testutil::read_file(tmp.file("t.json")));
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(doc[i]["a"].get<double>() == expect[i][0]);
    CHECK(doc[i]["b"].get<double>() == expect[i][1]);
    CHECK(doc[i]["c"].get<double>() == expect[i][2]);
  }
}

TEST_CASE("table meta lands in CSV comments and the JSON wrapper") {
  Table t;
  t.columns = {"x"};
  t.add_row({std::int64_t{1}});
  testutil::TempDir tmp;
  save_table(t, tmp.file("m.csv"), TableFormat::csv, {{"config_digest", "deadbeef"}});
  const std::string text = testutil::read_file(tmp.file("m.csv"));
  CHECK(text.rfind("# config_digest: deadbeef\n", 0) == 0);

  save_table(t, tmp.file("m.json"), TableFormat::json, {{"config_digest", "deadbeef"}});
  const auto doc = nlohmann::json::parse(testutil::read_file(tmp.file("m.json")));
  CHECK(doc["config_digest"] == "deadbeef");
  REQUIRE(doc["rows"].is_array());
  CHECK(doc["rows"][0]["x"] == 1);
}

TEST_CASE("add_row rejects mismatched width") {
  Table t;
  t.columns = {"a", "b"};
  CHECK_THROWS_AS(t.add_row({1.0}), Error);
}
