// ser/audio.cpp

// Copyright 2026  SER Toolkit Authors

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

#include "ser/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

namespace ser {
namespace audio {

namespace {

constexpr int kMinSampleRateHz = 8000;
constexpr double kInt16Scale = 32768.0;

std::uint32_t readU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t readU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void putU32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void putU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

AudioSignal readWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::FileNotFound, "cannot open '" + path + "'");
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  in.close();

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::CorruptHeader, "'" + path + "' is not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format_code = 0, channels = 0, bits_per_sample = 0, block_align = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  // Chunk walk. Chunks are padded to even sizes.
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t chunk_size = readU32(hdr + 4);
    pos += 8;
    if (pos + chunk_size > bytes.size()) {
      throw Error(ErrorCode::CorruptHeader,
                  "chunk size exceeds file size in '" + path + "'");
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16) {
        throw Error(ErrorCode::CorruptHeader, "fmt chunk too small in '" + path + "'");
      }
      const unsigned char* f = bytes.data() + pos;
      format_code = readU16(f);
      channels = readU16(f + 2);
      sample_rate = readU32(f + 4);
      block_align = readU16(f + 12);
      bits_per_sample = readU16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + pos;
      data_size = chunk_size;
    }
    pos += chunk_size + (chunk_size & 1);
  }

  if (!have_fmt || data == nullptr) {
    throw Error(ErrorCode::CorruptHeader,
                "missing fmt or data chunk in '" + path + "'");
  }
  if (format_code != 1) {
    throw Error(ErrorCode::UnsupportedFormat,
                "audio format code " + std::to_string(format_code) +
                    " (only integer PCM is supported) in '" + path + "'");
  }
  if (bits_per_sample != 16) {
    throw Error(ErrorCode::UnsupportedFormat,
                std::to_string(bits_per_sample) + "-bit PCM (only 16-bit) in '" +
                    path + "'");
  }
  if (channels != 1 && channels != 2) {
    throw Error(ErrorCode::UnsupportedFormat,
                std::to_string(channels) + " channels (mono or stereo only) in '" +
                    path + "'");
  }
  if (sample_rate < kMinSampleRateHz) {
    throw Error(ErrorCode::UnsupportedFormat,
                "sample rate " + std::to_string(sample_rate) + " Hz below 8000 in '" +
                    path + "'");
  }
  const std::size_t bytes_per_frame = 2u * channels;
  if (block_align != bytes_per_frame || data_size % bytes_per_frame != 0) {
    throw Error(ErrorCode::CorruptHeader,
                "data size inconsistent with block alignment in '" + path + "'");
  }
  const std::size_t n_frames = data_size / bytes_per_frame;
  if (n_frames == 0) {
    throw Error(ErrorCode::CorruptHeader, "empty data chunk in '" + path + "'");
  }

  AudioSignal out;
  out.sample_rate_hz = static_cast<int>(sample_rate);
  out.source_path = path;
  out.samples.resize(static_cast<Eigen::Index>(n_frames));
  for (std::size_t i = 0; i < n_frames; ++i) {
    const unsigned char* p = data + i * bytes_per_frame;
    const auto s0 = static_cast<std::int16_t>(readU16(p));
    if (channels == 1) {
      out.samples[static_cast<Eigen::Index>(i)] = s0 / kInt16Scale;
    } else {
      const auto s1 = static_cast<std::int16_t>(readU16(p + 2));
      out.samples[static_cast<Eigen::Index>(i)] =
          (s0 / kInt16Scale + s1 / kInt16Scale) / 2.0;
    }
  }
  return out;
}

void writeWav(const std::string& path, const AudioSignal& signal) {
  const auto n = static_cast<std::uint32_t>(signal.samples.size());
  const std::uint32_t data_size = n * 2;
  const auto rate = static_cast<std::uint32_t>(signal.sample_rate_hz);

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  putU32(out, 36 + data_size);
  out += "WAVE";
  out += "fmt ";
  putU32(out, 16);
  putU16(out, 1);  // integer PCM
  putU16(out, 1);  // mono
  putU32(out, rate);
  putU32(out, rate * 2);
  putU16(out, 2);
  putU16(out, 16);
  out += "data";
  putU32(out, data_size);
  for (Eigen::Index i = 0; i < signal.samples.size(); ++i) {
    const double x = std::clamp(signal.samples[i], -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::lrint(x * 32767.0));
    putU16(out, static_cast<std::uint16_t>(q));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !f.write(out.data(), static_cast<std::streamsize>(out.size()))) {
    throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  }
}

AudioSignal preEmphasize(const AudioSignal& signal, double alpha) {
  if (signal.samples.size() == 0) {
    throw Error(ErrorCode::EmptySignal, "pre-emphasis input is empty");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::BadArgument, "pre-emphasis alpha must lie in [0, 1)");
  }
  AudioSignal out = signal;
  const auto n = signal.samples.size();
  if (n > 1) {
    out.samples.tail(n - 1) =
        signal.samples.tail(n - 1) - alpha * signal.samples.head(n - 1);
  }
  return out;
}

}  // namespace audio
}  // namespace ser
