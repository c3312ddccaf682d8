/* Copyright 2026 The avredux Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "avredux/error.hpp"
#include "avredux/ingest.hpp"

namespace avredux {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads a decimal token.
  long Number(const char* what) {
    SkipSpace();
    long value = 0;
    size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) {
        throw ParseError(std::string("PGM: ") + what + " too large");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      throw ParseError(std::string("PGM: expected ") + what + " at byte " +
                       std::to_string(pos_));
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from the raster.
  void EndOfHeader() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ParseError("PGM: missing whitespace after maxval");
    }
    ++pos_;
  }

  size_t pos() const { return pos_; }

 private:
  void SkipSpace() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  size_t pos_ = 2;
};

}  // namespace

GrayImage ParsePgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError("PGM: expected binary magic 'P5'");
  }
  HeaderReader header(bytes);
  const long width = header.Number("width");
  const long height = header.Number("height");
  const long maxval = header.Number("maxval");
  if (width <= 0 || height <= 0) {
    throw ParseError("PGM: dimensions must be positive");
  }
  if (maxval != 255) {
    throw ParseError("PGM: maxval must be 255, got " + std::to_string(maxval));
  }
  header.EndOfHeader();

  const size_t count = static_cast<size_t>(width) * static_cast<size_t>(height);
  const size_t available = bytes.size() - header.pos();
  if (available < count) {
    throw ParseError("PGM: truncated raster, expected " +
                     std::to_string(count) + " bytes, found " +
                     std::to_string(available));
  }
  GrayImage img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  img.pixels.assign(bytes.begin() + header.pos(),
                    bytes.begin() + header.pos() + count);
  return img;
}

GrayImage ReadPgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  try {
    return ParsePgm(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> SerializePgm(const GrayImage& img) {
  const std::string header = "P5\n" + std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

}  // namespace avredux
