/*
 * Copyright 2026 The SelectorLab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "selectorlab/binary_io.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "selectorlab/error.h"

namespace selectorlab {
namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts are not supported");

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto raw = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(raw.begin(), raw.end());
    return std::bit_cast<T>(raw);
  }
  return v;
}

}  // namespace

void ByteWriter::put_bytes(std::string_view bytes) { buffer_.append(bytes); }

template <typename T>
static void append_raw(std::string& buffer, T v) {
  v = to_little(v);
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buffer.append(raw, sizeof(T));
}

void ByteWriter::put_u8(std::uint8_t v) { buffer_.push_back(static_cast<char>(v)); }
void ByteWriter::put_u32(std::uint32_t v) { append_raw(buffer_, v); }
void ByteWriter::put_u64(std::uint64_t v) { append_raw(buffer_, v); }
void ByteWriter::put_i64(std::int64_t v) { append_raw(buffer_, v); }
void ByteWriter::put_f32(float v) { append_raw(buffer_, v); }
void ByteWriter::put_f64(double v) { append_raw(buffer_, v); }

ByteReader::ByteReader(std::string_view data, std::string source)
    : data_(data), source_(std::move(source)) {}

void ByteReader::fail(const std::string& what) const {
  std::ostringstream msg;
  msg << source_ << ": " << what << " (at byte offset " << offset_ << ")";
  throw FormatError(msg.str());
}

void ByteReader::require(std::size_t n) {
  if (remaining() < n) {
    fail("unexpected end of file: need " + std::to_string(n) + " bytes, " +
         std::to_string(remaining()) + " left");
  }
}

std::string_view ByteReader::get_bytes(std::size_t n) {
  require(n);
  auto out = data_.substr(offset_, n);
  offset_ += n;
  return out;
}

template <typename T>
static T read_raw(ByteReader& r) {
  auto bytes = r.get_bytes(sizeof(T));
  T v;
  std::memcpy(&v, bytes.data(), sizeof(T));
  return to_little(v);
}

std::uint8_t ByteReader::get_u8() { return read_raw<std::uint8_t>(*this); }
std::uint32_t ByteReader::get_u32() { return read_raw<std::uint32_t>(*this); }
std::uint64_t ByteReader::get_u64() { return read_raw<std::uint64_t>(*this); }
std::int64_t ByteReader::get_i64() { return read_raw<std::int64_t>(*this); }
float ByteReader::get_f32() { return read_raw<float>(*this); }
double ByteReader::get_f64() { return read_raw<double>(*this); }

void ByteReader::expect_magic(std::string_view magic) {
  if (remaining() < magic.size() || data_.substr(offset_, magic.size()) != magic) {
    fail("bad magic, expected \"" + std::string(magic) + "\"");
  }
  offset_ += magic.size();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace selectorlab
