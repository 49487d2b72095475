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

#ifndef SELECTORLAB_BINARY_IO_H_
#define SELECTORLAB_BINARY_IO_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace selectorlab {

// Little-endian append-only byte sink.
class ByteWriter {
 public:
  void put_bytes(std::string_view bytes);
  void put_u8(std::uint8_t v);
  void put_u32(std::uint32_t v);
  void put_u64(std::uint64_t v);
  void put_i64(std::int64_t v);
  void put_f32(float v);
  void put_f64(double v);

  const std::string& bytes() const { return buffer_; }
  std::string release() { return std::move(buffer_); }

 private:
  std::string buffer_;
};

// Little-endian cursor over an in-memory file. Every failure reports the byte
// offset at which it happened.
class ByteReader {
 public:
  ByteReader(std::string_view data, std::string source);

  std::string_view get_bytes(std::size_t n);
  std::uint8_t get_u8();
  std::uint32_t get_u32();
  std::uint64_t get_u64();
  std::int64_t get_i64();
  float get_f32();
  double get_f64();

  // Throws FormatError unless `magic` is next in the stream.
  void expect_magic(std::string_view magic);

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return data_.size() - offset_; }
  const std::string& source() const { return source_; }

  // Throws a FormatError annotated with the current offset.
  [[noreturn]] void fail(const std::string& what) const;

 private:
  void require(std::size_t n);

  std::string_view data_;
  std::string source_;
  std::size_t offset_ = 0;
};

std::string read_file(const std::string& path);

}  // namespace selectorlab

#endif  // SELECTORLAB_BINARY_IO_H_
