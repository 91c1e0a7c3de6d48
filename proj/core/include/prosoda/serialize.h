// core/include/prosoda/serialize.h

// Copyright 2026  Prosoda Authors

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
#include <span>
#include <string>
#include <vector>

#include "prosoda/common.h"

namespace prosoda {

// Little-endian binary writer into an in-memory buffer. All multi-byte
// values are written explicitly byte by byte so files are identical across
// hosts. Doubles are stored as their raw IEEE-754 bit pattern, which makes
// save/load round trips bitwise.
class ByteWriter {
 public:
  void U8(uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void U16(uint16_t v);
  void U32(uint32_t v);
  void U64(uint64_t v);
  void I32(int32_t v) { U32(static_cast<uint32_t>(v)); }
  void I64(int64_t v) { U64(static_cast<uint64_t>(v)); }
  void F64(double v);
  void Str(const std::string& s);           // u32 length + bytes
  void VecF64(std::span<const double> v);   // u64 count + raw values
  void VecI32(std::span<const int> v);      // u64 count + raw values
  void Raw(const void* data, size_t n);

  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

// Bounds-checked reader over a byte buffer; throws Error("serialize:
// truncated ...") on overrun.
class ByteReader {
 public:
  explicit ByteReader(std::span<const char> bytes)
      : p_(bytes.data()), n_(bytes.size()) {}
  explicit ByteReader(const std::string& bytes)
      : p_(bytes.data()), n_(bytes.size()) {}

  uint8_t U8();
  uint16_t U16();
  uint32_t U32();
  uint64_t U64();
  int32_t I32() { return static_cast<int32_t>(U32()); }
  int64_t I64() { return static_cast<int64_t>(U64()); }
  double F64();
  std::string Str();
  std::vector<double> VecF64();
  std::vector<int> VecI32();

  size_t pos() const { return pos_; }
  bool AtEnd() const { return pos_ == n_; }

 private:
  void Need(size_t n) const;
  const char* p_;
  size_t n_;
  size_t pos_ = 0;
};

// Whole-file helpers.
std::string ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, const std::string& bytes);

}  // namespace prosoda
