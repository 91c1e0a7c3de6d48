// core/src/serialize.cc

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

#include "prosoda/serialize.h"

#include <bit>
#include <cstring>
#include <fstream>

namespace prosoda {

void ByteWriter::U16(uint16_t v) {
  U8(static_cast<uint8_t>(v & 0xff));
  U8(static_cast<uint8_t>(v >> 8));
}

void ByteWriter::U32(uint32_t v) {
  for (int i = 0; i < 4; ++i) U8(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
}

void ByteWriter::U64(uint64_t v) {
  for (int i = 0; i < 8; ++i) U8(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
}

void ByteWriter::F64(double v) { U64(std::bit_cast<uint64_t>(v)); }

void ByteWriter::Str(const std::string& s) {
  U32(static_cast<uint32_t>(s.size()));
  Raw(s.data(), s.size());
}

void ByteWriter::VecF64(std::span<const double> v) {
  U64(v.size());
  for (double x : v) F64(x);
}

void ByteWriter::VecI32(std::span<const int> v) {
  U64(v.size());
  for (int x : v) I32(x);
}

void ByteWriter::Raw(const void* data, size_t n) {
  buf_.append(static_cast<const char*>(data), n);
}

void ByteReader::Need(size_t n) const {
  if (pos_ + n > n_) Fail("serialize: truncated input (need " +
                          std::to_string(n) + " bytes at offset " +
                          std::to_string(pos_) + ", have " +
                          std::to_string(n_ - pos_) + ")");
}

uint8_t ByteReader::U8() {
  Need(1);
  return static_cast<uint8_t>(p_[pos_++]);
}

uint16_t ByteReader::U16() {
  uint16_t lo = U8();
  uint16_t hi = U8();
  return static_cast<uint16_t>(lo | (hi << 8));
}

uint32_t ByteReader::U32() {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(U8()) << (8 * i);
  return v;
}

uint64_t ByteReader::U64() {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(U8()) << (8 * i);
  return v;
}

double ByteReader::F64() { return std::bit_cast<double>(U64()); }

std::string ByteReader::Str() {
  uint32_t n = U32();
  Need(n);
  std::string s(p_ + pos_, n);
  pos_ += n;
  return s;
}

std::vector<double> ByteReader::VecF64() {
  uint64_t n = U64();
  Need(n * 8);
  std::vector<double> v(n);
  for (uint64_t i = 0; i < n; ++i) v[i] = F64();
  return v;
}

std::vector<int> ByteReader::VecI32() {
  uint64_t n = U64();
  Need(n * 4);
  std::vector<int> v(n);
  for (uint64_t i = 0; i < n; ++i) v[i] = I32();
  return v;
}

std::string ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail("serialize: cannot open file for reading: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return bytes;
}

void WriteFileBytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail("serialize: cannot open file for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail("serialize: write failed: " + path);
}

}  // namespace prosoda
