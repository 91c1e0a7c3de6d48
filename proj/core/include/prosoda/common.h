// core/include/prosoda/common.h

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
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace prosoda {

// Every failure in the library surfaces as Error with a message prefixed by
// the subsystem that raised it, e.g. "wav-io: ...".
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void Fail(const std::string& msg) { throw Error(msg); }

inline void Require(bool cond, const std::string& msg) {
  if (!cond) Fail(msg);
}

// Row-major dense matrix of doubles. Doubles are used throughout the
// toolkit; the on-disk formats store raw 64-bit IEEE as well.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  double& operator()(int r, int c) {
    return data[static_cast<size_t>(r) * cols + c];
  }
  double operator()(int r, int c) const {
    return data[static_cast<size_t>(r) * cols + c];
  }
  std::span<double> Row(int r) {
    return {data.data() + static_cast<size_t>(r) * cols,
            static_cast<size_t>(cols)};
  }
  std::span<const double> Row(int r) const {
    return {data.data() + static_cast<size_t>(r) * cols,
            static_cast<size_t>(cols)};
  }
  size_t Size() const { return data.size(); }
};

// mt19937_64 with hand-rolled output mappings. The standard engine is
// bit-reproducible everywhere; the standard distributions are not, so the
// mappings live here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). Modulo bias is < n / 2^64.
  int UniformInt(int n) {
    return static_cast<int>(engine_() % static_cast<uint64_t>(n));
  }

  // Standard normal via Box-Muller (no cached spare, keeps state minimal).
  double Gaussian();

 private:
  std::mt19937_64 engine_;
};

// FNV-1a over raw bytes; used for bundle component hashes and seed derivation.
uint64_t Fnv1a64(const void* data, size_t n);
uint64_t Fnv1a64(const std::string& s);

// Mix two 64-bit values into one; used to derive per-item seeds from a
// master seed without correlated streams.
uint64_t MixSeed(uint64_t a, uint64_t b);

}  // namespace prosoda
