// core/include/prosoda/fft.h

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

#include <complex>
#include <span>

namespace prosoda {

inline bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 decimation-in-time FFT. a.size() must be a
// power of two. The inverse transform divides by n.
void Fft(std::span<std::complex<double>> a, bool inverse = false);

}  // namespace prosoda
