// core/include/prosoda/units.h

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

#include <vector>

#include "prosoda/common.h"

namespace prosoda {

// A unit sequence is a plain vector<int> of cluster indices, one per frame.

// Run-length form: no two consecutive units equal, durations[i] >= 1,
// and durations sum to the source sequence length.
struct ReducedUnits {
  std::vector<int> units;
  std::vector<int> durations;

  int size() const { return static_cast<int>(units.size()); }
};

ReducedUnits Reduce(const std::vector<int>& units);
std::vector<int> Expand(const ReducedUnits& r);

}  // namespace prosoda
