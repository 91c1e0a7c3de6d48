// core/src/units.cc

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

#include "prosoda/units.h"

namespace prosoda {

ReducedUnits Reduce(const std::vector<int>& units) {
  Require(!units.empty(), "units: cannot reduce an empty unit sequence");
  ReducedUnits r;
  r.units.push_back(units[0]);
  r.durations.push_back(1);
  for (size_t i = 1; i < units.size(); ++i) {
    if (units[i] == r.units.back()) {
      ++r.durations.back();
    } else {
      r.units.push_back(units[i]);
      r.durations.push_back(1);
    }
  }
  return r;
}

std::vector<int> Expand(const ReducedUnits& r) {
  Require(r.units.size() == r.durations.size(),
          "units: unit/duration length mismatch");
  std::vector<int> out;
  for (int i = 0; i < r.size(); ++i) {
    Require(r.durations[i] >= 1, "units: durations must be positive");
    Require(i == 0 || r.units[i] != r.units[i - 1],
            "units: consecutive units must differ in reduced form");
    out.insert(out.end(), r.durations[i], r.units[i]);
  }
  return out;
}

}  // namespace prosoda
