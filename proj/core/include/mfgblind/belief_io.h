// Copyright 2026 The mfgblind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MFGBLIND_BELIEF_IO_H_
#define MFGBLIND_BELIEF_IO_H_

// JSON form of a belief:
//   {"weights": [...],
//    "atoms": [{"kind": "dirac", "center": x | [x, y], "bandwidth": w},
//              {"kind": "grid", "values": [...]}]}
// "bandwidth" is optional (default 2h). Serialization always writes "grid"
// atoms so that round trips are exact.

#include <string>
#include <string_view>

#include "mfgblind/belief.h"

namespace mfgblind {

std::string belief_to_json(const Belief& mu, int indent = -1);

// Throws InvalidArgument with a field path on malformed input.
Belief belief_from_json(std::string_view text, const TorusGrid& grid);

}  // namespace mfgblind

#endif  // MFGBLIND_BELIEF_IO_H_
