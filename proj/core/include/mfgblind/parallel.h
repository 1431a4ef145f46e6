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

#ifndef MFGBLIND_PARALLEL_H_
#define MFGBLIND_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace mfgblind {

// Process-wide worker count used by atom-parallel loops (default 1).
void set_thread_count(int threads);
int thread_count();

// Runs body(i) for i in [0, count). Each index is written by exactly one
// worker, so results stored per index are deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mfgblind

#endif  // MFGBLIND_PARALLEL_H_
