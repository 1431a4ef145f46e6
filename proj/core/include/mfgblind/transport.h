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

#ifndef MFGBLIND_TRANSPORT_H_
#define MFGBLIND_TRANSPORT_H_

#include <cstddef>
#include <span>
#include <vector>

namespace mfgblind {

struct TransportPlan {
  double cost = 0.0;
  std::size_t sources = 0;
  std::size_t sinks = 0;
  // Row-major sources x sinks.
  std::vector<double> flow;

  double at(std::size_t i, std::size_t j) const { return flow[i * sinks + j]; }
};

// Exact balanced transportation problem by successive shortest paths with
// Dijkstra on reduced costs. `cost` is row-major supply.size() x
// demand.size() and must be nonnegative; supply and demand must have equal
// totals (within 1e-9).
TransportPlan solve_transport(std::span<const double> supply,
                              std::span<const double> demand,
                              std::span<const double> cost);

}  // namespace mfgblind

#endif  // MFGBLIND_TRANSPORT_H_
