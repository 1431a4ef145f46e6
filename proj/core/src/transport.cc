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

#include "mfgblind/transport.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mfgblind/errors.h"

namespace mfgblind {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroMass = 1e-15;

}  // namespace

TransportPlan solve_transport(std::span<const double> supply,
                              std::span<const double> demand,
                              std::span<const double> cost) {
  const std::size_t ns = supply.size();
  const std::size_t nd = demand.size();
  if (ns == 0 || nd == 0) throw InvalidArgument("solve_transport: empty side");
  if (cost.size() != ns * nd) {
    throw InvalidArgument("solve_transport: cost matrix has wrong size");
  }
  for (double c : cost) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw InvalidArgument("solve_transport: costs must be finite and >= 0");
    }
  }
  for (double s : supply) {
    if (!(s >= 0.0)) throw InvalidArgument("solve_transport: negative supply");
  }
  for (double d : demand) {
    if (!(d >= 0.0)) throw InvalidArgument("solve_transport: negative demand");
  }
  const double total_s = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double total_d = std::accumulate(demand.begin(), demand.end(), 0.0);
  if (std::abs(total_s - total_d) > 1e-9 * std::max(1.0, total_s)) {
    throw InvalidArgument("solve_transport: unbalanced problem");
  }

  TransportPlan plan;
  plan.sources = ns;
  plan.sinks = nd;
  plan.flow.assign(ns * nd, 0.0);

  std::vector<double> left_s(supply.begin(), supply.end());
  std::vector<double> left_d(demand.begin(), demand.end());
  // Node v < ns is source v, node ns + j is sink j.
  const std::size_t nv = ns + nd;
  std::vector<double> potential(nv, 0.0);
  std::vector<double> dist(nv);
  std::vector<std::ptrdiff_t> parent(nv);
  std::vector<char> done(nv);

  const auto pending = [](const std::vector<double>& v) {
    return std::any_of(v.begin(), v.end(),
                       [](double x) { return x > kZeroMass; });
  };

  // Each augmentation exhausts a source, a sink or a reverse arc, so the
  // loop is finite; the cap only guards against round-off cycling.
  const std::size_t max_rounds = 8 * (ns + 1) * (nd + 1);
  for (std::size_t round = 0;
       round < max_rounds && pending(left_s) && pending(left_d); ++round) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < ns; ++i) {
      if (left_s[i] > kZeroMass) dist[i] = 0.0;
    }
    // Dense Dijkstra on reduced costs.
    for (std::size_t it = 0; it < nv; ++it) {
      std::size_t u = nv;
      double best = kInf;
      for (std::size_t v = 0; v < nv; ++v) {
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      }
      if (u == nv) break;
      done[u] = 1;
      if (u < ns) {
        for (std::size_t j = 0; j < nd; ++j) {
          const std::size_t v = ns + j;
          const double reduced =
              std::max(0.0, cost[u * nd + j] + potential[u] - potential[v]);
          if (dist[u] + reduced < dist[v]) {
            dist[v] = dist[u] + reduced;
            parent[v] = static_cast<std::ptrdiff_t>(u);
          }
        }
      } else {
        const std::size_t j = u - ns;
        for (std::size_t i = 0; i < ns; ++i) {
          if (plan.flow[i * nd + j] <= kZeroMass) continue;
          const double reduced =
              std::max(0.0, -cost[i * nd + j] + potential[u] - potential[i]);
          if (dist[u] + reduced < dist[i]) {
            dist[i] = dist[u] + reduced;
            parent[i] = static_cast<std::ptrdiff_t>(u);
          }
        }
      }
    }
    std::size_t target = nv;
    double best = kInf;
    for (std::size_t j = 0; j < nd; ++j) {
      if (left_d[j] > kZeroMass && dist[ns + j] < best) {
        best = dist[ns + j];
        target = ns + j;
      }
    }
    if (target == nv) break;
    for (std::size_t v = 0; v < nv; ++v) potential[v] += std::min(dist[v], best);

    // Bottleneck along the path back to a source.
    double push = left_d[target - ns];
    std::size_t v = target;
    while (parent[v] >= 0) {
      const auto p = static_cast<std::size_t>(parent[v]);
      if (p >= ns) push = std::min(push, plan.flow[v * nd + (p - ns)]);
      v = p;
    }
    push = std::min(push, left_s[v]);
    const std::size_t origin = v;

    v = target;
    while (parent[v] >= 0) {
      const auto p = static_cast<std::size_t>(parent[v]);
      if (p < ns) {
        plan.flow[p * nd + (v - ns)] += push;
      } else {
        plan.flow[v * nd + (p - ns)] -= push;
      }
      v = p;
    }
    left_s[origin] -= push;
    left_d[target - ns] -= push;
  }

  for (std::size_t k = 0; k < plan.flow.size(); ++k) {
    plan.flow[k] = std::max(0.0, plan.flow[k]);
    plan.cost += plan.flow[k] * cost[k];
  }
  return plan;
}

}  // namespace mfgblind
