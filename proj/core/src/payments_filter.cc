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

#include "mfgblind/payments_filter.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "mfgblind/errors.h"

namespace mfgblind {
namespace {

std::vector<ScalarField> payments(const Belief& mu, const CostModel& cm) {
  std::vector<ScalarField> out;
  out.reserve(mu.size());
  for (const auto& m : mu.atoms()) out.push_back(cm.running(m));
  return out;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::vector<std::size_t>> group_signatures(
    const std::vector<ScalarField>& pay, double tol, Grouping grouping) {
  const std::size_t k = pay.size();
  std::vector<std::size_t> label(k);
  if (grouping == Grouping::kUnionFind) {
    DisjointSets sets(k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (sup_distance(pay[i].values(), pay[j].values()) <= tol) sets.unite(i, j);
      }
    }
    for (std::size_t i = 0; i < k; ++i) label[i] = sets.find(i);
  } else {
    std::map<std::vector<long long>, std::size_t> first_seen;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<long long> key;
      key.reserve(pay[i].size());
      for (double v : pay[i].values()) key.push_back(std::llround(v / tol));
      label[i] = first_seen.emplace(std::move(key), i).first->second;
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < k; ++i) {
    auto [it, fresh] = slot.emplace(label[i], groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

Belief restrict(const Belief& mu, const std::vector<std::size_t>& kept) {
  if (kept.size() == mu.size()) return mu;
  std::vector<double> w;
  std::vector<Density> atoms;
  for (std::size_t i : kept) {
    w.push_back(mu.weight(i));
    atoms.push_back(mu.atom(i));
  }
  if (kept.size() == 1) return Belief::dirac(std::move(atoms.front()));
  return Belief::normalized(std::move(w), std::move(atoms));
}

FilterResult filter_impl(const Belief& mu, const std::vector<ScalarField>& pay,
                         const PaymentSignature& observed, const FilterConfig& fc) {
  std::vector<bool> seed(mu.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (sup_distance(pay[i].values(), observed.field.values()) <= fc.tolerance) {
      seed[i] = true;
      any = true;
    }
  }
  if (!any) {
    throw InconsistentObservation(
        "filter_step: no atom of the belief matches the observed payment");
  }
  std::vector<std::size_t> kept;
  for (const auto& group : group_signatures(pay, fc.tolerance, fc.grouping)) {
    const bool hit = std::any_of(group.begin(), group.end(),
                                 [&](std::size_t i) { return seed[i]; });
    if (hit) kept.insert(kept.end(), group.begin(), group.end());
  }
  std::sort(kept.begin(), kept.end());
  return FilterResult{restrict(mu, kept), kept};
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

PaymentSignature::PaymentSignature(ScalarField g) : field(std::move(g)) {
  for (double v : field.values()) {
    if (!std::isfinite(v)) throw InvalidArgument("PaymentSignature: non-finite value");
  }
}

Grouping grouping_from_name(const std::string& name) {
  if (name == "union_find") return Grouping::kUnionFind;
  if (name == "exact") return Grouping::kExact;
  throw InvalidArgument("unknown grouping '" + name + "'");
}

std::string grouping_name(Grouping grouping) {
  return grouping == Grouping::kUnionFind ? "union_find" : "exact";
}

void FilterConfig::validate(double solver_dt) const {
  if (!(tolerance > 0.0)) throw InvalidArgument("filter.tolerance must be > 0");
  if (!(observation_dt >= 0.0)) {
    throw InvalidArgument("filter.observation_dt must be >= 0");
  }
  if (observation_dt > 0.0 && observation_dt < solver_dt * (1.0 - 1e-12)) {
    throw InvalidArgument("filter.observation_dt must be >= the solver time step");
  }
}

double payment_distance(const CostModel& cm, const Density& a, const Density& b) {
  return sup_distance(cm.running(a).values(), cm.running(b).values());
}

bool in_consistency_set(const Belief& mu, const CostModel& cm, double tol) {
  if (mu.size() == 1 || cm.independent_of_density()) return true;
  const auto pay = payments(mu, cm);
  for (std::size_t i = 0; i < pay.size(); ++i) {
    for (std::size_t j = i + 1; j < pay.size(); ++j) {
      if (sup_distance(pay[i].values(), pay[j].values()) > tol) return false;
    }
  }
  return true;
}

std::vector<std::vector<std::size_t>> partition_by_payment(const Belief& mu,
                                                          const CostModel& cm,
                                                          double tol,
                                                          Grouping grouping) {
  if (!(tol > 0.0)) throw InvalidArgument("partition_by_payment: tol must be > 0");
  return group_signatures(payments(mu, cm), tol, grouping);
}

FilterResult filter_with_indices(const Belief& mu, const PaymentSignature& observed,
                                 const CostModel& cm, const FilterConfig& fc) {
  if (!(fc.tolerance > 0.0)) throw InvalidArgument("filter.tolerance must be > 0");
  if (!(observed.field.grid() == mu.grid())) {
    throw GridMismatch("filter_step: observation grid mismatch");
  }
  return filter_impl(mu, payments(mu, cm), observed, fc);
}

Belief filter_step(const Belief& mu, const PaymentSignature& observed,
                   const CostModel& cm, const FilterConfig& fc) {
  return filter_with_indices(mu, observed, cm, fc).belief;
}

double tower_check(const Belief& mu, const DriftField& drift,
                   DiffusionCoefficient sigma, const TimeGrid& tg, double t,
                   const CylinderFunctional& phi, const CostModel& cm,
                   const FilterConfig& fc) {
  const double pos = (t - tg.origin) / tg.dt();
  const long node = std::lround(pos);
  if (node < 0 || node > tg.steps || std::abs(pos - static_cast<double>(node)) > 1e-9) {
    throw InvalidArgument("tower_check: t must be a time node");
  }
  const Belief pushed =
      push_forward(mu, drift, sigma, tg).at(static_cast<std::size_t>(node));
  const auto pay = payments(pushed, cm);
  double conditioned = 0.0;
  for (std::size_t i = 0; i < pushed.size(); ++i) {
    const FilterResult r = filter_impl(pushed, pay, PaymentSignature(pay[i]), fc);
    conditioned += pushed.weight(i) * phi.value(t, r.belief);
  }
  return std::abs(conditioned - phi.value(t, pushed));
}

std::vector<int> observation_nodes(const TimeGrid& tg, double observation_dt) {
  std::vector<int> nodes{0};
  if (observation_dt <= 0.0) {
    for (int k = 1; k <= tg.steps; ++k) nodes.push_back(k);
    return nodes;
  }
  const double ratio = observation_dt / tg.dt();
  for (int j = 1;; ++j) {
    const auto k = static_cast<int>(std::llround(static_cast<double>(j) * ratio));
    if (k > tg.steps) break;
    if (k > nodes.back()) nodes.push_back(k);
  }
  return nodes;
}

TimeGrid remaining_grid(const TimeGrid& tg, int k) {
  if (k < 0 || k >= tg.steps) throw InvalidArgument("remaining_grid: node out of range");
  const int steps = tg.steps - k;
  return make_time_grid(tg.dt() * static_cast<double>(steps), steps, tg.time(k));
}

FilterTrace simulate_observed(const Belief& mu0, int true_atom, const CostModel& cm,
                              const Hamiltonian& hamiltonian,
                              DiffusionCoefficient sigma, const TimeGrid& tg,
                              const FilterConfig& fc, const SolverConfig& cfg) {
  fc.validate(tg.dt());
  cfg.validate();
  if (true_atom < 0 || static_cast<std::size_t>(true_atom) >= mu0.size()) {
    throw InvalidArgument("simulate_observed: true_atom out of range");
  }
  if (!in_consistency_set(mu0, cm, fc.tolerance)) {
    throw InvalidArgument(
        "simulate_observed: initial belief has inconsistent payments");
  }
  const TorusGrid& grid = mu0.grid();
  FilterTrace trace;
  trace.true_atom = true_atom;
  trace.initial_atoms = mu0.size();
  trace.realized_drift.time_grid = tg;
  trace.true_path.time_grid = tg;

  std::vector<int> ids(mu0.size());
  std::iota(ids.begin(), ids.end(), 0);
  Belief belief = mu0;
  const std::vector<int> obs = observation_nodes(tg, fc.observation_dt);

  DriftField plan;
  int plan_origin = 0;
  for (std::size_t j = 0; j < obs.size(); ++j) {
    const int k = obs[j];
    if (j > 0) {
      // Play the current plan from the previous observation up to node k.
      const int k0 = obs[j - 1];
      const TimeGrid seg = make_time_grid(tg.dt() * (k - k0), k - k0, tg.time(k0));
      DriftField slices{seg, {}};
      for (int s = k0; s <= k; ++s) {
        slices.slices.push_back(plan.slices.at(static_cast<std::size_t>(s - plan_origin)));
      }
      for (int s = k0; s < k; ++s) trace.realized_drift.slices.push_back(slices.slices[s - k0]);
      const BeliefPath moved = push_forward(belief, slices, sigma, seg);
      std::vector<Density> atoms;
      for (const auto& path : moved.atoms) atoms.push_back(path.slices.back());
      const auto pos = std::find(ids.begin(), ids.end(), true_atom) - ids.begin();
      const auto& true_slices = moved.atoms[static_cast<std::size_t>(pos)].slices;
      trace.true_path.slices.insert(trace.true_path.slices.end(), true_slices.begin() + 1,
                                    true_slices.end());
      belief = Belief(std::vector<double>(belief.weights().begin(), belief.weights().end()),
                      std::move(atoms));
    } else {
      trace.true_path.slices.push_back(
          belief.atom(static_cast<std::size_t>(true_atom)));
    }

    // Observe the true population's payment and condition on it.
    const auto pos = static_cast<std::size_t>(
        std::find(ids.begin(), ids.end(), true_atom) - ids.begin());
    const auto pay = payments(belief, cm);
    PaymentSignature observed(pay[pos]);
    double gap = 0.0;
    for (const auto& p : pay) {
      gap = std::max(gap, sup_distance(p.values(), observed.field.values()));
    }
    const FilterResult filtered = filter_impl(belief, pay, observed, fc);
    std::vector<int> kept_ids;
    for (std::size_t i : filtered.kept) kept_ids.push_back(ids[i]);
    if (std::find(kept_ids.begin(), kept_ids.end(), true_atom) == kept_ids.end()) {
      throw InconsistentObservation("simulate_observed: true atom was eliminated");
    }
    if (kept_ids.size() < ids.size()) {
      EliminationEvent ev;
      ev.time = tg.time(k);
      ev.node = k;
      for (int id : ids) {
        if (std::find(kept_ids.begin(), kept_ids.end(), id) == kept_ids.end()) {
          ev.eliminated.push_back(id);
        }
      }
      trace.events.push_back(std::move(ev));
    }
    belief = filtered.belief;
    ids = std::move(kept_ids);
    trace.times.push_back(tg.time(k));
    trace.nodes.push_back(k);
    trace.beliefs.push_back(belief);
    trace.atom_ids.push_back(ids);
    trace.observations.push_back(std::move(observed));
    trace.payment_sup_gap.push_back(gap);

    if (k == tg.steps) break;
    // Re-plan on [t_k, T], warm-started from what is left of the plan.
    const TimeGrid rest = remaining_grid(tg, k);
    std::optional<DriftField> warm;
    if (j > 0) {
      DriftField w{rest, {}};
      w.slices.assign(plan.slices.begin() + (k - plan_origin), plan.slices.end());
      warm = std::move(w);
    }
    EquilibriumSolution sol = solve_blind(belief, cm, hamiltonian, sigma, rest, cfg, warm);
    trace.solver_iterations.push_back(sol.diagnostics.iterations);
    trace.segment_converged.push_back(sol.diagnostics.converged);
    trace.converged = trace.converged && sol.diagnostics.converged;
    plan = std::move(sol.drift);
    plan_origin = k;
  }
  // The last observation may fall short of T: play the plan to the end.
  const int last = trace.nodes.back();
  if (last < tg.steps) {
    const TimeGrid seg = remaining_grid(tg, last);
    DriftField slices{seg, {}};
    slices.slices.assign(plan.slices.begin() + (last - plan_origin), plan.slices.end());
    for (int s = 0; s < seg.steps; ++s) trace.realized_drift.slices.push_back(slices.slices[s]);
    const auto pos = static_cast<std::size_t>(
        std::find(ids.begin(), ids.end(), true_atom) - ids.begin());
    const DensityPath tail = solve_fp_forward(belief.atom(pos), slices, sigma, seg);
    trace.true_path.slices.insert(trace.true_path.slices.end(), tail.slices.begin() + 1,
                                  tail.slices.end());
  }
  trace.realized_drift.slices.push_back(trace.realized_drift.slices.empty()
                                            ? VectorField(grid)
                                            : trace.realized_drift.slices.back());
  return trace;
}

std::string trace_to_json(const FilterTrace& trace, int indent) {
  nlohmann::json out;
  out["heuristic"] = true;
  out["true_atom"] = trace.true_atom;
  out["initial_atoms"] = trace.initial_atoms;
  out["converged"] = trace.converged;
  out["times"] = trace.times;
  out["nodes"] = trace.nodes;
  nlohmann::json weights = nlohmann::json::array();
  for (std::size_t k = 0; k < trace.beliefs.size(); ++k) {
    std::vector<double> w(trace.initial_atoms, 0.0);
    for (std::size_t i = 0; i < trace.atom_ids[k].size(); ++i) {
      w[static_cast<std::size_t>(trace.atom_ids[k][i])] = trace.beliefs[k].weight(i);
    }
    weights.push_back(std::move(w));
  }
  out["weights"] = std::move(weights);
  out["payment_sup_gap"] = trace.payment_sup_gap;
  nlohmann::json events = nlohmann::json::array();
  for (const auto& ev : trace.events) {
    events.push_back({{"time", ev.time}, {"node", ev.node}, {"eliminated", ev.eliminated}});
  }
  out["events"] = std::move(events);
  out["solver_iterations"] = trace.solver_iterations;
  out["segment_converged"] = trace.segment_converged;
  return out.dump(indent);
}

std::string trace_to_csv(const FilterTrace& trace) {
  std::ostringstream out;
  out << "t,n_atoms";
  for (std::size_t i = 0; i < trace.initial_atoms; ++i) out << ",weight_" << i;
  out << ",payment_sup_gap\n";
  for (std::size_t k = 0; k < trace.beliefs.size(); ++k) {
    std::vector<double> w(trace.initial_atoms, 0.0);
    for (std::size_t i = 0; i < trace.atom_ids[k].size(); ++i) {
      w[static_cast<std::size_t>(trace.atom_ids[k][i])] = trace.beliefs[k].weight(i);
    }
    out << fmt17(trace.times[k]) << ',' << trace.beliefs[k].size();
    for (double x : w) out << ',' << fmt17(x);
    out << ',' << fmt17(trace.payment_sup_gap[k]) << '\n';
  }
  return out.str();
}

ScenarioBundle illustrative_scenario(double eps, double p1, double c, int n,
                                     int time_steps) {
  if (!(eps > 0.0 && eps < 0.25)) {
    throw InvalidArgument("scenario.eps must lie in (0, 1/4)");
  }
  if (!(p1 > 0.0 && p1 < 1.0)) throw InvalidArgument("scenario.p1 must lie in (0, 1)");
  if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("scenario.c must lie in (0, 1)");
  if (time_steps < 1) throw InvalidArgument("scenario.steps must be >= 1");
  const TorusGrid grid = build_grid(1, n);
  constexpr double kHorizon = 2.0;
  Belief mu0({p1, 1.0 - p1}, {mollified_dirac(grid, {0.0, 0.0}, grid.h),
                              mollified_dirac(grid, {eps, 0.0}, grid.h)});
  return ScenarioBundle{std::move(mu0),
                        CostModel::illustrative(grid, c),
                        Hamiltonian::abs(),
                        make_time_grid(kHorizon, time_steps),
                        0.0,
                        0.25 - eps,
                        0.3125 - eps};
}

}  // namespace mfgblind
