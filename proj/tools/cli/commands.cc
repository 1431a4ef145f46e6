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

#include "cli/commands.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "cli/artifacts.h"
#include "cli/run_config.h"
#include "mfgblind/belief_io.h"
#include "mfgblind/errors.h"
#include "mfgblind/parallel.h"

namespace mfgblind::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

struct Context {
  RunConfig cfg;
  int threads = 1;
  std::ostream& out;
};

std::vector<int> strided_nodes(const TimeGrid& tg, int stride) {
  std::vector<int> nodes;
  for (int k = 0; k <= tg.steps; k += stride) nodes.push_back(k);
  if (nodes.back() != tg.steps) nodes.push_back(tg.steps);
  return nodes;
}

std::string space_header(const TorusGrid& grid, const char* value) {
  return grid.dim == 1 ? fmt::format("t,x,{}\n", value) : fmt::format("t,x,y,{}\n", value);
}

void append_row(std::string& csv, double t, const TorusGrid& grid, std::size_t node,
                double v) {
  const Point p = grid.position(node);
  csv += fmt17(t);
  csv += ',';
  csv += fmt17(p[0]);
  if (grid.dim == 2) {
    csv += ',';
    csv += fmt17(p[1]);
  }
  csv += ',';
  csv += fmt17(v);
  csv += '\n';
}

// One row per (strided time node, grid node).
template <typename Slice>
std::string field_csv(const std::vector<Slice>& slices, const TimeGrid& tg, int stride,
                      const char* value) {
  const TorusGrid& grid = slices.front().grid();
  std::string csv = space_header(grid, value);
  for (int k : strided_nodes(tg, stride)) {
    const auto& s = slices[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < s.size(); ++i) append_row(csv, tg.time(k), grid, i, s[i]);
  }
  return csv;
}

std::string mixture_csv(const BeliefPath& path, int stride) {
  const TorusGrid& grid = path.atoms.front().slices.front().grid();
  std::string csv = space_header(grid, "m");
  for (int k : strided_nodes(path.time_grid, stride)) {
    const auto kk = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double v = 0.0;
      for (std::size_t a = 0; a < path.atoms.size(); ++a) {
        v += path.weights[a] * path.atoms[a].slices[kk][i];
      }
      append_row(csv, path.time_grid.time(k), grid, i, v);
    }
  }
  return csv;
}

// iter, drift_gap, value_change; wall time goes to a separate artifact.
std::string history_csv(const SolverDiagnostics& d) {
  std::string csv = "iter,drift_gap,value_change\n";
  for (const auto& r : d.history) {
    csv += fmt::format("{},{},{}\n", r.iter, fmt17(r.drift_gap), fmt17(r.value_change));
  }
  return csv;
}

std::string timing_csv(const SolverDiagnostics& d) {
  std::string csv = "iter,wall_time\n";
  for (const auto& r : d.history) csv += fmt::format("{},{}\n", r.iter, fmt17(r.wall_time));
  return csv;
}

json manifest_header(const Context& ctx, int exit_code) {
  json resolved = ctx.cfg.resolved;
  resolved["seed"] = ctx.cfg.seed;
  resolved["output"]["directory"] = ctx.cfg.output.directory;
  return {{"tool", "mfgblind"},
          {"version", kVersion},
          {"command", ctx.cfg.command},
          {"seed", ctx.cfg.seed},
          {"threads", ctx.threads},
          {"exit_code", exit_code},
          {"config", resolved}};
}

json diagnostics_json(const SolverDiagnostics& d) {
  return {{"converged", d.converged},
          {"iterations", d.iterations},
          {"gap", d.final_gap},
          {"hjb_residual", d.hjb_residual},
          {"mass_error", d.mass_error}};
}

int finish(ArtifactWriter& w, const Context& ctx, int code) {
  w.write_manifest(manifest_header(ctx, code));
  return code;
}

void write_solution(ArtifactWriter& w, const Context& ctx,
                    const EquilibriumSolution& sol) {
  const auto& tg = sol.value.time_grid;
  const int stride = ctx.cfg.output.time_stride;
  w.write("history.csv", history_csv(sol.diagnostics));
  w.write("timing.csv", timing_csv(sol.diagnostics), false);
  if (!ctx.cfg.output.csv) return;
  w.write("u.csv", field_csv(sol.value.slices, tg, stride, "u"));
  w.write("m.csv", mixture_csv(sol.belief, stride));
}

int report_convergence(const Context& ctx, const SolverDiagnostics& d) {
  ctx.out << fmt::format("{}: iterations={} gap={} converged={}\n", ctx.cfg.command,
                         d.iterations, fmt17(d.final_gap), d.converged ? "yes" : "no");
  return d.converged ? kExitOk : kExitNonConvergence;
}

int cmd_solve_complete(const Context& ctx, ArtifactWriter& w) {
  const RunConfig& c = ctx.cfg;
  const TorusGrid grid = c.grid();
  const Belief mu = c.build_belief(grid);
  if (mu.size() != 1) {
    throw InvalidArgument("config.belief: solve-complete needs exactly one atom");
  }
  const auto sol =
      solve_complete_info(mu.atom(0), c.cost.build(grid), c.build_hamiltonian(),
                          DiffusionCoefficient(c.sigma), c.time_grid(), c.solver);
  write_solution(w, ctx, sol);
  w.write("summary.json", diagnostics_json(sol.diagnostics).dump(2) + "\n");
  return finish(w, ctx, report_convergence(ctx, sol.diagnostics));
}

int cmd_solve_blind(const Context& ctx, ArtifactWriter& w) {
  const RunConfig& c = ctx.cfg;
  const TorusGrid grid = c.grid();
  const Belief mu = c.build_belief(grid);
  const auto sol = solve_blind(mu, c.cost.build(grid), c.build_hamiltonian(),
                               DiffusionCoefficient(c.sigma), c.time_grid(), c.solver);
  write_solution(w, ctx, sol);
  const auto& path = sol.belief;
  const int stride = c.output.time_stride;
  if (c.output.csv) {
    for (std::size_t a = 0; a < path.atoms.size(); ++a) {
      w.write(fmt::format("m_{}.csv", a),
              field_csv(path.atoms[a].slices, path.time_grid, stride, "m"));
    }
  }
  json bp;
  bp["weights"] = path.weights;
  bp["times"] = json::array();
  bp["beliefs"] = json::array();
  for (int k : strided_nodes(path.time_grid, stride)) {
    bp["times"].push_back(path.time_grid.time(k));
    bp["beliefs"].push_back(json::parse(belief_to_json(path.at(static_cast<std::size_t>(k)))));
  }
  w.write("belief_path.json", bp.dump() + "\n");
  json summary = diagnostics_json(sol.diagnostics);
  summary["atoms"] = mu.size();
  w.write("summary.json", summary.dump(2) + "\n");
  return finish(w, ctx, report_convergence(ctx, sol.diagnostics));
}

int cmd_simulate_observed(const Context& ctx, ArtifactWriter& w) {
  const RunConfig& c = ctx.cfg;
  const TorusGrid grid = c.grid();
  const Belief mu = c.build_belief(grid);
  const TimeGrid tg = c.time_grid();
  const auto trace = simulate_observed(mu, c.true_atom, c.cost.build(grid),
                                       c.build_hamiltonian(),
                                       DiffusionCoefficient(c.sigma), tg, c.filter, c.solver);
  w.write("trace.json", trace_to_json(trace) + "\n");
  if (c.output.csv) {
    w.write("trace.csv", trace_to_csv(trace));
    w.write("m_true.csv", field_csv(trace.true_path.slices, tg, c.output.time_stride, "m"));
  }
  json events = json::array();
  for (const auto& ev : trace.events) events.push_back(ev.time);
  const bool survived = !trace.atom_ids.empty() &&
                        std::find(trace.atom_ids.back().begin(), trace.atom_ids.back().end(),
                                  c.true_atom) != trace.atom_ids.back().end();
  json summary = {{"heuristic", true},
                  {"events", trace.events.size()},
                  {"event_times", events},
                  {"true_atom", c.true_atom},
                  {"true_atom_survived", survived},
                  {"final_atoms", trace.atom_ids.empty() ? 0 : trace.atom_ids.back().size()},
                  {"observations", trace.times.size()},
                  {"converged", trace.converged}};
  w.write("summary.json", summary.dump(2) + "\n");
  ctx.out << fmt::format("simulate-observed: observations={} events={}", trace.times.size(),
                         trace.events.size());
  for (const auto& ev : trace.events) ctx.out << fmt::format(" t={}", fmt17(ev.time));
  ctx.out << fmt::format(" converged={}\n", trace.converged ? "yes" : "no");
  return finish(w, ctx, trace.converged ? kExitOk : kExitNonConvergence);
}

int cmd_certify_monotone(const Context& ctx, ArtifactWriter& w) {
  const RunConfig& c = ctx.cfg;
  const TorusGrid grid = c.grid();
  CertifyOptions opts;
  opts.witness_scan = c.certify.witness_scan;
  opts.scan_points = c.certify.scan_points;
  opts.max_atoms = c.certify.max_atoms;
  const auto report = certify_blind_monotone(c.cost.build(grid), c.seed, c.certify.trials, opts);
  w.write("report.json", pairing_report_json(report) + "\n");
  const bool violated = report.min_over_trials < -1e-10;
  ctx.out << fmt::format("certify-monotone: model={} trials={} min_pairing={} {}\n",
                         report.model, report.trials, fmt17(report.min_over_trials),
                         violated ? "negative witness found" : "no violation found");
  return finish(w, ctx, kExitOk);
}

struct WeakLevel {
  int n = 0;
  int steps = 0;
  double dt = 0.0;
  double residual = 0.0;
  double perturbed = std::nan("");
};

// Mass drifts towards the last atom from `from` on.
std::vector<Belief> perturbed_slices(const BeliefPath& path, int from, double shift) {
  std::vector<Belief> out = path.slices();
  const std::size_t last = path.weights.size() - 1;
  for (std::size_t k = static_cast<std::size_t>(from); k < out.size(); ++k) {
    std::vector<double> w(path.weights.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = (1.0 - shift) * path.weights[i] + (i == last ? shift : 0.0);
    }
    out[k] = Belief::normalized(std::move(w), out[k].atoms());
  }
  return out;
}

int cmd_validate_weak(const Context& ctx, ArtifactWriter& w) {
  const RunConfig& c = ctx.cfg;
  const WeakSpec& spec = c.weak;
  const DiffusionCoefficient sigma(c.sigma);
  // Validate every level before any compute.
  std::vector<TorusGrid> grids;
  std::vector<Belief> beliefs;
  for (int level = 0; level < spec.levels; ++level) {
    const int n = c.n << level;
    if (n > 1 << 14) throw InvalidArgument("config.weak.levels: grid too fine");
    grids.push_back(build_grid(c.dim, n));
    beliefs.push_back(c.build_belief(grids.back()));
  }
  if (spec.perturb && beliefs.front().size() < 2) {
    throw InvalidArgument("config.weak.perturb: needs a belief with at least two atoms");
  }
  std::vector<WeakLevel> levels;
  for (int level = 0; level < spec.levels; ++level) {
    const TorusGrid& grid = grids[static_cast<std::size_t>(level)];
    const int steps = c.steps << (2 * level);
    const TimeGrid tg = make_time_grid(c.horizon, steps);
    std::vector<double> comps;
    for (const auto& f : spec.drift) {
      const ScalarField s = f.build(grid);
      comps.insert(comps.end(), s.values().begin(), s.values().end());
    }
    const DriftField drift = constant_drift(VectorField(grid, std::move(comps)), tg);
    const auto phi = spec.phi(grid, c.horizon);
    const BeliefPath path =
        push_forward(beliefs[static_cast<std::size_t>(level)], drift, sigma, tg);
    WeakLevel row{grid.n, steps, tg.dt(), weak_solution_residual(path, drift, sigma, phi)};
    if (spec.perturb) {
      const int from = static_cast<int>(std::lround(spec.perturb_time * steps));
      const auto bad = perturbed_slices(path, from, spec.perturb_shift);
      row.perturbed = weak_solution_residual(bad, tg, drift, sigma, phi);
    }
    levels.push_back(row);
  }
  json report;
  report["levels"] = json::array();
  std::string csv = "level,n,steps,dt,residual,perturbed_residual\n";
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const auto& r = levels[l];
    json row = {{"n", r.n}, {"steps", r.steps}, {"dt", r.dt}, {"residual", r.residual}};
    if (spec.perturb) row["perturbed_residual"] = r.perturbed;
    report["levels"].push_back(row);
    csv += fmt::format("{},{},{},{},{},{}\n", l, r.n, r.steps, fmt17(r.dt), fmt17(r.residual),
                       spec.perturb ? fmt17(r.perturbed) : std::string());
  }
  // Order in dt: dt shrinks by 4 per level.
  json orders = json::array();
  double min_order = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    const double q = std::log(levels[l].residual / levels[l + 1].residual) / std::log(4.0);
    orders.push_back(q);
    min_order = std::min(min_order, q);
  }
  report["observed_order"] = orders;
  report["min_order"] = min_order;
  std::string verdict;
  if (spec.perturb) {
    const double ratio = levels.back().perturbed / levels.back().residual;
    const bool detected = ratio >= 10.0;
    report["perturbed_ratio"] = ratio;
    report["violation_detected"] = detected;
    verdict = detected ? " violation detected" : " no violation detected";
  }
  w.write("report.json", report.dump(2) + "\n");
  if (c.output.csv) w.write("residuals.csv", csv);
  ctx.out << fmt::format("validate-weak: finest_residual={} min_order={}{}\n",
                         fmt17(levels.back().residual), fmt17(min_order), verdict);
  return finish(w, ctx, kExitOk);
}

int dispatch(const Context& ctx) {
  ArtifactWriter w(ctx.cfg.output.directory);
  const std::string& cmd = ctx.cfg.command;
  if (cmd == "solve-complete") return cmd_solve_complete(ctx, w);
  if (cmd == "solve-blind") return cmd_solve_blind(ctx, w);
  if (cmd == "simulate-observed") return cmd_simulate_observed(ctx, w);
  if (cmd == "certify-monotone") return cmd_certify_monotone(ctx, w);
  return cmd_validate_weak(ctx, w);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"mfgblind: blind mean field game solver and filter"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve-complete", "Complete-information equilibrium for one density"},
      {"solve-blind", "Blind equilibrium for a finite belief"},
      {"simulate-observed", "Payment-observing filter with re-planning"},
      {"certify-monotone", "Randomized monotonicity certificate for the lifted cost"},
      {"validate-weak", "Weak-formulation residual on a refinement ladder"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "Random seed (overrides config seed)");
    sub->add_option("--threads", threads, "Worker threads")
        ->check(CLI::Range(1, 1024));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();

  std::optional<Context> ctx;
  try {
    ctx.emplace(Context{load_run_config(command, config_path), threads, out});
    if (out_dir) ctx->cfg.output.directory = *out_dir;
    if (seed) ctx->cfg.seed = *seed;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  set_thread_count(threads);
  try {
    return dispatch(*ctx);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InconsistentObservation& e) {
    err << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mfgblind::cli
