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

#ifndef MFGBLIND_TOOLS_RUN_CONFIG_H_
#define MFGBLIND_TOOLS_RUN_CONFIG_H_

// Strict JSON run configuration for the command-line tool. Every field is
// validated before any computation; unknown keys are rejected with the
// offending path.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfgblind/blind_solver.h"
#include "mfgblind/cost_model.h"
#include "mfgblind/hamiltonian.h"
#include "mfgblind/monotonicity.h"
#include "mfgblind/payments_filter.h"

namespace mfgblind::cli {

using nlohmann::json;

// offset + amplitude * fn(2 pi k (x + y)) for fn in {cos, sin};
// fn "x" is the first coordinate, "profile" the illustrative well, "zero"
// and "const" ignore the amplitude.
struct FieldSpec {
  std::string fn = "zero";
  int k = 1;
  double amplitude = 1.0;
  double offset = 0.0;
  ScalarField build(const TorusGrid& grid) const;
};

struct CostSpec {
  std::string kind = "zero";
  FieldSpec base;
  FieldSpec phi;
  FieldSpec running;
  std::optional<FieldSpec> terminal;
  std::string g = "sqrt";
  double c = 0.5;
  CostModel build(const TorusGrid& grid) const;
};

struct OutputSpec {
  std::string directory = "out";
  bool csv = true;
  int time_stride = 1;
};

struct CertifySpec {
  int trials = 1000;
  int max_atoms = 8;
  bool witness_scan = true;
  int scan_points = 41;
};

struct WeakSpec {
  CylinderFunctional phi(const TorusGrid& grid, double horizon) const;
  FieldSpec inner;
  std::string outer = "linear_decay";
  std::vector<FieldSpec> drift;
  int levels = 3;
  bool perturb = false;
  double perturb_time = 0.5;
  double perturb_shift = 0.2;
};

struct RunConfig {
  std::string command;
  int dim = 1;
  int n = 64;
  double horizon = 1.0;
  int steps = 64;
  double sigma = 0.0;
  std::string hamiltonian = "abs";
  double delta = 0.1;
  double cap = 1.0;
  CostSpec cost;
  json belief;  // validated against the grid at build time
  SolverConfig solver;
  FilterConfig filter;
  int true_atom = 0;
  std::uint64_t seed = 1;
  CertifySpec certify;
  WeakSpec weak;
  OutputSpec output;
  // Every key with defaults filled in, echoed into manifest.json.
  json resolved;

  TorusGrid grid() const { return build_grid(dim, n); }
  TimeGrid time_grid() const { return make_time_grid(horizon, steps); }
  Hamiltonian build_hamiltonian() const {
    return Hamiltonian::from_name(hamiltonian, delta, cap);
  }
  Belief build_belief(const TorusGrid& grid) const;
};

// Parses and validates; throws InvalidArgument with a field path.
RunConfig parse_run_config(const std::string& command, const json& root);
RunConfig load_run_config(const std::string& command, const std::string& path);

}  // namespace mfgblind::cli

#endif  // MFGBLIND_TOOLS_RUN_CONFIG_H_
