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

#include "mfgblind/cost_model.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "mfgblind/errors.h"

namespace mfgblind {
namespace {

double smoothstep5(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double linear_mean(const Density& m) {
  double acc = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    acc += static_cast<double>(k) * m.grid().h * m[k];
  }
  return acc * m.grid().h;
}

}  // namespace

NamedFunction named_function(const std::string& name) {
  if (name == "sqrt") {
    return {name, [](double s) { return std::sqrt(std::max(s, 0.0)); }};
  }
  if (name == "identity") return {name, [](double s) { return s; }};
  if (name == "square") return {name, [](double s) { return s * s; }};
  if (name == "cube") return {name, [](double s) { return s * s * s; }};
  if (name == "tanh") return {name, [](double s) { return std::tanh(s); }};
  if (name.rfind("affine:", 0) == 0) {
    const std::string args = name.substr(7);
    const auto comma = args.find(',');
    if (comma == std::string::npos) {
      throw InvalidArgument("affine function needs 'affine:a,b'");
    }
    double a = 0.0;
    double b = 0.0;
    try {
      a = std::stod(args.substr(0, comma));
      b = std::stod(args.substr(comma + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("affine function coefficients are not numbers");
    }
    return {name, [a, b](double s) { return a + b * s; }};
  }
  throw InvalidArgument("unknown function '" + name + "'");
}

double illustrative_profile(double x) {
  x -= std::floor(x);
  constexpr double kRamp = 1.0 / 16.0;
  if (x <= 0.25 || x >= 0.4375) return 0.0;
  if (x < 0.3125) return -2.0 * smoothstep5((x - 0.25) / kRamp);
  if (x <= 0.375) return -2.0;
  return -2.0 * smoothstep5((0.4375 - x) / kRamp);
}

CostModel CostModel::constant(ScalarField running,
                              std::optional<ScalarField> terminal) {
  CostModel cm;
  cm.kind_ = CostKind::kConstant;
  cm.name_ = "constant";
  cm.grid_ = running.grid();
  ScalarField term = terminal.value_or(ScalarField(cm.grid_));
  if (!(term.grid() == cm.grid_)) throw GridMismatch("constant cost: grid mismatch");
  cm.running_ = [f = std::move(running)](const Density&) { return f; };
  cm.terminal_ = [t = std::move(term)](const Density&) { return t; };
  cm.running_independent_ = true;
  return cm;
}

CostModel CostModel::product_form(ScalarField base, ScalarField phi) {
  if (!(base.grid() == phi.grid())) {
    throw GridMismatch("product_form: base and phi grids differ");
  }
  CostModel cm;
  cm.kind_ = CostKind::kProductForm;
  cm.name_ = "product_form";
  cm.grid_ = phi.grid();
  cm.profile_ = phi;
  cm.running_ = [base = std::move(base), phi = std::move(phi)](const Density& m) {
    const double coupling = integrate(phi, m);
    const auto b = base.values();
    const auto p = phi.values();
    std::vector<double> out(b.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = b[k] + p[k] * coupling;
    return ScalarField(m.grid(), std::move(out));
  };
  cm.terminal_ = [grid = cm.grid_](const Density&) { return ScalarField(grid); };
  return cm;
}

CostModel CostModel::moment_form(const TorusGrid& grid, NamedFunction g) {
  if (grid.dim != 1) throw InvalidArgument("moment_form: requires a 1-D grid");
  CostModel cm;
  cm.kind_ = CostKind::kMomentForm;
  cm.name_ = "moment_form";
  cm.grid_ = grid;
  cm.g_ = g;
  cm.running_ = [g = std::move(g)](const Density& m) {
    const double level = g(linear_mean(m));
    std::vector<double> out(m.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = static_cast<double>(k) * m.grid().h * level;
    }
    return ScalarField(m.grid(), std::move(out));
  };
  cm.terminal_ = [grid](const Density&) { return ScalarField(grid); };
  return cm;
}

CostModel CostModel::illustrative(const TorusGrid& grid, double c) {
  if (grid.dim != 1) throw InvalidArgument("illustrative cost: requires 1-D");
  if (!(c > 0.0 && c < 1.0)) {
    throw InvalidArgument("illustrative cost: c must lie in (0, 1)");
  }
  CostModel cm;
  cm.kind_ = CostKind::kIllustrative;
  cm.name_ = "illustrative";
  cm.grid_ = grid;
  cm.strength_ = c;
  ScalarField f0 = ScalarField::from_function(
      grid, [](const Point& x) { return illustrative_profile(x[0]); });
  cm.profile_ = f0;
  cm.running_ = [f0 = std::move(f0), c](const Density& m) {
    const double factor = 1.0 + c * integrate(f0, m);
    const auto p = f0.values();
    std::vector<double> out(p.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = p[k] * factor;
    return ScalarField(m.grid(), std::move(out));
  };
  cm.terminal_ = [grid](const Density&) { return ScalarField(grid); };
  return cm;
}

CostModel CostModel::custom(std::string name, const TorusGrid& grid, Map running,
                            bool independent_of_density) {
  CostModel cm;
  cm.kind_ = CostKind::kCustom;
  cm.name_ = std::move(name);
  cm.grid_ = grid;
  cm.running_ = std::move(running);
  cm.terminal_ = [grid](const Density&) { return ScalarField(grid); };
  cm.running_independent_ = independent_of_density;
  return cm;
}

CostModel CostModel::with_terminal(Map terminal, bool terminal_independent) const {
  CostModel cm = *this;
  cm.terminal_ = std::move(terminal);
  cm.terminal_independent_ = terminal_independent;
  return cm;
}

ScalarField CostModel::running(const Density& m) const {
  if (!(m.grid() == grid_)) throw GridMismatch("cost model: grid mismatch");
  return running_(m);
}

ScalarField CostModel::terminal(const Density& m) const {
  if (!(m.grid() == grid_)) throw GridMismatch("cost model: grid mismatch");
  return terminal_(m);
}

}  // namespace mfgblind
