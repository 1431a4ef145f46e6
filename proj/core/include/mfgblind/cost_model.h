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

#ifndef MFGBLIND_COST_MODEL_H_
#define MFGBLIND_COST_MODEL_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "mfgblind/torus_field.h"

namespace mfgblind {

enum class CostKind {
  kConstant,
  kProductForm,
  kMomentForm,
  kIllustrative,
  kCustom,
};

// A scalar function on [0, 1] with a name used in reports and configs.
struct NamedFunction {
  std::string name;
  std::function<double(double)> fn;

  double operator()(double s) const { return fn(s); }
};

// "sqrt", "identity", "square", "cube", "tanh", or "affine:a,b" (a + b s).
NamedFunction named_function(const std::string& name);

// The well profile of the illustrative game: 0 outside (1/4, 7/16), -2 on
// [5/16, 3/8], with C^2 quintic smoothstep ramps on [1/4, 5/16] and
// [3/8, 7/16]. Periodic with period 1.
double illustrative_profile(double x);

// Running cost f : density -> field and terminal cost U0 : density -> field.
class CostModel {
 public:
  using Map = std::function<ScalarField(const Density&)>;

  // f(m) = running, U0(m) = terminal (zero when omitted); independent of m.
  static CostModel constant(ScalarField running,
                            std::optional<ScalarField> terminal = std::nullopt);
  // f(m) = base + phi * int(phi dm).
  static CostModel product_form(ScalarField base, ScalarField phi);
  // f(m)(x) = x * g(int(y m(dy))) with coordinates in [0, 1). 1-D only.
  static CostModel moment_form(const TorusGrid& grid, NamedFunction g);
  // f(m) = f0 + c * f0 * int(f0 dm) with f0 = illustrative_profile.
  static CostModel illustrative(const TorusGrid& grid, double c);
  static CostModel custom(std::string name, const TorusGrid& grid, Map running,
                          bool independent_of_density = false);

  // Replaces the terminal cost (zero by default).
  CostModel with_terminal(Map terminal, bool terminal_independent) const;

  ScalarField running(const Density& m) const;
  ScalarField terminal(const Density& m) const;

  CostKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const TorusGrid& grid() const { return grid_; }
  bool independent_of_density() const {
    return running_independent_ && terminal_independent_;
  }

  // Set for moment_form only.
  const std::optional<NamedFunction>& moment_function() const { return g_; }
  // Set for product_form (phi) and illustrative (f0).
  const std::optional<ScalarField>& coupling_profile() const { return profile_; }
  // c for illustrative.
  double coupling_strength() const { return strength_; }

 private:
  CostModel() = default;

  CostKind kind_ = CostKind::kCustom;
  std::string name_;
  TorusGrid grid_;
  Map running_;
  Map terminal_;
  bool running_independent_ = false;
  bool terminal_independent_ = true;
  std::optional<NamedFunction> g_;
  std::optional<ScalarField> profile_;
  double strength_ = 0.0;
};

}  // namespace mfgblind

#endif  // MFGBLIND_COST_MODEL_H_
