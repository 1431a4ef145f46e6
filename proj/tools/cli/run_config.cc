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

#include "cli/run_config.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

#include "mfgblind/belief_io.h"
#include "mfgblind/errors.h"

namespace mfgblind::cli {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw InvalidArgument(path + ": " + message);
}

// Reads one JSON object, recording resolved values and rejecting keys that
// were never asked for.
class Reader {
 public:
  Reader(const json& in, std::string path) : in_(in), path_(std::move(path)) {
    if (!in_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return in_.contains(key); }
  std::string at(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key, std::optional<double> fallback) {
    const json* v = lookup(key, fallback.has_value());
    const double x = v ? checked_number(*v, at(key)) : *fallback;
    out_[key] = x;
    return x;
  }

  int integer(const std::string& key, std::optional<int> fallback) {
    const json* v = lookup(key, fallback.has_value());
    int x = fallback.value_or(0);
    if (v) {
      if (!v->is_number_integer()) fail(at(key), "expected an integer");
      const auto wide = v->get<long long>();
      if (wide < -1000000000LL || wide > 1000000000LL) fail(at(key), "out of range");
      x = static_cast<int>(wide);
    }
    out_[key] = x;
    return x;
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = lookup(key, true);
    bool x = fallback;
    if (v) {
      if (!v->is_boolean()) fail(at(key), "expected true or false");
      x = v->get<bool>();
    }
    out_[key] = x;
    return x;
  }

  std::string string(const std::string& key, std::optional<std::string> fallback) {
    const json* v = lookup(key, fallback.has_value());
    std::string x = fallback.value_or("");
    if (v) {
      if (!v->is_string()) fail(at(key), "expected a string");
      x = v->get<std::string>();
    }
    out_[key] = x;
    return x;
  }

  // Sub-object; an absent optional section reads as {}.
  const json& object(const std::string& key, bool required) {
    static const json empty = json::object();
    const json* v = lookup(key, !required);
    if (!v) return empty;
    if (!v->is_object()) fail(at(key), "expected an object");
    return *v;
  }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    return in_.contains(key) ? &in_[key] : nullptr;
  }

  void put(const std::string& key, json value) { out_[key] = std::move(value); }

  json finish() {
    for (const auto& item : in_.items()) {
      if (!seen_.contains(item.key())) fail(at(item.key()), "unknown key");
    }
    return out_;
  }

 private:
  const json* lookup(const std::string& key, bool optional) {
    seen_.insert(key);
    if (!in_.contains(key)) {
      if (!optional) fail(at(key), "missing");
      return nullptr;
    }
    return &in_[key];
  }

  static double checked_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }

  const json& in_;
  std::string path_;
  std::set<std::string> seen_;
  json out_ = json::object();
};

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) fail(path, message);
}

FieldSpec parse_field(const json& j, const std::string& path, json& resolved) {
  Reader r(j, path);
  FieldSpec f;
  f.fn = r.string("fn", std::nullopt);
  static const std::set<std::string> known{"zero", "const", "cos", "sin", "x", "profile"};
  require(known.contains(f.fn), r.at("fn"),
          "expected one of zero, const, cos, sin, x, profile");
  f.k = r.integer("k", 1);
  require(f.k >= 0, r.at("k"), "must be >= 0");
  f.amplitude = r.number("amplitude", 1.0);
  f.offset = r.number("offset", 0.0);
  resolved = r.finish();
  return f;
}

CostSpec parse_cost(const json& j, const std::string& path, json& resolved) {
  Reader r(j, path);
  CostSpec c;
  c.kind = r.string("kind", std::nullopt);
  json sub;
  if (c.kind == "zero") {
  } else if (c.kind == "constant") {
    c.running = parse_field(r.object("running", true), r.at("running"), sub);
    r.put("running", sub);
    if (r.has("terminal")) {
      c.terminal = parse_field(r.object("terminal", true), r.at("terminal"), sub);
      r.put("terminal", sub);
    }
  } else if (c.kind == "product_form") {
    if (r.has("base")) {
      c.base = parse_field(r.object("base", true), r.at("base"), sub);
    } else {
      r.object("base", false);
      sub = {{"fn", "zero"}, {"k", 1}, {"amplitude", 1.0}, {"offset", 0.0}};
    }
    r.put("base", sub);
    c.phi = parse_field(r.object("phi", true), r.at("phi"), sub);
    r.put("phi", sub);
  } else if (c.kind == "moment_form") {
    c.g = r.string("g", "sqrt");
    try {
      (void)named_function(c.g);
    } catch (const InvalidArgument& e) {
      fail(r.at("g"), e.what());
    }
  } else if (c.kind == "illustrative") {
    c.c = r.number("c", 0.5);
    require(c.c > 0.0 && c.c < 1.0, r.at("c"), "must lie in (0, 1)");
  } else {
    fail(r.at("kind"),
         "expected one of zero, constant, product_form, moment_form, illustrative");
  }
  resolved = r.finish();
  return c;
}

}  // namespace

ScalarField FieldSpec::build(const TorusGrid& grid) const {
  const double two_pi_k = 2.0 * std::numbers::pi * static_cast<double>(k);
  const int dim = grid.dim;
  return ScalarField::from_function(grid, [&](const Point& p) {
    const double s = dim == 1 ? p[0] : p[0] + p[1];
    double v = 0.0;
    if (fn == "cos") v = amplitude * std::cos(two_pi_k * s);
    if (fn == "sin") v = amplitude * std::sin(two_pi_k * s);
    if (fn == "x") v = amplitude * p[0];
    if (fn == "profile") v = amplitude * illustrative_profile(p[0]);
    return offset + v;
  });
}

CostModel CostSpec::build(const TorusGrid& grid) const {
  if (kind == "zero") return CostModel::constant(ScalarField(grid));
  if (kind == "constant") {
    std::optional<ScalarField> t;
    if (terminal) t = terminal->build(grid);
    return CostModel::constant(running.build(grid), t);
  }
  if (kind == "product_form") return CostModel::product_form(base.build(grid), phi.build(grid));
  if (kind == "moment_form") return CostModel::moment_form(grid, named_function(g));
  return CostModel::illustrative(grid, c);
}

CylinderFunctional WeakSpec::phi(const TorusGrid& grid, double horizon) const {
  ScalarField h = inner.build(grid);
  if (outer == "linear_decay") return CylinderFunctional::linear_decay(std::move(h), horizon);
  return CylinderFunctional::quadratic_decay(std::move(h), horizon);
}

Belief RunConfig::build_belief(const TorusGrid& grid) const {
  return belief_from_json(belief.dump(), grid);
}

RunConfig parse_run_config(const std::string& command, const json& root) {
  RunConfig cfg;
  cfg.command = command;
  Reader top(root, "config");
  json sub;

  {
    Reader r(top.object("grid", true), "config.grid");
    cfg.dim = r.integer("dim", 1);
    require(cfg.dim == 1 || cfg.dim == 2, r.at("dim"), "must be 1 or 2");
    cfg.n = r.integer("n", std::nullopt);
    require(cfg.n >= 8, r.at("n"), "must be >= 8");
    require(cfg.n <= 4096, r.at("n"), "must be <= 4096");
    top.put("grid", r.finish());
  }
  const bool needs_time = command != "certify-monotone";
  {
    Reader r(top.object("time", needs_time), "config.time");
    cfg.horizon = r.number("T", 1.0);
    require(cfg.horizon > 0.0, r.at("T"), "must be > 0");
    cfg.steps = r.integer("steps", 64);
    require(cfg.steps >= 1, r.at("steps"), "must be >= 1");
    top.put("time", r.finish());
  }
  cfg.sigma = top.number("sigma", 0.0);
  require(cfg.sigma >= 0.0, "config.sigma", "must be >= 0");
  {
    Reader r(top.object("hamiltonian", false), "config.hamiltonian");
    cfg.hamiltonian = r.string("kind", "abs");
    cfg.delta = r.number("delta", 0.1);
    cfg.cap = r.number("cap", 1.0);
    try {
      (void)Hamiltonian::from_name(cfg.hamiltonian, cfg.delta, cfg.cap);
    } catch (const InvalidArgument& e) {
      fail("config.hamiltonian", e.what());
    }
    top.put("hamiltonian", r.finish());
  }
  cfg.cost = parse_cost(top.object("cost", true), "config.cost", sub);
  top.put("cost", sub);
  if (cfg.cost.kind == "moment_form" || cfg.cost.kind == "illustrative") {
    require(cfg.dim == 1, "config.cost.kind", cfg.cost.kind + " requires grid.dim = 1");
  }

  const bool needs_belief = command == "solve-complete" || command == "solve-blind" ||
                            command == "simulate-observed" || command == "validate-weak";
  if (const json* b = top.raw("belief")) {
    cfg.belief = *b;
  } else if (needs_belief) {
    fail("config.belief", "missing");
  }
  if (!cfg.belief.is_null()) {
    cfg.build_belief(cfg.grid());  // validates
    top.put("belief", cfg.belief);
  }
  {
    Reader r(top.object("solver", false), "config.solver");
    cfg.solver.relaxation = r.number("relaxation", 0.5);
    cfg.solver.tol = r.number("tol", 1e-6);
    cfg.solver.max_iter = r.integer("max_iter", 500);
    const std::string averaging = r.string("averaging", "picard");
    try {
      cfg.solver.averaging = averaging_from_name(averaging);
      cfg.solver.validate();
    } catch (const InvalidArgument& e) {
      fail("config.solver", e.what());
    }
    top.put("solver", r.finish());
  }
  {
    Reader r(top.object("filter", false), "config.filter");
    cfg.filter.tolerance = r.number("tolerance", 1e-6);
    cfg.filter.observation_dt = r.number("observation_dt", 0.0);
    const std::string grouping = r.string("grouping", "union_find");
    try {
      cfg.filter.grouping = grouping_from_name(grouping);
      cfg.filter.validate(cfg.horizon / cfg.steps);
    } catch (const InvalidArgument& e) {
      fail("config.filter", e.what());
    }
    top.put("filter", r.finish());
  }
  cfg.true_atom = top.integer("true_atom", 0);
  const int seed = top.integer("seed", 1);
  require(seed >= 0, "config.seed", "must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);
  if (command == "simulate-observed") {
    const Belief mu = cfg.build_belief(cfg.grid());
    require(cfg.true_atom >= 0 && static_cast<std::size_t>(cfg.true_atom) < mu.size(),
            "config.true_atom", "must index an atom of the belief");
  }
  {
    Reader r(top.object("certify", false), "config.certify");
    cfg.certify.trials = r.integer("trials", 1000);
    require(cfg.certify.trials >= 1, r.at("trials"), "must be >= 1");
    cfg.certify.max_atoms = r.integer("max_atoms", 8);
    require(cfg.certify.max_atoms >= 1 && cfg.certify.max_atoms <= 64, r.at("max_atoms"),
            "must lie in [1, 64]");
    cfg.certify.witness_scan = r.boolean("witness_scan", true);
    cfg.certify.scan_points = r.integer("scan_points", 41);
    require(cfg.certify.scan_points >= 2, r.at("scan_points"), "must be >= 2");
    top.put("certify", r.finish());
  }
  {
    const bool needs_weak = command == "validate-weak";
    Reader r(top.object("weak", needs_weak), "config.weak");
    if (needs_weak || r.has("phi")) {
      Reader p(r.object("phi", true), "config.weak.phi");
      cfg.weak.inner = parse_field(p.object("inner", true), p.at("inner"), sub);
      p.put("inner", sub);
      cfg.weak.outer = p.string("outer", "linear_decay");
      require(cfg.weak.outer == "linear_decay" || cfg.weak.outer == "quadratic_decay",
              p.at("outer"), "expected linear_decay or quadratic_decay");
      r.put("phi", p.finish());
    }
    if (const json* d = r.raw("drift")) {
      require(d->is_array() && d->size() == static_cast<std::size_t>(cfg.dim),
              "config.weak.drift", "expected one field per axis");
      json list = json::array();
      for (std::size_t a = 0; a < d->size(); ++a) {
        cfg.weak.drift.push_back(
            parse_field((*d)[a], "config.weak.drift[" + std::to_string(a) + "]", sub));
        list.push_back(sub);
      }
      r.put("drift", list);
    } else {
      cfg.weak.drift.assign(static_cast<std::size_t>(cfg.dim), FieldSpec{});
      r.put("drift", json::array());
    }
    cfg.weak.levels = r.integer("levels", 3);
    require(cfg.weak.levels >= 2 && cfg.weak.levels <= 6, r.at("levels"),
            "must lie in [2, 6]");
    if (r.has("perturb")) {
      Reader p(r.object("perturb", true), "config.weak.perturb");
      cfg.weak.perturb = true;
      cfg.weak.perturb_time = p.number("time_fraction", 0.5);
      require(cfg.weak.perturb_time > 0.0 && cfg.weak.perturb_time < 1.0,
              p.at("time_fraction"), "must lie in (0, 1)");
      cfg.weak.perturb_shift = p.number("weight_shift", 0.2);
      require(cfg.weak.perturb_shift > 0.0 && cfg.weak.perturb_shift < 1.0,
              p.at("weight_shift"), "must lie in (0, 1)");
      r.put("perturb", p.finish());
    }
    top.put("weak", r.finish());
  }
  {
    Reader r(top.object("output", false), "config.output");
    cfg.output.directory = r.string("directory", "out");
    cfg.output.time_stride = r.integer("time_stride", 1);
    require(cfg.output.time_stride >= 1, r.at("time_stride"), "must be >= 1");
    if (const json* f = r.raw("formats")) {
      require(f->is_array(), r.at("formats"), "expected an array");
      cfg.output.csv = false;
      for (const auto& item : *f) {
        require(item.is_string() && (item == "csv" || item == "json"), r.at("formats"),
                "entries must be \"csv\" or \"json\"");
        if (item == "csv") cfg.output.csv = true;
      }
      r.put("formats", *f);
    } else {
      r.put("formats", json::array({"csv", "json"}));
    }
    top.put("output", r.finish());
  }
  cfg.resolved = top.finish();
  return cfg;
}

RunConfig load_run_config(const std::string& command, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json root;
  try {
    root = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_run_config(command, root);
}

}  // namespace mfgblind::cli
