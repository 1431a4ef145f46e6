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

#include "mfgblind/belief_io.h"

#include <set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mfgblind/errors.h"

namespace mfgblind {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw InvalidArgument(path + ": " + message);
}

void reject_unknown(const json& object, const std::set<std::string>& allowed,
                    const std::string& path) {
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) fail(path + "." + item.key(), "unknown key");
  }
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Density parse_atom(const json& atom, const TorusGrid& grid, const std::string& path) {
  if (!atom.is_object()) fail(path, "expected an object");
  if (!atom.contains("kind") || !atom["kind"].is_string()) {
    fail(path + ".kind", "expected \"dirac\" or \"grid\"");
  }
  const std::string kind = atom["kind"].get<std::string>();
  try {
    if (kind == "dirac") {
      reject_unknown(atom, {"kind", "center", "bandwidth"}, path);
      if (!atom.contains("center")) fail(path + ".center", "missing");
      Point center{0.0, 0.0};
      const json& c = atom["center"];
      if (c.is_number()) {
        center[0] = c.get<double>();
      } else if (c.is_array() && c.size() == static_cast<std::size_t>(grid.dim)) {
        for (std::size_t a = 0; a < c.size(); ++a) {
          center[a] = number_at(c[a], path + ".center[" + std::to_string(a) + "]");
        }
      } else {
        fail(path + ".center", "expected a number or a point of the grid dimension");
      }
      std::optional<double> bandwidth;
      if (atom.contains("bandwidth")) {
        bandwidth = number_at(atom["bandwidth"], path + ".bandwidth");
      }
      return mollified_dirac(grid, center, bandwidth);
    }
    if (kind == "grid") {
      reject_unknown(atom, {"kind", "values"}, path);
      if (!atom.contains("values") || !atom["values"].is_array()) {
        fail(path + ".values", "expected an array");
      }
      std::vector<double> values;
      values.reserve(atom["values"].size());
      for (std::size_t k = 0; k < atom["values"].size(); ++k) {
        values.push_back(
            number_at(atom["values"][k], path + ".values[" + std::to_string(k) + "]"));
      }
      return Density(grid, std::move(values));
    }
  } catch (const InvalidArgument& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    fail(path, what);
  }
  fail(path + ".kind", "expected \"dirac\" or \"grid\", got \"" + kind + "\"");
}

}  // namespace

std::string belief_to_json(const Belief& mu, int indent) {
  json out;
  out["weights"] = std::vector<double>(mu.weights().begin(), mu.weights().end());
  json atoms = json::array();
  for (const auto& m : mu.atoms()) {
    atoms.push_back({{"kind", "grid"},
                     {"values", std::vector<double>(m.values().begin(), m.values().end())}});
  }
  out["atoms"] = std::move(atoms);
  return out.dump(indent);
}

Belief belief_from_json(std::string_view text, const TorusGrid& grid) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("belief", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("belief", "expected an object");
  reject_unknown(root, {"weights", "atoms"}, "belief");
  if (!root.contains("weights") || !root["weights"].is_array()) {
    fail("belief.weights", "expected an array");
  }
  if (!root.contains("atoms") || !root["atoms"].is_array()) {
    fail("belief.atoms", "expected an array");
  }
  std::vector<double> weights;
  for (std::size_t i = 0; i < root["weights"].size(); ++i) {
    weights.push_back(
        number_at(root["weights"][i], "belief.weights[" + std::to_string(i) + "]"));
  }
  std::vector<Density> atoms;
  for (std::size_t i = 0; i < root["atoms"].size(); ++i) {
    atoms.push_back(
        parse_atom(root["atoms"][i], grid, "belief.atoms[" + std::to_string(i) + "]"));
  }
  try {
    return Belief(std::move(weights), std::move(atoms));
  } catch (const InvalidArgument& e) {
    fail("belief", e.what());
  }
}

}  // namespace mfgblind
