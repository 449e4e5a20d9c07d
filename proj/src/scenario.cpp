// Copyright 2026 ars548-toolkit contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <unordered_set>

#include "filter.hpp"
#include "json.hpp"

namespace ars548
{

namespace
{

using nlohmann::json;

// Parse failures surface as ScenarioError text, so keep exceptions local.
struct ParseFailure
{
  std::string message;
};

[[noreturn]] void reject(std::string message)
{
  throw ParseFailure{std::move(message)};
}

void require_keys(const json & node, const char * where, std::initializer_list<const char *> keys)
{
  for (const auto & item : node.items()) {
    bool known = false;
    for (const char * key : keys) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      reject(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

double number_or(const json & node, const char * key, double fallback)
{
  if (!node.contains(key)) {
    return fallback;
  }
  if (!node[key].is_number()) {
    reject(std::string(key) + " must be a number");
  }
  return node[key].get<double>();
}

uint64_t unsigned_or(const json & node, const char * key, uint64_t fallback)
{
  if (!node.contains(key)) {
    return fallback;
  }
  if (!node[key].is_number_unsigned()) {
    reject(std::string(key) + " must be a non-negative integer");
  }
  return node[key].get<uint64_t>();
}

void read_fixed_array(const json & node, const char * key, double * out, std::size_t n)
{
  const auto & value = node.at(key);
  if (!value.is_array() || value.size() != n) {
    reject(std::string(key) + " must be an array of " + std::to_string(n) + " numbers");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!value[i].is_number()) {
      reject(std::string(key) + "[" + std::to_string(i) + "] must be a number");
    }
    out[i] = value[i].get<double>();
  }
}

ScenarioObject parse_object(const json & node, std::size_t index)
{
  const std::string where = "objects[" + std::to_string(index) + "]";
  if (!node.is_object()) {
    reject(where + " must be an object");
  }
  require_keys(
    node, where.c_str(),
    {"id", "position", "velocity", "acceleration", "classification", "shape",
     "detections_per_cycle"});

  ScenarioObject object;
  object.id = static_cast<uint32_t>(unsigned_or(node, "id", index + 1));
  if (object.id == 0) {
    reject(where + ".id must be nonzero");
  }

  if (!node.contains("position")) {
    reject(where + " is missing position");
  }
  double position[3] = {};
  read_fixed_array(node, "position", position, 3);
  object.position_x = position[0];
  object.position_y = position[1];
  object.position_z = position[2];

  double velocity[2] = {};
  if (node.contains("velocity")) {
    read_fixed_array(node, "velocity", velocity, 2);
  }
  object.velocity_x = velocity[0];
  object.velocity_y = velocity[1];

  double acceleration[2] = {};
  if (node.contains("acceleration")) {
    read_fixed_array(node, "acceleration", acceleration, 2);
  }
  object.acceleration_x = acceleration[0];
  object.acceleration_y = acceleration[1];

  if (node.contains("classification")) {
    if (!node["classification"].is_string()) {
      reject(where + ".classification must be a string");
    }
    const auto parsed = parse_classification(node["classification"].get<std::string>());
    if (!parsed) {
      reject(where + ".classification '" + node["classification"].get<std::string>() +
             "' is not a known class");
    }
    object.classification = *parsed;
  }

  if (node.contains("shape")) {
    double shape[2] = {};
    read_fixed_array(node, "shape", shape, 2);
    object.shape_length = shape[0];
    object.shape_width = shape[1];
  }

  object.detections_per_cycle =
    static_cast<uint32_t>(unsigned_or(node, "detections_per_cycle", 4));
  return object;
}

Scenario parse_scenario(const json & root)
{
  if (!root.is_object()) {
    reject("scenario root must be an object");
  }
  require_keys(
    root, "scenario",
    {"name", "duration_seconds", "cycle_rate_hz", "seed", "stamp_offset_seconds", "noise",
     "objects"});

  Scenario scenario;
  if (root.contains("name")) {
    if (!root["name"].is_string()) {
      reject("name must be a string");
    }
    scenario.name = root["name"].get<std::string>();
  }
  if (!root.contains("duration_seconds")) {
    reject("scenario is missing duration_seconds");
  }
  scenario.duration_seconds = number_or(root, "duration_seconds", 0);
  scenario.cycle_rate_hz = number_or(root, "cycle_rate_hz", 20.0);
  scenario.seed = unsigned_or(root, "seed", 0);
  scenario.stamp_offset_seconds = number_or(root, "stamp_offset_seconds", 0.0);

  if (root.contains("noise")) {
    const auto & noise = root["noise"];
    if (!noise.is_object()) {
      reject("noise must be an object");
    }
    require_keys(noise, "noise", {"range_std", "azimuth_std", "elevation_std", "range_rate_std"});
    scenario.noise.range_std = number_or(noise, "range_std", 0.0);
    scenario.noise.azimuth_std = number_or(noise, "azimuth_std", 0.0);
    scenario.noise.elevation_std = number_or(noise, "elevation_std", 0.0);
    scenario.noise.range_rate_std = number_or(noise, "range_rate_std", 0.0);
  }

  if (root.contains("objects")) {
    if (!root["objects"].is_array()) {
      reject("objects must be an array");
    }
    for (std::size_t i = 0; i < root["objects"].size(); ++i) {
      scenario.objects.push_back(parse_object(root["objects"][i], i));
    }
  }
  return scenario;
}

}  // namespace

uint64_t Scenario::cycle_count() const
{
  return static_cast<uint64_t>(std::llround(duration_seconds * cycle_rate_hz));
}

uint64_t Scenario::cycle_period_ns() const
{
  return static_cast<uint64_t>(std::llround(1e9 / cycle_rate_hz));
}

std::optional<ScenarioError> validate_scenario(const Scenario & scenario)
{
  if (!(scenario.duration_seconds > 0.0) || !std::isfinite(scenario.duration_seconds)) {
    return ScenarioError{"duration_seconds must be > 0"};
  }
  if (
    !std::isfinite(scenario.cycle_rate_hz) || scenario.cycle_rate_hz < 1.0 ||
    scenario.cycle_rate_hz > 50.0) {
    return ScenarioError{"cycle_rate_hz must be in [1, 50]"};
  }
  if (!std::isfinite(scenario.stamp_offset_seconds) || scenario.stamp_offset_seconds < 0.0) {
    return ScenarioError{"stamp_offset_seconds must be >= 0"};
  }
  const struct
  {
    const char * name;
    double value;
  } stds[] = {
    {"noise.range_std", scenario.noise.range_std},
    {"noise.azimuth_std", scenario.noise.azimuth_std},
    {"noise.elevation_std", scenario.noise.elevation_std},
    {"noise.range_rate_std", scenario.noise.range_rate_std},
  };
  for (const auto & std_field : stds) {
    if (!std::isfinite(std_field.value) || std_field.value < 0.0) {
      return ScenarioError{std::string(std_field.name) + " must be >= 0"};
    }
  }
  if (scenario.objects.size() > max_objects) {
    return ScenarioError{
      "objects count " + std::to_string(scenario.objects.size()) + " exceeds " +
      std::to_string(max_objects)};
  }
  std::unordered_set<uint32_t> ids;
  for (std::size_t i = 0; i < scenario.objects.size(); ++i) {
    const auto & object = scenario.objects[i];
    const std::string where = "objects[" + std::to_string(i) + "]";
    if (object.id == 0) {
      return ScenarioError{where + ".id must be nonzero"};
    }
    if (!ids.insert(object.id).second) {
      return ScenarioError{where + ".id " + std::to_string(object.id) + " is duplicated"};
    }
    if (object.detections_per_cycle > max_detections_per_object) {
      return ScenarioError{
        where + ".detections_per_cycle " + std::to_string(object.detections_per_cycle) +
        " exceeds " + std::to_string(max_detections_per_object)};
    }
    const struct
    {
      const char * name;
      double value;
    } fields[] = {
      {".position_x", object.position_x},     {".position_y", object.position_y},
      {".position_z", object.position_z},     {".velocity_x", object.velocity_x},
      {".velocity_y", object.velocity_y},     {".acceleration_x", object.acceleration_x},
      {".acceleration_y", object.acceleration_y},
    };
    for (const auto & field : fields) {
      if (!std::isfinite(field.value)) {
        return ScenarioError{where + field.name + " must be finite"};
      }
    }
    if (!std::isfinite(object.shape_length) || object.shape_length < 0.0) {
      return ScenarioError{where + ".shape_length must be >= 0"};
    }
    if (!std::isfinite(object.shape_width) || object.shape_width < 0.0) {
      return ScenarioError{where + ".shape_width must be >= 0"};
    }
  }
  return std::nullopt;
}

std::optional<Scenario> load_scenario(const std::string & path, ScenarioError & error)
{
  std::ifstream input(path);
  if (!input) {
    error.message = path + ": cannot open";
    return std::nullopt;
  }
  try {
    const json root = json::parse(input);
    Scenario scenario = parse_scenario(root);
    if (auto invalid = validate_scenario(scenario)) {
      error.message = path + ": " + invalid->message;
      return std::nullopt;
    }
    return scenario;
  } catch (const ParseFailure & failure) {
    error.message = path + ": " + failure.message;
    return std::nullopt;
  } catch (const json::exception & failure) {
    error.message = path + ": " + failure.what();
    return std::nullopt;
  }
}

}  // namespace ars548
