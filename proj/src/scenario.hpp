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

#pragma once

#include "model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ars548
{

inline constexpr std::size_t max_detections_per_object = 16;

/// One simulated target under constant-acceleration kinematics.
struct ScenarioObject
{
  uint32_t id{};
  double position_x{};  // m, at t = 0
  double position_y{};
  double position_z{};
  double velocity_x{};  // m/s, at t = 0
  double velocity_y{};
  double acceleration_x{};  // m/s^2, constant
  double acceleration_y{};
  Classification classification{Classification::car};
  double shape_length{4.5};  // m
  double shape_width{1.8};
  uint32_t detections_per_cycle{4};  // <= 16

  bool operator==(const ScenarioObject &) const = default;
};

/// Gaussian noise applied to synthesized detections (objects stay exact).
struct DetectionNoise
{
  double range_std{};       // m
  double azimuth_std{};     // rad
  double elevation_std{};   // rad
  double range_rate_std{};  // m/s

  bool operator==(const DetectionNoise &) const = default;
};

struct Scenario
{
  std::string name;
  double duration_seconds{10.0};  // > 0
  double cycle_rate_hz{20.0};     // [1, 50]
  uint64_t seed{};
  // The simulated sensor clock starts here (seconds); frame stamps read
  // stamp_offset + cycle/rate, independent of the host clock.
  double stamp_offset_seconds{};
  DetectionNoise noise{};
  std::vector<ScenarioObject> objects;

  uint64_t cycle_count() const;
  uint64_t cycle_period_ns() const;

  bool operator==(const Scenario &) const = default;
};

struct ScenarioError
{
  std::string message;
};

/// Full invariant check; error message names the offending field.
std::optional<ScenarioError> validate_scenario(const Scenario & scenario);

/// Loads and validates a scenario from a JSON file. Schema (defaults in
/// parentheses):
///   {
///     "name": string (""),
///     "duration_seconds": number,
///     "cycle_rate_hz": number (20),
///     "seed": unsigned (0),
///     "stamp_offset_seconds": number (0),
///     "noise": {"range_std": number (0), "azimuth_std": number (0),
///               "elevation_std": number (0), "range_rate_std": number (0)},
///     "objects": [
///       {"id": unsigned (index + 1),
///        "position": [x, y, z],
///        "velocity": [vx, vy] ([0, 0]),
///        "acceleration": [ax, ay] ([0, 0]),
///        "classification": string ("car"),
///        "shape": [length, width] ([4.5, 1.8]),
///        "detections_per_cycle": unsigned (4)}
///     ]
///   }
/// Unknown keys are rejected.
std::optional<Scenario> load_scenario(const std::string & path, ScenarioError & error);

}  // namespace ars548
