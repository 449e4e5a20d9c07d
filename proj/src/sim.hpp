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
#include "scenario.hpp"

#include <atomic>
#include <mutex>
#include <string>
#include <vector>

namespace ars548
{

/// SplitMix64 mixing step, the base of the simulator's deterministic noise.
uint64_t splitmix64(uint64_t x);

/// One standard-normal draw for a fully named counter, so any (seed, cycle,
/// object, sample, channel) tuple yields the same value on every platform:
/// the counter is hashed with SplitMix64 into two uniforms that feed a
/// Box-Muller transform.
double counter_gaussian(
  uint64_t seed, uint64_t cycle, uint32_t object_index, uint32_t sample, uint32_t channel);

struct KinematicState
{
  double position_x{};
  double position_y{};
  double position_z{};
  double velocity_x{};
  double velocity_y{};
};

/// Constant-acceleration kinematics: p(t) = p0 + v0 t + a t^2 / 2,
/// v(t) = v0 + a t.
KinematicState propagate(const ScenarioObject & object, double t_seconds);

struct GroundTruthObject
{
  uint32_t id{};
  KinematicState state;
};

struct GroundTruthRecord
{
  uint64_t cycle{};
  double time_seconds{};  // scenario clock, cycle / rate
  std::vector<GroundTruthObject> objects;
};

struct CycleFrames
{
  DetectionList detections;
  ObjectList objects;
  GroundTruthRecord truth;
};

/// Pure synthesis of one cycle's frames: exact kinematics in the ObjectList,
/// seeded Gaussian-noised spherical samples in the DetectionList, sequence
/// counters equal to the cycle index, stamps at
/// stamp_offset + cycle / rate on the simulated sensor clock. `mounting`
/// is echoed as the detection list origin.
CycleFrames synthesize_cycle(
  const Scenario & scenario, uint64_t cycle, const MountingPose & mounting = {});

/// Status template an unconfigured simulator reports: software 1.0.0,
/// neutral mounting, a 4.5 m sedan, 300 m range on the mid slot.
SensorStatus default_status(const Scenario & scenario);

struct EmitterOptions
{
  uint32_t target_ipv4{0x7F000001};  // 127.0.0.1
  uint16_t target_port{42102};
  uint16_t config_port{42101};
  std::string ground_truth_path;  // empty = no ground truth file
  bool pace{true};                // false = emit as fast as possible
};

struct EmissionSummary
{
  uint64_t cycles{};
  uint64_t detection_frames{};
  uint64_t object_frames{};
  uint64_t status_frames{};
  uint64_t configurations_applied{};
  uint64_t configurations_rejected{};
  std::string error;  // empty on clean completion

  bool ok() const { return error.empty(); }
};

/// Emits a scenario over UDP at cycle rate while answering configuration
/// frames on the config port. Thread-compatible: run() occupies the calling
/// thread; request_stop() and current_status() may be called from others.
class Simulator
{
public:
  explicit Simulator(Scenario scenario);

  EmissionSummary run(const EmitterOptions & options);

  void request_stop() { stop_.store(true, std::memory_order_relaxed); }

  SensorStatus current_status() const;

  /// Merges the present groups into the reported status, the same path the
  /// UDP configuration listener takes. Later cycles echo the new values.
  void apply_configuration(const SensorConfiguration & configuration);

  const Scenario & scenario() const { return scenario_; }

private:
  Scenario scenario_;
  mutable std::mutex mutex_;
  SensorStatus status_;  // guarded by mutex_
  std::atomic<bool> stop_{false};
};

}  // namespace ars548
