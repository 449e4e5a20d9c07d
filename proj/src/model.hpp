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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ars548
{

inline constexpr std::size_t max_detections = 800;
inline constexpr std::size_t max_objects = 50;

// Below this speed the velocity direction is numerically meaningless and
// object_heading falls back to the tracked orientation.
inline constexpr double eps_speed = 1e-6;

// km/h <-> m/s, exact by definition.
inline constexpr double kmh_per_mps = 3.6;

enum class SyncStatus : uint8_t { sync_ok = 1, sync_never = 2, sync_lost = 3 };

enum class Classification : uint8_t {
  unknown = 0,
  car = 1,
  truck = 2,
  motorcycle = 3,
  pedestrian = 4,
  bicycle = 5,
  animal = 6,
  hazard = 7,
};

inline constexpr std::size_t classification_count = 8;

enum class MeasurementStatus : uint8_t { measured = 0, predicted = 1, new_track = 2 };
enum class MovementStatus : uint8_t { moving = 0, stationary = 1 };
enum class PlugOrientation : uint8_t { left = 0, right = 1 };
enum class FrequencySlot : uint8_t { low = 0, mid = 1, high = 2 };
enum class Blockage : uint8_t { none = 0, partial = 1, full = 2 };

enum class StampPolicy : uint8_t { keep_original = 0, override_local = 1 };

// Detection invalid_flags bits. Bits 3..7 are reserved and pass through.
inline constexpr uint8_t detection_invalid_range = 0x01;
inline constexpr uint8_t detection_invalid_angle = 0x02;
inline constexpr uint8_t detection_invalid_range_rate = 0x04;

// object_id value for detections the tracker did not associate.
inline constexpr uint16_t unassociated_object_id = 0xFFFF;

struct Timestamp
{
  uint32_t seconds{};
  uint32_t nanoseconds{};  // < 1'000'000'000
  SyncStatus sync_status{SyncStatus::sync_never};

  static Timestamp from_nanoseconds(uint64_t ns, SyncStatus sync);
  uint64_t to_nanoseconds() const;

  bool operator==(const Timestamp &) const = default;
};

/// One raw radar return in sensor spherical coordinates.
struct Detection
{
  float azimuth{};        // rad, (-pi, pi]
  float azimuth_std{};    // rad, >= 0
  float elevation{};      // rad, [-pi/2, pi/2]
  float elevation_std{};  // rad, >= 0
  float range{};          // m, >= 0
  float range_std{};      // m, >= 0
  float range_rate{};     // m/s, negative = approaching
  float range_rate_std{};
  int8_t rcs{};           // dBsm
  uint8_t invalid_flags{};
  uint16_t measurement_id{};
  uint16_t object_id{unassociated_object_id};
  Classification classification{Classification::unknown};

  bool operator==(const Detection &) const = default;
};

struct DetectionList
{
  Timestamp stamp{};
  uint32_t sequence_counter{};
  float origin_x{};  // sensor mounting origin echo, m
  float origin_y{};
  float origin_z{};
  std::vector<Detection> detections;

  bool operator==(const DetectionList &) const = default;
};

/// One tracked object in the sensor frame (x forward, y left, z up).
struct TrackedObject
{
  uint32_t id{};
  uint16_t age{};  // measurement cycles
  MeasurementStatus status_measurement{MeasurementStatus::measured};
  MovementStatus status_movement{MovementStatus::moving};
  float position_x{};  // m
  float position_y{};
  float position_z{};
  float position_std_x{};
  float position_std_y{};
  float position_std_z{};
  float orientation_yaw{};      // rad, (-pi, pi]
  float orientation_yaw_std{};  // rad, >= 0
  float velocity_rel_x{};       // m/s, relative to sensor
  float velocity_rel_y{};
  float velocity_std_x{};
  float velocity_std_y{};
  float acceleration_rel_x{};  // m/s^2, relative
  float acceleration_rel_y{};
  float acceleration_std_x{};
  float acceleration_std_y{};
  float yaw_rate{};      // rad/s
  float shape_length{};  // m, >= 0
  float shape_width{};
  std::array<uint8_t, classification_count> classification_probabilities{};  // percent

  bool operator==(const TrackedObject &) const = default;
};

struct ObjectList
{
  Timestamp stamp{};
  uint32_t sequence_counter{};
  std::vector<TrackedObject> objects;

  bool operator==(const ObjectList &) const = default;
};

struct MountingPose
{
  float longitudinal{};  // m, relative to the front axle
  float lateral{};
  float vertical{};
  float yaw{};    // rad, (-pi, pi]
  float pitch{};  // rad, [-pi/2, pi/2]
  PlugOrientation plug_orientation{PlugOrientation::left};

  bool operator==(const MountingPose &) const = default;
};

struct VehicleDimensions
{
  float length{};  // m, > 0
  float width{};
  float height{};
  float wheelbase{};  // m, > 0, <= length

  bool operator==(const VehicleDimensions &) const = default;
};

struct RadarParameters
{
  uint16_t max_detection_distance{};  // m, 99..1500
  FrequencySlot frequency_slot{FrequencySlot::mid};
  uint8_t cycle_time_ms{};  // 50..100
  uint32_t sensor_ipv4{};
  bool powersave_standstill{};

  bool operator==(const RadarParameters &) const = default;
};

struct SensorStatus
{
  Timestamp stamp{};
  uint8_t software_version_major{};
  uint8_t software_version_minor{};
  uint8_t software_version_patch{};
  MountingPose mounting{};
  VehicleDimensions vehicle{};
  RadarParameters radar{};
  Blockage blockage{Blockage::none};
  bool defective{};

  bool operator==(const SensorStatus &) const = default;
};

/// Write-side configuration request. Absent groups keep the sensor's values.
struct SensorConfiguration
{
  std::optional<MountingPose> mounting;
  std::optional<VehicleDimensions> vehicle;
  std::optional<RadarParameters> radar;
  std::optional<uint32_t> new_sensor_ipv4;

  bool any_group_present() const
  {
    return mounting || vehicle || radar || new_sensor_ipv4;
  }

  bool operator==(const SensorConfiguration &) const = default;
};

enum class FrameKind : uint8_t { status = 0, object_list = 1, detection_list = 2 };

/// Host reception timestamps, captured before decode.
struct RecvTime
{
  uint64_t wall_ns{};
  uint64_t mono_ns{};

  bool operator==(const RecvTime &) const = default;
};

struct Endpoint
{
  uint32_t ipv4{};
  uint16_t port{};

  bool operator==(const Endpoint &) const = default;
};

std::string ipv4_to_string(uint32_t addr);
std::optional<uint32_t> parse_ipv4(const std::string & text);

/// One decoded datagram plus its reception metadata.
struct Frame
{
  std::variant<SensorStatus, ObjectList, DetectionList> payload;
  RecvTime recv_time{};
  Endpoint source{};

  FrameKind kind() const { return static_cast<FrameKind>(payload.index()); }
  const Timestamp & stamp() const;

  bool operator==(const Frame &) const = default;
};

double object_speed(const TrackedObject & obj);
double object_heading(const TrackedObject & obj);

/// Maps any finite angle onto the wire azimuth/yaw domain: the float
/// interval (-pi, pi], with the boundary handled in float precision.
float wrap_angle_to_wire(double radians);

/// Clamps onto the wire elevation/pitch domain [-pi/2, pi/2] in float
/// precision.
float clamp_elevation_to_wire(double radians);

Frame apply_stamp_policy(Frame frame, StampPolicy policy);

/// A failed model invariant: which field and the offending value.
struct Violation
{
  std::string field;
  double value{};
};

std::optional<Violation> validate(const Timestamp & stamp);
std::optional<Violation> validate(const Detection & detection);
std::optional<Violation> validate(const DetectionList & list);
std::optional<Violation> validate(const TrackedObject & object);
std::optional<Violation> validate(const ObjectList & list);
std::optional<Violation> validate(const MountingPose & mounting);
std::optional<Violation> validate(const VehicleDimensions & vehicle);
std::optional<Violation> validate(const RadarParameters & radar);
std::optional<Violation> validate(const SensorStatus & status);
std::optional<Violation> validate(const SensorConfiguration & configuration);
std::optional<Violation> validate(const Frame & frame);

}  // namespace ars548
