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

#include "model.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace ars548
{

namespace
{

constexpr uint32_t nanos_per_second = 1'000'000'000u;

// Range checks on wire-backed fields run in float so that the greatest
// representable float not above pi (which rounds up from the double value)
// still validates.
const float pi_f = static_cast<float>(M_PI);
const float half_pi_f = static_cast<float>(M_PI / 2.0);

bool valid_angle_pi(float v)
{
  return std::isfinite(v) && v > -pi_f && v <= pi_f;
}

bool valid_angle_half_pi(float v)
{
  return std::isfinite(v) && v >= -half_pi_f && v <= half_pi_f;
}

bool non_negative(float v)
{
  return std::isfinite(v) && v >= 0.f;
}

bool positive(float v)
{
  return std::isfinite(v) && v > 0.f;
}

std::optional<Violation> fail(std::string field, double value)
{
  return Violation{std::move(field), value};
}

}  // namespace

Timestamp Timestamp::from_nanoseconds(uint64_t ns, SyncStatus sync)
{
  Timestamp stamp;
  stamp.seconds = static_cast<uint32_t>(ns / nanos_per_second);
  stamp.nanoseconds = static_cast<uint32_t>(ns % nanos_per_second);
  stamp.sync_status = sync;
  return stamp;
}

uint64_t Timestamp::to_nanoseconds() const
{
  return static_cast<uint64_t>(seconds) * nanos_per_second + nanoseconds;
}

std::string ipv4_to_string(uint32_t addr)
{
  char buf[16];
  std::snprintf(
    buf, sizeof(buf), "%u.%u.%u.%u", (addr >> 24) & 0xFF, (addr >> 16) & 0xFF, (addr >> 8) & 0xFF,
    addr & 0xFF);
  return buf;
}

std::optional<uint32_t> parse_ipv4(const std::string & text)
{
  unsigned a = 0, b = 0, c = 0, d = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%u.%u.%u.%u%c", &a, &b, &c, &d, &tail) != 4) {
    return std::nullopt;
  }
  if (a > 255 || b > 255 || c > 255 || d > 255) {
    return std::nullopt;
  }
  return (a << 24) | (b << 16) | (c << 8) | d;
}

const Timestamp & Frame::stamp() const
{
  return std::visit([](const auto & payload) -> const Timestamp & { return payload.stamp; },
                    payload);
}

double object_speed(const TrackedObject & obj)
{
  return std::hypot(
    static_cast<double>(obj.velocity_rel_x), static_cast<double>(obj.velocity_rel_y));
}

double object_heading(const TrackedObject & obj)
{
  if (object_speed(obj) < eps_speed) {
    return obj.orientation_yaw;
  }
  const double heading = std::atan2(
    static_cast<double>(obj.velocity_rel_y), static_cast<double>(obj.velocity_rel_x));
  // atan2(-0, negative) lands on -pi; keep the (-pi, pi] convention.
  return heading == -M_PI ? M_PI : heading;
}

float wrap_angle_to_wire(double radians)
{
  double wrapped = std::remainder(radians, 2.0 * M_PI);
  if (wrapped <= -M_PI) {
    wrapped = M_PI;
  }
  float out = static_cast<float>(wrapped);
  // Values just above -pi can still round down to float(-pi), which the
  // open lower bound excludes.
  if (out <= -pi_f) {
    out = pi_f;
  }
  return out;
}

float clamp_elevation_to_wire(double radians)
{
  float out = static_cast<float>(radians);
  if (out > half_pi_f) {
    out = half_pi_f;
  }
  if (out < -half_pi_f) {
    out = -half_pi_f;
  }
  return out;
}

Frame apply_stamp_policy(Frame frame, StampPolicy policy)
{
  if (policy == StampPolicy::keep_original) {
    return frame;
  }
  std::visit(
    [&](auto & payload) {
      const SyncStatus sync = payload.stamp.sync_status;
      payload.stamp = Timestamp::from_nanoseconds(frame.recv_time.wall_ns, sync);
    },
    frame.payload);
  return frame;
}

std::optional<Violation> validate(const Timestamp & stamp)
{
  if (stamp.nanoseconds >= nanos_per_second) {
    return fail("stamp.nanoseconds", stamp.nanoseconds);
  }
  const auto sync = static_cast<uint8_t>(stamp.sync_status);
  if (sync < 1 || sync > 3) {
    return fail("stamp.sync_status", sync);
  }
  return std::nullopt;
}

std::optional<Violation> validate(const Detection & detection)
{
  if (!valid_angle_pi(detection.azimuth)) return fail("azimuth", detection.azimuth);
  if (!non_negative(detection.azimuth_std)) return fail("azimuth_std", detection.azimuth_std);
  if (!valid_angle_half_pi(detection.elevation)) return fail("elevation", detection.elevation);
  if (!non_negative(detection.elevation_std)) return fail("elevation_std", detection.elevation_std);
  if (!non_negative(detection.range)) return fail("range", detection.range);
  if (!non_negative(detection.range_std)) return fail("range_std", detection.range_std);
  if (!std::isfinite(detection.range_rate)) return fail("range_rate", detection.range_rate);
  if (!non_negative(detection.range_rate_std)) {
    return fail("range_rate_std", detection.range_rate_std);
  }
  if (static_cast<uint8_t>(detection.classification) >= classification_count) {
    return fail("classification", static_cast<uint8_t>(detection.classification));
  }
  return std::nullopt;
}

std::optional<Violation> validate(const DetectionList & list)
{
  if (auto violation = validate(list.stamp)) return violation;
  if (!std::isfinite(list.origin_x)) return fail("origin_x", list.origin_x);
  if (!std::isfinite(list.origin_y)) return fail("origin_y", list.origin_y);
  if (!std::isfinite(list.origin_z)) return fail("origin_z", list.origin_z);
  if (list.detections.size() > max_detections) {
    return fail("detections.count", static_cast<double>(list.detections.size()));
  }
  for (std::size_t i = 0; i < list.detections.size(); ++i) {
    if (auto violation = validate(list.detections[i])) {
      violation->field = "detections[" + std::to_string(i) + "]." + violation->field;
      return violation;
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate(const TrackedObject & object)
{
  if (static_cast<uint8_t>(object.status_measurement) > 2) {
    return fail("status_measurement", static_cast<uint8_t>(object.status_measurement));
  }
  if (static_cast<uint8_t>(object.status_movement) > 1) {
    return fail("status_movement", static_cast<uint8_t>(object.status_movement));
  }
  if (!std::isfinite(object.position_x)) return fail("position_x", object.position_x);
  if (!std::isfinite(object.position_y)) return fail("position_y", object.position_y);
  if (!std::isfinite(object.position_z)) return fail("position_z", object.position_z);
  if (!non_negative(object.position_std_x)) return fail("position_std_x", object.position_std_x);
  if (!non_negative(object.position_std_y)) return fail("position_std_y", object.position_std_y);
  if (!non_negative(object.position_std_z)) return fail("position_std_z", object.position_std_z);
  if (!valid_angle_pi(object.orientation_yaw)) {
    return fail("orientation_yaw", object.orientation_yaw);
  }
  if (!non_negative(object.orientation_yaw_std)) {
    return fail("orientation_yaw_std", object.orientation_yaw_std);
  }
  if (!std::isfinite(object.velocity_rel_x)) return fail("velocity_rel_x", object.velocity_rel_x);
  if (!std::isfinite(object.velocity_rel_y)) return fail("velocity_rel_y", object.velocity_rel_y);
  if (!non_negative(object.velocity_std_x)) return fail("velocity_std_x", object.velocity_std_x);
  if (!non_negative(object.velocity_std_y)) return fail("velocity_std_y", object.velocity_std_y);
  if (!std::isfinite(object.acceleration_rel_x)) {
    return fail("acceleration_rel_x", object.acceleration_rel_x);
  }
  if (!std::isfinite(object.acceleration_rel_y)) {
    return fail("acceleration_rel_y", object.acceleration_rel_y);
  }
  if (!non_negative(object.acceleration_std_x)) {
    return fail("acceleration_std_x", object.acceleration_std_x);
  }
  if (!non_negative(object.acceleration_std_y)) {
    return fail("acceleration_std_y", object.acceleration_std_y);
  }
  if (!std::isfinite(object.yaw_rate)) return fail("yaw_rate", object.yaw_rate);
  if (!non_negative(object.shape_length)) return fail("shape_length", object.shape_length);
  if (!non_negative(object.shape_width)) return fail("shape_width", object.shape_width);
  for (std::size_t i = 0; i < object.classification_probabilities.size(); ++i) {
    if (object.classification_probabilities[i] > 100) {
      return fail(
        "classification_probabilities[" + std::to_string(i) + "]",
        object.classification_probabilities[i]);
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate(const ObjectList & list)
{
  if (auto violation = validate(list.stamp)) return violation;
  if (list.objects.size() > max_objects) {
    return fail("objects.count", static_cast<double>(list.objects.size()));
  }
  std::unordered_set<uint32_t> ids;
  for (std::size_t i = 0; i < list.objects.size(); ++i) {
    if (!ids.insert(list.objects[i].id).second) {
      return fail("objects[" + std::to_string(i) + "].id", list.objects[i].id);
    }
    if (auto violation = validate(list.objects[i])) {
      violation->field = "objects[" + std::to_string(i) + "]." + violation->field;
      return violation;
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate(const MountingPose & mounting)
{
  if (!std::isfinite(mounting.longitudinal)) return fail("longitudinal", mounting.longitudinal);
  if (!std::isfinite(mounting.lateral)) return fail("lateral", mounting.lateral);
  if (!std::isfinite(mounting.vertical)) return fail("vertical", mounting.vertical);
  if (!valid_angle_pi(mounting.yaw)) return fail("yaw", mounting.yaw);
  if (!valid_angle_half_pi(mounting.pitch)) return fail("pitch", mounting.pitch);
  if (static_cast<uint8_t>(mounting.plug_orientation) > 1) {
    return fail("plug_orientation", static_cast<uint8_t>(mounting.plug_orientation));
  }
  return std::nullopt;
}

std::optional<Violation> validate(const VehicleDimensions & vehicle)
{
  if (!positive(vehicle.length)) return fail("length", vehicle.length);
  if (!positive(vehicle.width)) return fail("width", vehicle.width);
  if (!positive(vehicle.height)) return fail("height", vehicle.height);
  if (!positive(vehicle.wheelbase)) return fail("wheelbase", vehicle.wheelbase);
  if (vehicle.wheelbase > vehicle.length) return fail("wheelbase", vehicle.wheelbase);
  return std::nullopt;
}

std::optional<Violation> validate(const RadarParameters & radar)
{
  if (radar.max_detection_distance < 99 || radar.max_detection_distance > 1500) {
    return fail("max_detection_distance", radar.max_detection_distance);
  }
  if (static_cast<uint8_t>(radar.frequency_slot) > 2) {
    return fail("frequency_slot", static_cast<uint8_t>(radar.frequency_slot));
  }
  if (radar.cycle_time_ms < 50 || radar.cycle_time_ms > 100) {
    return fail("cycle_time_ms", radar.cycle_time_ms);
  }
  return std::nullopt;
}

std::optional<Violation> validate(const SensorStatus & status)
{
  if (auto violation = validate(status.stamp)) return violation;
  if (auto violation = validate(status.mounting)) {
    violation->field = "mounting." + violation->field;
    return violation;
  }
  if (auto violation = validate(status.vehicle)) {
    violation->field = "vehicle." + violation->field;
    return violation;
  }
  if (auto violation = validate(status.radar)) {
    violation->field = "radar." + violation->field;
    return violation;
  }
  if (static_cast<uint8_t>(status.blockage) > 2) {
    return fail("blockage", static_cast<uint8_t>(status.blockage));
  }
  return std::nullopt;
}

std::optional<Violation> validate(const SensorConfiguration & configuration)
{
  if (!configuration.any_group_present()) {
    return fail("presence", 0);
  }
  if (configuration.mounting) {
    if (auto violation = validate(*configuration.mounting)) {
      violation->field = "mounting." + violation->field;
      return violation;
    }
  }
  if (configuration.vehicle) {
    if (auto violation = validate(*configuration.vehicle)) {
      violation->field = "vehicle." + violation->field;
      return violation;
    }
  }
  if (configuration.radar) {
    if (auto violation = validate(*configuration.radar)) {
      violation->field = "radar." + violation->field;
      return violation;
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate(const Frame & frame)
{
  return std::visit([](const auto & payload) { return validate(payload); }, frame.payload);
}

}  // namespace ars548
