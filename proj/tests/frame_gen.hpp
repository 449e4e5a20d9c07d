// Deterministic generators for structurally valid model values. Test-only;
// independent of the codec and simulator generators.

#pragma once

#include "model.hpp"

#include <algorithm>
#include <random>

namespace ars548::testgen
{

class Gen
{
public:
  explicit Gen(uint64_t seed) : rng_(seed) {}

  uint32_t u32() { return static_cast<uint32_t>(rng_()); }
  uint16_t u16() { return static_cast<uint16_t>(rng_()); }
  uint8_t u8(uint8_t max_inclusive)
  {
    return static_cast<uint8_t>(std::uniform_int_distribution<int>(0, max_inclusive)(rng_));
  }
  std::size_t index(std::size_t max_inclusive)
  {
    return std::uniform_int_distribution<std::size_t>(0, max_inclusive)(rng_);
  }
  float uniform(float lo, float hi)
  {
    return std::uniform_real_distribution<float>(lo, hi)(rng_);
  }
  float non_negative(float hi) { return uniform(0.f, hi); }

  Timestamp timestamp()
  {
    Timestamp stamp;
    stamp.seconds = u32();
    stamp.nanoseconds = static_cast<uint32_t>(index(999'999'999));
    stamp.sync_status = static_cast<SyncStatus>(1 + u8(2));
    return stamp;
  }

  Detection detection()
  {
    Detection d;
    d.azimuth = uniform(-3.14f, 3.14f);
    d.azimuth_std = non_negative(0.1f);
    d.elevation = uniform(-1.5f, 1.5f);
    d.elevation_std = non_negative(0.1f);
    d.range = non_negative(300.f);
    d.range_std = non_negative(1.f);
    d.range_rate = uniform(-100.f, 100.f);
    d.range_rate_std = non_negative(1.f);
    d.rcs = static_cast<int8_t>(rng_());
    d.invalid_flags = u8(7);
    d.measurement_id = u16();
    d.object_id = u16();
    d.classification = static_cast<Classification>(u8(7));
    return d;
  }

  TrackedObject object(uint32_t id)
  {
    TrackedObject o;
    o.id = id;
    o.age = u16();
    o.status_measurement = static_cast<MeasurementStatus>(u8(2));
    o.status_movement = static_cast<MovementStatus>(u8(1));
    o.position_x = uniform(-200.f, 200.f);
    o.position_y = uniform(-200.f, 200.f);
    o.position_z = uniform(-5.f, 5.f);
    o.position_std_x = non_negative(1.f);
    o.position_std_y = non_negative(1.f);
    o.position_std_z = non_negative(1.f);
    o.orientation_yaw = uniform(-3.14f, 3.14f);
    o.orientation_yaw_std = non_negative(0.2f);
    o.velocity_rel_x = uniform(-60.f, 60.f);
    o.velocity_rel_y = uniform(-60.f, 60.f);
    o.velocity_std_x = non_negative(1.f);
    o.velocity_std_y = non_negative(1.f);
    o.acceleration_rel_x = uniform(-10.f, 10.f);
    o.acceleration_rel_y = uniform(-10.f, 10.f);
    o.acceleration_std_x = non_negative(1.f);
    o.acceleration_std_y = non_negative(1.f);
    o.yaw_rate = uniform(-1.f, 1.f);
    o.shape_length = non_negative(20.f);
    o.shape_width = non_negative(3.f);
    for (auto & probability : o.classification_probabilities) {
      probability = u8(100);
    }
    return o;
  }

  DetectionList detection_list(std::size_t count)
  {
    DetectionList list;
    list.stamp = timestamp();
    list.sequence_counter = u32();
    list.origin_x = uniform(-2.f, 2.f);
    list.origin_y = uniform(-2.f, 2.f);
    list.origin_z = uniform(-2.f, 2.f);
    list.detections.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      list.detections.push_back(detection());
    }
    return list;
  }

  ObjectList object_list(std::size_t count)
  {
    ObjectList list;
    list.stamp = timestamp();
    list.sequence_counter = u32();
    list.objects.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      // Distinct ids by construction.
      list.objects.push_back(object(static_cast<uint32_t>(i * 7919 + 1)));
    }
    return list;
  }

  MountingPose mounting()
  {
    MountingPose m;
    m.longitudinal = uniform(-5.f, 5.f);
    m.lateral = uniform(-2.f, 2.f);
    m.vertical = uniform(0.f, 3.f);
    m.yaw = uniform(-3.14f, 3.14f);
    m.pitch = uniform(-1.5f, 1.5f);
    m.plug_orientation = static_cast<PlugOrientation>(u8(1));
    return m;
  }

  VehicleDimensions vehicle()
  {
    VehicleDimensions v;
    v.length = uniform(2.f, 20.f);
    v.width = uniform(1.f, 3.f);
    v.height = uniform(1.f, 4.f);
    v.wheelbase = uniform(1.f, v.length);
    return v;
  }

  RadarParameters radar()
  {
    RadarParameters r;
    r.max_detection_distance = static_cast<uint16_t>(99 + index(1500 - 99));
    r.frequency_slot = static_cast<FrequencySlot>(u8(2));
    r.cycle_time_ms = static_cast<uint8_t>(50 + index(50));
    r.sensor_ipv4 = u32();
    r.powersave_standstill = u8(1) != 0;
    return r;
  }

  SensorStatus status()
  {
    SensorStatus s;
    s.stamp = timestamp();
    s.software_version_major = u8(255);
    s.software_version_minor = u8(255);
    s.software_version_patch = u8(255);
    s.mounting = mounting();
    s.vehicle = vehicle();
    s.radar = radar();
    s.blockage = static_cast<Blockage>(u8(2));
    s.defective = u8(1) != 0;
    return s;
  }

  Frame frame_of_kind(FrameKind kind, std::size_t max_records = 40)
  {
    Frame frame;
    frame.recv_time = RecvTime{u32(), u32()};
    frame.source = Endpoint{u32(), u16()};
    switch (kind) {
      case FrameKind::status:
        frame.payload = status();
        break;
      case FrameKind::object_list:
        frame.payload = object_list(index(std::min(max_records, max_objects)));
        break;
      case FrameKind::detection_list:
        frame.payload = detection_list(index(std::min(max_records, max_detections)));
        break;
    }
    return frame;
  }

  std::mt19937_64 & engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

}  // namespace ars548::testgen
