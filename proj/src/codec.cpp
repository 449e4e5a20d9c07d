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

#include "codec.hpp"

#include <bit>
#include <cassert>
#include <cstdio>

namespace ars548
{

namespace
{

class ByteReader
{
public:
  explicit ByteReader(ByteView data) : data_(data) {}

  uint8_t u8() { return data_[offset_++]; }

  int8_t i8() { return static_cast<int8_t>(u8()); }

  uint16_t u16()
  {
    const uint16_t hi = u8();
    return static_cast<uint16_t>(hi << 8 | u8());
  }

  uint32_t u32()
  {
    const uint32_t hi = u16();
    return hi << 16 | u16();
  }

  float f32() { return std::bit_cast<float>(u32()); }

  Timestamp stamp()
  {
    Timestamp out;
    out.seconds = u32();
    out.nanoseconds = u32();
    out.sync_status = static_cast<SyncStatus>(u8());
    return out;
  }

  std::size_t offset() const { return offset_; }

private:
  ByteView data_;
  std::size_t offset_{};
};

class ByteWriter
{
public:
  void u8(uint8_t v) { out_.push_back(v); }

  void i8(int8_t v) { u8(static_cast<uint8_t>(v)); }

  void u16(uint16_t v)
  {
    u8(static_cast<uint8_t>(v >> 8));
    u8(static_cast<uint8_t>(v));
  }

  void u32(uint32_t v)
  {
    u16(static_cast<uint16_t>(v >> 16));
    u16(static_cast<uint16_t>(v));
  }

  void f32(float v) { u32(std::bit_cast<uint32_t>(v)); }

  void stamp(const Timestamp & v)
  {
    u32(v.seconds);
    u32(v.nanoseconds);
    u8(static_cast<uint8_t>(v.sync_status));
  }

  Bytes take() { return std::move(out_); }

  std::size_t size() const { return out_.size(); }

private:
  Bytes out_;
};

constexpr std::size_t mounting_group_size = 21;
constexpr std::size_t vehicle_group_size = 16;
constexpr std::size_t radar_group_size = 9;
constexpr std::size_t new_ip_group_size = 4;

constexpr uint8_t presence_mounting = 0x01;
constexpr uint8_t presence_vehicle = 0x02;
constexpr uint8_t presence_radar = 0x04;
constexpr uint8_t presence_new_ip = 0x08;

WireError from_violation(const Violation & violation)
{
  return WireError::field_range(violation.field, violation.value);
}

// Exact-size gate shared by the fixed-layout payload decoders: short input
// is truncation, long input is a length lie.
std::optional<WireError> expect_payload_size(std::size_t expected, std::size_t actual)
{
  if (actual < expected) {
    return WireError::truncated(expected, actual);
  }
  if (actual > expected) {
    return WireError::bad_length(expected, actual);
  }
  return std::nullopt;
}

Detection read_detection(ByteReader & reader)
{
  Detection d;
  d.azimuth = reader.f32();
  d.azimuth_std = reader.f32();
  d.elevation = reader.f32();
  d.elevation_std = reader.f32();
  d.range = reader.f32();
  d.range_std = reader.f32();
  d.range_rate = reader.f32();
  d.range_rate_std = reader.f32();
  d.rcs = reader.i8();
  d.invalid_flags = reader.u8();
  d.measurement_id = reader.u16();
  d.object_id = reader.u16();
  d.classification = static_cast<Classification>(reader.u8());
  return d;
}

void write_detection(ByteWriter & writer, const Detection & d)
{
  writer.f32(d.azimuth);
  writer.f32(d.azimuth_std);
  writer.f32(d.elevation);
  writer.f32(d.elevation_std);
  writer.f32(d.range);
  writer.f32(d.range_std);
  writer.f32(d.range_rate);
  writer.f32(d.range_rate_std);
  writer.i8(d.rcs);
  writer.u8(d.invalid_flags);
  writer.u16(d.measurement_id);
  writer.u16(d.object_id);
  writer.u8(static_cast<uint8_t>(d.classification));
}

TrackedObject read_object(ByteReader & reader)
{
  TrackedObject o;
  o.id = reader.u32();
  o.age = reader.u16();
  o.status_measurement = static_cast<MeasurementStatus>(reader.u8());
  o.status_movement = static_cast<MovementStatus>(reader.u8());
  o.position_x = reader.f32();
  o.position_y = reader.f32();
  o.position_z = reader.f32();
  o.position_std_x = reader.f32();
  o.position_std_y = reader.f32();
  o.position_std_z = reader.f32();
  o.orientation_yaw = reader.f32();
  o.orientation_yaw_std = reader.f32();
  o.velocity_rel_x = reader.f32();
  o.velocity_rel_y = reader.f32();
  o.velocity_std_x = reader.f32();
  o.velocity_std_y = reader.f32();
  o.acceleration_rel_x = reader.f32();
  o.acceleration_rel_y = reader.f32();
  o.acceleration_std_x = reader.f32();
  o.acceleration_std_y = reader.f32();
  o.yaw_rate = reader.f32();
  o.shape_length = reader.f32();
  o.shape_width = reader.f32();
  for (auto & probability : o.classification_probabilities) {
    probability = reader.u8();
  }
  return o;
}

void write_object(ByteWriter & writer, const TrackedObject & o)
{
  writer.u32(o.id);
  writer.u16(o.age);
  writer.u8(static_cast<uint8_t>(o.status_measurement));
  writer.u8(static_cast<uint8_t>(o.status_movement));
  writer.f32(o.position_x);
  writer.f32(o.position_y);
  writer.f32(o.position_z);
  writer.f32(o.position_std_x);
  writer.f32(o.position_std_y);
  writer.f32(o.position_std_z);
  writer.f32(o.orientation_yaw);
  writer.f32(o.orientation_yaw_std);
  writer.f32(o.velocity_rel_x);
  writer.f32(o.velocity_rel_y);
  writer.f32(o.velocity_std_x);
  writer.f32(o.velocity_std_y);
  writer.f32(o.acceleration_rel_x);
  writer.f32(o.acceleration_rel_y);
  writer.f32(o.acceleration_std_x);
  writer.f32(o.acceleration_std_y);
  writer.f32(o.yaw_rate);
  writer.f32(o.shape_length);
  writer.f32(o.shape_width);
  for (const auto probability : o.classification_probabilities) {
    writer.u8(probability);
  }
}

MountingPose read_mounting(ByteReader & reader)
{
  MountingPose m;
  m.longitudinal = reader.f32();
  m.lateral = reader.f32();
  m.vertical = reader.f32();
  m.yaw = reader.f32();
  m.pitch = reader.f32();
  m.plug_orientation = static_cast<PlugOrientation>(reader.u8());
  return m;
}

void write_mounting(ByteWriter & writer, const MountingPose & m)
{
  writer.f32(m.longitudinal);
  writer.f32(m.lateral);
  writer.f32(m.vertical);
  writer.f32(m.yaw);
  writer.f32(m.pitch);
  writer.u8(static_cast<uint8_t>(m.plug_orientation));
}

VehicleDimensions read_vehicle(ByteReader & reader)
{
  VehicleDimensions v;
  v.length = reader.f32();
  v.width = reader.f32();
  v.height = reader.f32();
  v.wheelbase = reader.f32();
  return v;
}

void write_vehicle(ByteWriter & writer, const VehicleDimensions & v)
{
  writer.f32(v.length);
  writer.f32(v.width);
  writer.f32(v.height);
  writer.f32(v.wheelbase);
}

RadarParameters read_radar(ByteReader & reader)
{
  RadarParameters r;
  r.max_detection_distance = reader.u16();
  r.frequency_slot = static_cast<FrequencySlot>(reader.u8());
  r.cycle_time_ms = reader.u8();
  r.sensor_ipv4 = reader.u32();
  r.powersave_standstill = reader.u8() != 0;
  return r;
}

void write_radar(ByteWriter & writer, const RadarParameters & r)
{
  writer.u16(r.max_detection_distance);
  writer.u8(static_cast<uint8_t>(r.frequency_slot));
  writer.u8(r.cycle_time_ms);
  writer.u32(r.sensor_ipv4);
  writer.u8(r.powersave_standstill ? 1 : 0);
}

Bytes encode_payload(const DetectionList & list)
{
  ByteWriter writer;
  writer.stamp(list.stamp);
  writer.u32(list.sequence_counter);
  writer.f32(list.origin_x);
  writer.f32(list.origin_y);
  writer.f32(list.origin_z);
  writer.u32(static_cast<uint32_t>(list.detections.size()));
  for (const auto & detection : list.detections) {
    write_detection(writer, detection);
  }
  return writer.take();
}

Bytes encode_payload(const ObjectList & list)
{
  ByteWriter writer;
  writer.stamp(list.stamp);
  writer.u32(list.sequence_counter);
  writer.u32(static_cast<uint32_t>(list.objects.size()));
  for (const auto & object : list.objects) {
    write_object(writer, object);
  }
  return writer.take();
}

Bytes encode_payload(const SensorStatus & status)
{
  ByteWriter writer;
  writer.stamp(status.stamp);
  writer.u8(status.software_version_major);
  writer.u8(status.software_version_minor);
  writer.u8(status.software_version_patch);
  write_mounting(writer, status.mounting);
  write_vehicle(writer, status.vehicle);
  write_radar(writer, status.radar);
  writer.u8(static_cast<uint8_t>(status.blockage));
  writer.u8(status.defective ? 1 : 0);
  return writer.take();
}

Bytes frame_bytes(uint16_t method, Bytes payload)
{
  ByteWriter writer;
  writer.u16(0);  // service_id
  writer.u16(method);
  writer.u32(static_cast<uint32_t>(payload.size()));
  writer.u16(crc16_ccitt_false(payload));
  Bytes out = writer.take();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

}  // namespace

WireError WireError::truncated(uint64_t expected, uint64_t got)
{
  WireError e;
  e.kind = Kind::truncated;
  e.expected = expected;
  e.got = got;
  return e;
}

WireError WireError::unknown_method(uint16_t method)
{
  WireError e;
  e.kind = Kind::unknown_method;
  e.method = method;
  return e;
}

WireError WireError::bad_crc(uint16_t expected, uint16_t got)
{
  WireError e;
  e.kind = Kind::bad_crc;
  e.expected = expected;
  e.got = got;
  return e;
}

WireError WireError::bad_length(uint64_t expected, uint64_t got)
{
  WireError e;
  e.kind = Kind::bad_length;
  e.expected = expected;
  e.got = got;
  return e;
}

WireError WireError::field_range(std::string field, double value)
{
  WireError e;
  e.kind = Kind::field_range;
  e.field = std::move(field);
  e.value = value;
  return e;
}

WireError WireError::count_overflow(uint64_t declared, uint64_t maximum)
{
  WireError e;
  e.kind = Kind::count_overflow;
  e.expected = maximum;
  e.got = declared;
  return e;
}

const char * wire_error_kind_name(WireError::Kind kind)
{
  switch (kind) {
    case WireError::Kind::truncated:
      return "truncated";
    case WireError::Kind::unknown_method:
      return "unknown_method";
    case WireError::Kind::bad_crc:
      return "bad_crc";
    case WireError::Kind::bad_length:
      return "bad_length";
    case WireError::Kind::field_range:
      return "field_range";
    case WireError::Kind::count_overflow:
      return "count_overflow";
  }
  return "unknown";
}

std::string WireError::to_string() const
{
  char buf[160];
  switch (kind) {
    case Kind::truncated:
      std::snprintf(
        buf, sizeof(buf), "truncated: expected %llu bytes, got %llu",
        static_cast<unsigned long long>(expected), static_cast<unsigned long long>(got));
      break;
    case Kind::unknown_method:
      std::snprintf(buf, sizeof(buf), "unknown method id %u", method);
      break;
    case Kind::bad_crc:
      std::snprintf(
        buf, sizeof(buf), "crc mismatch: header 0x%04llX, computed 0x%04llX",
        static_cast<unsigned long long>(expected), static_cast<unsigned long long>(got));
      break;
    case Kind::bad_length:
      std::snprintf(
        buf, sizeof(buf), "length mismatch: declared %llu bytes, actual %llu",
        static_cast<unsigned long long>(expected), static_cast<unsigned long long>(got));
      break;
    case Kind::field_range:
      std::snprintf(buf, sizeof(buf), "field %s out of range: %g", field.c_str(), value);
      break;
    case Kind::count_overflow:
      std::snprintf(
        buf, sizeof(buf), "count %llu exceeds maximum %llu",
        static_cast<unsigned long long>(got), static_cast<unsigned long long>(expected));
      break;
  }
  return buf;
}

uint16_t crc16_ccitt_false(ByteView data)
{
  uint16_t crc = 0xFFFF;
  for (const uint8_t byte : data) {
    crc ^= static_cast<uint16_t>(byte) << 8;
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 0x8000) ? static_cast<uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<uint16_t>(crc << 1);
    }
  }
  return crc;
}

Result<uint16_t> peek_method(ByteView bytes)
{
  if (bytes.size() < header_size) {
    return WireError::truncated(header_size, bytes.size());
  }
  return static_cast<uint16_t>(static_cast<uint16_t>(bytes[2]) << 8 | bytes[3]);
}

namespace
{

struct ParsedHeader
{
  uint16_t service_id;
  uint16_t method_id;
  ByteView payload;
};

Result<ParsedHeader> check_header(ByteView bytes)
{
  if (bytes.size() < header_size) {
    return WireError::truncated(header_size, bytes.size());
  }
  ByteReader reader(bytes);
  const uint16_t service_id = reader.u16();
  const uint16_t method_id = reader.u16();
  const uint32_t declared_length = reader.u32();
  const uint16_t header_crc = reader.u16();

  if (service_id != 0) {
    return WireError::field_range("service_id", service_id);
  }
  const ByteView payload = bytes.subspan(header_size);
  if (declared_length != payload.size()) {
    return WireError::bad_length(declared_length, payload.size());
  }
  const uint16_t computed_crc = crc16_ccitt_false(payload);
  if (computed_crc != header_crc) {
    return WireError::bad_crc(header_crc, computed_crc);
  }
  return ParsedHeader{service_id, method_id, payload};
}

}  // namespace

Result<Frame> decode_frame(ByteView bytes, RecvTime recv_time, Endpoint source)
{
  auto header = check_header(bytes);
  if (!header) {
    return header.error();
  }

  Frame frame;
  frame.recv_time = recv_time;
  frame.source = source;

  switch (header.value().method_id) {
    case method_status: {
      auto status = decode_status(header.value().payload);
      if (!status) return status.error();
      frame.payload = std::move(status.value());
      return frame;
    }
    case method_object_list: {
      auto objects = decode_object_list(header.value().payload);
      if (!objects) return objects.error();
      frame.payload = std::move(objects.value());
      return frame;
    }
    case method_detection_list: {
      auto detections = decode_detection_list(header.value().payload);
      if (!detections) return detections.error();
      frame.payload = std::move(detections.value());
      return frame;
    }
    default:
      // 390 lands here too: configuration is a write-path message and never
      // a receivable Frame.
      return WireError::unknown_method(header.value().method_id);
  }
}

Result<Bytes> encode_frame(const Frame & frame)
{
  if (const auto * list = std::get_if<DetectionList>(&frame.payload)) {
    if (list->detections.size() > max_detections) {
      return WireError::count_overflow(list->detections.size(), max_detections);
    }
    if (auto violation = validate(*list)) {
      return from_violation(*violation);
    }
    return frame_bytes(method_detection_list, encode_payload(*list));
  }
  if (const auto * list = std::get_if<ObjectList>(&frame.payload)) {
    if (list->objects.size() > max_objects) {
      return WireError::count_overflow(list->objects.size(), max_objects);
    }
    if (auto violation = validate(*list)) {
      return from_violation(*violation);
    }
    return frame_bytes(method_object_list, encode_payload(*list));
  }
  const auto & status = std::get<SensorStatus>(frame.payload);
  if (auto violation = validate(status)) {
    return from_violation(*violation);
  }
  return frame_bytes(method_status, encode_payload(status));
}

Result<DetectionList> decode_detection_list(ByteView payload)
{
  if (payload.size() < detection_list_prefix_size) {
    return WireError::truncated(detection_list_prefix_size, payload.size());
  }

  ByteReader reader(payload);
  DetectionList list;
  list.stamp = reader.stamp();
  list.sequence_counter = reader.u32();
  list.origin_x = reader.f32();
  list.origin_y = reader.f32();
  list.origin_z = reader.f32();
  const uint32_t count = reader.u32();

  if (count > max_detections) {
    return WireError::count_overflow(count, max_detections);
  }
  const std::size_t expected = detection_list_prefix_size + count * detection_record_size;
  if (auto error = expect_payload_size(expected, payload.size())) {
    return *error;
  }

  list.detections.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    list.detections.push_back(read_detection(reader));
  }
  if (auto violation = validate(list)) {
    return from_violation(*violation);
  }
  return list;
}

Result<ObjectList> decode_object_list(ByteView payload)
{
  if (payload.size() < object_list_prefix_size) {
    return WireError::truncated(object_list_prefix_size, payload.size());
  }

  ByteReader reader(payload);
  ObjectList list;
  list.stamp = reader.stamp();
  list.sequence_counter = reader.u32();
  const uint32_t count = reader.u32();

  if (count > max_objects) {
    return WireError::count_overflow(count, max_objects);
  }
  const std::size_t expected = object_list_prefix_size + count * object_record_size;
  if (auto error = expect_payload_size(expected, payload.size())) {
    return *error;
  }

  list.objects.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    list.objects.push_back(read_object(reader));
  }
  if (auto violation = validate(list)) {
    return from_violation(*violation);
  }
  return list;
}

Result<SensorStatus> decode_status(ByteView payload)
{
  if (auto error = expect_payload_size(status_payload_size, payload.size())) {
    return *error;
  }

  ByteReader reader(payload);
  SensorStatus status;
  status.stamp = reader.stamp();
  status.software_version_major = reader.u8();
  status.software_version_minor = reader.u8();
  status.software_version_patch = reader.u8();
  status.mounting = read_mounting(reader);
  status.vehicle = read_vehicle(reader);
  status.radar = read_radar(reader);
  status.blockage = static_cast<Blockage>(reader.u8());
  const uint8_t defective = reader.u8();
  if (defective > 1) {
    return WireError::field_range("defective", defective);
  }
  status.defective = defective != 0;

  // Validate the groups directly so the reported field names match the wire
  // fields (no group prefix).
  if (auto violation = validate(status.stamp)) return from_violation(*violation);
  if (auto violation = validate(status.mounting)) return from_violation(*violation);
  if (auto violation = validate(status.vehicle)) return from_violation(*violation);
  if (auto violation = validate(status.radar)) return from_violation(*violation);
  if (static_cast<uint8_t>(status.blockage) > 2) {
    return WireError::field_range("blockage", static_cast<uint8_t>(status.blockage));
  }
  return status;
}

Result<SensorConfiguration> decode_configuration(ByteView payload)
{
  if (payload.empty()) {
    return WireError::truncated(1, 0);
  }
  const uint8_t mask = payload[0];
  if (mask == 0 || (mask & ~uint8_t{0x0F}) != 0) {
    return WireError::field_range("presence_bitmask", mask);
  }

  std::size_t expected = 1;
  if (mask & presence_mounting) expected += mounting_group_size;
  if (mask & presence_vehicle) expected += vehicle_group_size;
  if (mask & presence_radar) expected += radar_group_size;
  if (mask & presence_new_ip) expected += new_ip_group_size;
  if (auto error = expect_payload_size(expected, payload.size())) {
    return *error;
  }

  ByteReader reader(payload);
  reader.u8();  // bitmask
  SensorConfiguration configuration;
  if (mask & presence_mounting) {
    configuration.mounting = read_mounting(reader);
    if (auto violation = validate(*configuration.mounting)) {
      return from_violation(*violation);
    }
  }
  if (mask & presence_vehicle) {
    configuration.vehicle = read_vehicle(reader);
    if (auto violation = validate(*configuration.vehicle)) {
      return from_violation(*violation);
    }
  }
  if (mask & presence_radar) {
    configuration.radar = read_radar(reader);
    if (auto violation = validate(*configuration.radar)) {
      return from_violation(*violation);
    }
  }
  if (mask & presence_new_ip) {
    configuration.new_sensor_ipv4 = reader.u32();
  }
  return configuration;
}

Result<Bytes> encode_configuration(const SensorConfiguration & configuration)
{
  if (auto violation = validate(configuration)) {
    return from_violation(*violation);
  }

  ByteWriter writer;
  uint8_t mask = 0;
  if (configuration.mounting) mask |= presence_mounting;
  if (configuration.vehicle) mask |= presence_vehicle;
  if (configuration.radar) mask |= presence_radar;
  if (configuration.new_sensor_ipv4) mask |= presence_new_ip;
  writer.u8(mask);
  if (configuration.mounting) write_mounting(writer, *configuration.mounting);
  if (configuration.vehicle) write_vehicle(writer, *configuration.vehicle);
  if (configuration.radar) write_radar(writer, *configuration.radar);
  if (configuration.new_sensor_ipv4) writer.u32(*configuration.new_sensor_ipv4);

  return frame_bytes(method_configuration, writer.take());
}

Result<SensorConfiguration> decode_configuration_frame(ByteView bytes)
{
  auto header = check_header(bytes);
  if (!header) {
    return header.error();
  }
  if (header.value().method_id != method_configuration) {
    return WireError::unknown_method(header.value().method_id);
  }
  return decode_configuration(header.value().payload);
}

}  // namespace ars548
