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

#include "ars548/ars548.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstring>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cloud.hpp"
#include "codec.hpp"
#include "filter.hpp"
#include "model.hpp"
#include "recorder.hpp"
#include "scenario.hpp"
#include "sim.hpp"
#include "transport.hpp"

namespace
{

thread_local std::string g_last_error;

int fail(int code, std::string message)
{
  g_last_error = std::move(message);
  return code;
}

template <typename T>
T * fail_null(std::string message)
{
  g_last_error = std::move(message);
  return nullptr;
}

int fail_wire(const ars548::WireError & error)
{
  return fail(ARS548_ERR_DECODE, error.to_string());
}

constexpr const char * null_handle = "null handle";

}  // namespace

/* Opaque handle definitions. Each wraps exactly one core object, plus any
 * storage the C view functions need to keep alive between calls. */

struct ars548_frame
{
  ars548::Frame value;
};

struct ars548_filter
{
  ars548::ObjectPredicate predicate;
};

struct ars548_cloud
{
  ars548::PointCloud value;
};

struct ars548_jsonl
{
  ars548::JsonlWriter writer;
};

struct ars548_receiver
{
  ars548::Receiver receiver;
  std::string stats_text;
  ars548_raw_sink sink{nullptr};
  void * sink_user{nullptr};
};

struct ars548_config
{
  ars548::SensorConfiguration value;
};

struct ars548_log_writer
{
  ars548::LogWriter writer;
};

struct ars548_log_reader
{
  ars548::LogReader reader;
  ars548::LogRecord current;
};

struct ars548_stop
{
  std::atomic<bool> flag{false};
};

struct ars548_scenario
{
  ars548::Scenario value;
};

struct ars548_sim
{
  explicit ars548_sim(ars548::Scenario scenario) : sim(std::move(scenario)) {}

  ars548::Simulator sim;
};

extern "C" {

/* ------------------------------------------------------------------ */
/* Errors and library info                                            */

const char * ars548_last_error(void)
{
  return g_last_error.c_str();
}

const char * ars548_version(void)
{
  return "1.0.0";
}

const char * ars548_config_outcome_name(int outcome)
{
  switch (outcome) {
    case ARS548_CONFIG_CONFIRMED:
      return "CONFIRMED";
    case ARS548_CONFIG_UNCONFIRMED:
      return "UNCONFIRMED";
    case ARS548_CONFIG_MISMATCH:
      return "MISMATCH";
    default:
      return "INVALID";
  }
}

/* ------------------------------------------------------------------ */
/* Address helpers                                                    */

int ars548_ipv4_parse(const char * text, uint32_t * out)
{
  if (text == nullptr || out == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  const auto parsed = ars548::parse_ipv4(text);
  if (!parsed) {
    return fail(
      ARS548_ERR_INVALID_ARGUMENT, "'" + std::string(text) + "' is not a dotted-quad address");
  }
  *out = *parsed;
  return ARS548_OK;
}

int ars548_ipv4_format(uint32_t ipv4, char * buf, size_t buf_size)
{
  if (buf == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  const std::string text = ars548::ipv4_to_string(ipv4);
  if (buf_size < text.size() + 1) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, "buffer too small for '" + text + "'");
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return ARS548_OK;
}

/* ------------------------------------------------------------------ */
/* Wire codec                                                         */

uint16_t ars548_crc16(const uint8_t * data, size_t size)
{
  if (data == nullptr && size > 0) {
    return 0;
  }
  return ars548::crc16_ccitt_false(ars548::ByteView(data, size));
}

int ars548_peek_method(const uint8_t * data, size_t size, uint16_t * method)
{
  if ((data == nullptr && size > 0) || method == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  auto peeked = ars548::peek_method(ars548::ByteView(data, size));
  if (!peeked.ok()) {
    return fail_wire(peeked.error());
  }
  *method = peeked.value();
  return ARS548_OK;
}

int ars548_frame_decode(
  const uint8_t * data, size_t size, uint64_t recv_wall_ns, uint64_t recv_mono_ns, uint32_t ipv4,
  uint16_t port, ars548_frame ** out)
{
  if ((data == nullptr && size > 0) || out == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  *out = nullptr;
  auto decoded = ars548::decode_frame(
    ars548::ByteView(data, size), ars548::RecvTime{recv_wall_ns, recv_mono_ns},
    ars548::Endpoint{ipv4, port});
  if (!decoded.ok()) {
    return fail_wire(decoded.error());
  }
  *out = new ars548_frame{std::move(decoded.value())};
  return ARS548_OK;
}

int ars548_frame_encode(const ars548_frame * frame, uint8_t * buf, size_t cap, size_t * written)
{
  if (frame == nullptr || buf == nullptr || written == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  auto encoded = ars548::encode_frame(frame->value);
  if (!encoded.ok()) {
    return fail_wire(encoded.error());
  }
  const ars548::Bytes & bytes = encoded.value();
  if (bytes.size() > cap) {
    *written = bytes.size();
    return fail(
      ARS548_ERR_INVALID_ARGUMENT,
      "encode needs " + std::to_string(bytes.size()) + " bytes, buffer holds " +
        std::to_string(cap));
  }
  std::memcpy(buf, bytes.data(), bytes.size());
  *written = bytes.size();
  return ARS548_OK;
}

void ars548_frame_free(ars548_frame * frame)
{
  delete frame;
}

/* ------------------------------------------------------------------ */
/* Frame accessors                                                    */

int ars548_frame_kind(const ars548_frame * frame)
{
  if (frame == nullptr) {
    fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
    return -1;
  }
  return static_cast<int>(frame->value.kind());
}

int ars548_frame_stamp(
  const ars548_frame * frame, uint32_t * seconds, uint32_t * nanoseconds, int * sync_status)
{
  if (frame == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  const ars548::Timestamp & stamp = frame->value.stamp();
  if (seconds != nullptr) {
    *seconds = stamp.seconds;
  }
  if (nanoseconds != nullptr) {
    *nanoseconds = stamp.nanoseconds;
  }
  if (sync_status != nullptr) {
    *sync_status = static_cast<int>(stamp.sync_status);
  }
  return ARS548_OK;
}

int ars548_frame_recv_time(const ars548_frame * frame, uint64_t * wall_ns, uint64_t * mono_ns)
{
  if (frame == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (wall_ns != nullptr) {
    *wall_ns = frame->value.recv_time.wall_ns;
  }
  if (mono_ns != nullptr) {
    *mono_ns = frame->value.recv_time.mono_ns;
  }
  return ARS548_OK;
}

int ars548_frame_source(const ars548_frame * frame, uint32_t * ipv4, uint16_t * port)
{
  if (frame == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (ipv4 != nullptr) {
    *ipv4 = frame->value.source.ipv4;
  }
  if (port != nullptr) {
    *port = frame->value.source.port;
  }
  return ARS548_OK;
}

int ars548_frame_sequence(const ars548_frame * frame, uint32_t * sequence)
{
  if (frame == nullptr || sequence == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (const auto * objects = std::get_if<ars548::ObjectList>(&frame->value.payload)) {
    *sequence = objects->sequence_counter;
    return ARS548_OK;
  }
  if (const auto * detections = std::get_if<ars548::DetectionList>(&frame->value.payload)) {
    *sequence = detections->sequence_counter;
    return ARS548_OK;
  }
  return fail(ARS548_ERR_INVALID_ARGUMENT, "status frames carry no sequence counter");
}

size_t ars548_frame_detection_count(const ars548_frame * frame)
{
  if (frame == nullptr) {
    return 0;
  }
  const auto * list = std::get_if<ars548::DetectionList>(&frame->value.payload);
  return list != nullptr ? list->detections.size() : 0;
}

size_t ars548_frame_object_count(const ars548_frame * frame)
{
  if (frame == nullptr) {
    return 0;
  }
  const auto * list = std::get_if<ars548::ObjectList>(&frame->value.payload);
  return list != nullptr ? list->objects.size() : 0;
}

int ars548_frame_detection(const ars548_frame * frame, size_t index, ars548_detection * out)
{
  if (frame == nullptr || out == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  const auto * list = std::get_if<ars548::DetectionList>(&frame->value.payload);
  if (list == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, "frame is not a detection list");
  }
  if (index >= list->detections.size()) {
    return fail(
      ARS548_ERR_INVALID_ARGUMENT, "detection index " + std::to_string(index) +
                                      " out of range, count " +
                                      std::to_string(list->detections.size()));
  }
  const ars548::Detection & d = list->detections[index];
  *out = ars548_detection{
    d.azimuth,       d.azimuth_std,   d.elevation,      d.elevation_std,
    d.range,         d.range_std,     d.range_rate,     d.range_rate_std,
    d.rcs,           d.invalid_flags, d.measurement_id, d.object_id,
    static_cast<uint8_t>(d.classification)};
  return ARS548_OK;
}

int ars548_frame_object(const ars548_frame * frame, size_t index, ars548_object * out)
{
  if (frame == nullptr || out == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  const auto * list = std::get_if<ars548::ObjectList>(&frame->value.payload);
  if (list == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, "frame is not an object list");
  }
  if (index >= list->objects.size()) {
    return fail(
      ARS548_ERR_INVALID_ARGUMENT, "object index " + std::to_string(index) +
                                      " out of range, count " + std::to_string(list->objects.size()));
  }
  const ars548::TrackedObject & o = list->objects[index];
  ars548_object view{};
  view.id = o.id;
  view.age = o.age;
  view.status_measurement = static_cast<uint8_t>(o.status_measurement);
  view.status_movement = static_cast<uint8_t>(o.status_movement);
  view.position_x = o.position_x;
  view.position_y = o.position_y;
  view.position_z = o.position_z;
  view.position_std_x = o.position_std_x;
  view.position_std_y = o.position_std_y;
  view.position_std_z = o.position_std_z;
  view.orientation_yaw = o.orientation_yaw;
  view.orientation_yaw_std = o.orientation_yaw_std;
  view.velocity_rel_x = o.velocity_rel_x;
  view.velocity_rel_y = o.velocity_rel_y;
  view.velocity_std_x = o.velocity_std_x;
  view.velocity_std_y = o.velocity_std_y;
  view.acceleration_rel_x = o.acceleration_rel_x;
  view.acceleration_rel_y = o.acceleration_rel_y;
  view.acceleration_std_x = o.acceleration_std_x;
  view.acceleration_std_y = o.acceleration_std_y;
  view.yaw_rate = o.yaw_rate;
  view.shape_length = o.shape_length;
  view.shape_width = o.shape_width;
  std::copy(
    o.classification_probabilities.begin(), o.classification_probabilities.end(),
    view.classification_probabilities);
  *out = view;
  return ARS548_OK;
}

int ars548_frame_status(const ars548_frame * frame, ars548_status * out)
{
  if (frame == nullptr || out == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  const auto * status = std::get_if<ars548::SensorStatus>(&frame->value.payload);
  if (status == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, "frame is not a sensor status");
  }
  ars548_status view{};
  view.stamp_seconds = status->stamp.seconds;
  view.stamp_nanoseconds = status->stamp.nanoseconds;
  view.stamp_sync = static_cast<uint8_t>(status->stamp.sync_status);
  view.software_version_major = status->software_version_major;
  view.software_version_minor = status->software_version_minor;
  view.software_version_patch = status->software_version_patch;
  view.mounting_longitudinal = status->mounting.longitudinal;
  view.mounting_lateral = status->mounting.lateral;
  view.mounting_vertical = status->mounting.vertical;
  view.mounting_yaw = status->mounting.yaw;
  view.mounting_pitch = status->mounting.pitch;
  view.mounting_plug_orientation = static_cast<uint8_t>(status->mounting.plug_orientation);
  view.vehicle_length = status->vehicle.length;
  view.vehicle_width = status->vehicle.width;
  view.vehicle_height = status->vehicle.height;
  view.vehicle_wheelbase = status->vehicle.wheelbase;
  view.radar_max_detection_distance = status->radar.max_detection_distance;
  view.radar_frequency_slot = static_cast<uint8_t>(status->radar.frequency_slot);
  view.radar_cycle_time_ms = status->radar.cycle_time_ms;
  view.radar_sensor_ipv4 = status->radar.sensor_ipv4;
  view.radar_powersave_standstill = status->radar.powersave_standstill ? 1 : 0;
  view.blockage = static_cast<uint8_t>(status->blockage);
  view.defective = status->defective ? 1 : 0;
  *out = view;
  return ARS548_OK;
}

/* ------------------------------------------------------------------ */
/* Object filters                                                     */

ars548_filter * ars548_filter_compile(const char * expression)
{
  if (expression == nullptr) {
    return fail_null<ars548_filter>(null_handle);
  }
  ars548::CompiledFilter compiled = ars548::parse_object_filter(expression);
  if (!compiled.predicate) {
    return fail_null<ars548_filter>(compiled.error);
  }
  return new ars548_filter{std::move(*compiled.predicate)};
}

const char * ars548_filter_name(const ars548_filter * filter)
{
  if (filter == nullptr) {
    fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
    return "";
  }
  return filter->predicate.name.c_str();
}

void ars548_filter_free(ars548_filter * filter)
{
  delete filter;
}

int ars548_frame_filter_objects(
  const ars548_frame * frame, const ars548_filter * filter, ars548_frame ** out)
{
  if (frame == nullptr || filter == nullptr || out == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  ars548::Frame copy = frame->value;
  if (auto * list = std::get_if<ars548::ObjectList>(&copy.payload)) {
    *list = ars548::filter_objects(*list, filter->predicate);
  }
  *out = new ars548_frame{std::move(copy)};
  return ARS548_OK;
}

/* ------------------------------------------------------------------ */
/* Point clouds and exporters                                         */

int ars548_frame_to_cloud(const ars548_frame * frame, ars548_cloud ** out)
{
  if (frame == nullptr || out == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  *out = nullptr;
  if (const auto * detections = std::get_if<ars548::DetectionList>(&frame->value.payload)) {
    *out = new ars548_cloud{ars548::detections_to_cloud(*detections)};
    return ARS548_OK;
  }
  if (const auto * objects = std::get_if<ars548::ObjectList>(&frame->value.payload)) {
    *out = new ars548_cloud{ars548::objects_to_cloud(*objects)};
    return ARS548_OK;
  }
  return fail(ARS548_ERR_INVALID_ARGUMENT, "status frames do not convert to point clouds");
}

size_t ars548_cloud_point_count(const ars548_cloud * cloud)
{
  return cloud != nullptr ? cloud->value.points.size() : 0;
}

int ars548_cloud_point(const ars548_cloud * cloud, size_t index, ars548_point * out)
{
  if (cloud == nullptr || out == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (index >= cloud->value.points.size()) {
    return fail(
      ARS548_ERR_INVALID_ARGUMENT, "point index " + std::to_string(index) + " out of range, count " +
                                      std::to_string(cloud->value.points.size()));
  }
  const ars548::RadarPoint & p = cloud->value.points[index];
  *out = ars548_point{p.x, p.y, p.z, p.doppler, p.intensity, p.source_id};
  return ARS548_OK;
}

void ars548_cloud_free(ars548_cloud * cloud)
{
  delete cloud;
}

int ars548_cloud_write_csv(const ars548_cloud * cloud, const char * path)
{
  if (cloud == nullptr || path == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (auto error = ars548::write_csv(cloud->value, path)) {
    return fail(ARS548_ERR_IO, error->path + ": " + error->message);
  }
  return ARS548_OK;
}

int ars548_cloud_write_pcd(const ars548_cloud * cloud, const char * path)
{
  if (cloud == nullptr || path == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (auto error = ars548::write_pcd(cloud->value, path)) {
    return fail(ARS548_ERR_IO, error->path + ": " + error->message);
  }
  return ARS548_OK;
}

ars548_jsonl * ars548_jsonl_open(const char * path)
{
  if (path == nullptr) {
    return fail_null<ars548_jsonl>(null_handle);
  }
  auto * writer = new ars548_jsonl{};
  if (auto error = writer->writer.open(path)) {
    g_last_error = error->path + ": " + error->message;
    delete writer;
    return nullptr;
  }
  return writer;
}

int ars548_jsonl_write(ars548_jsonl * writer, const ars548_cloud * cloud)
{
  if (writer == nullptr || cloud == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (auto error = writer->writer.write(cloud->value)) {
    return fail(ARS548_ERR_IO, error->path + ": " + error->message);
  }
  return ARS548_OK;
}

uint64_t ars548_jsonl_lines_written(const ars548_jsonl * writer)
{
  return writer != nullptr ? writer->writer.lines_written() : 0;
}

int ars548_jsonl_close(ars548_jsonl * writer)
{
  if (writer == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (auto error = writer->writer.close()) {
    return fail(ARS548_ERR_IO, error->path + ": " + error->message);
  }
  return ARS548_OK;
}

void ars548_jsonl_free(ars548_jsonl * writer)
{
  delete writer;
}

/* ------------------------------------------------------------------ */
/* Receiving driver                                                   */

namespace
{

/// Builds the core transport config; 0-valued optionals become "absent".
std::optional<ars548::TransportConfig> to_transport(
  const ars548_receiver_config * config, std::string & error)
{
  if (config == nullptr) {
    error = null_handle;
    return std::nullopt;
  }
  if (
    config->stamp_policy != ARS548_STAMP_KEEP_ORIGINAL &&
    config->stamp_policy != ARS548_STAMP_OVERRIDE_LOCAL) {
    error = "stamp_policy must be 0 (keep original) or 1 (override local)";
    return std::nullopt;
  }
  ars548::TransportConfig out;
  out.listen_port = config->listen_port;
  out.multicast_group = config->multicast_group != 0
                          ? std::optional<uint32_t>(config->multicast_group)
                          : std::nullopt;
  out.interface_address = config->interface_ipv4 != 0
                            ? std::optional<uint32_t>(config->interface_ipv4)
                            : std::nullopt;
  out.sensor_address = config->sensor_ipv4;
  out.config_port = config->config_port;
  out.stamp_policy = static_cast<ars548::StampPolicy>(config->stamp_policy);
  out.receive_buffer_bytes = config->receive_buffer_bytes;
  if (auto invalid = ars548::validate_transport_config(out)) {
    error = *invalid;
    return std::nullopt;
  }
  return out;
}

}  // namespace

void ars548_receiver_config_default(ars548_receiver_config * config)
{
  if (config == nullptr) {
    return;
  }
  const ars548::TransportConfig defaults;
  config->listen_port = defaults.listen_port;
  config->multicast_group = defaults.multicast_group.value_or(0);
  config->interface_ipv4 = defaults.interface_address.value_or(0);
  config->sensor_ipv4 = defaults.sensor_address;
  config->config_port = defaults.config_port;
  config->stamp_policy = static_cast<int>(defaults.stamp_policy);
  config->receive_buffer_bytes = defaults.receive_buffer_bytes;
}

ars548_receiver * ars548_receiver_new(const ars548_receiver_config * config)
{
  std::string error;
  auto transport = to_transport(config, error);
  if (!transport) {
    return fail_null<ars548_receiver>(error);
  }
  auto * receiver = new ars548_receiver{};
  if (auto failure = receiver->receiver.open(*transport)) {
    g_last_error = *failure;
    delete receiver;
    return nullptr;
  }
  return receiver;
}

int ars548_receiver_poll(ars548_receiver * receiver, int timeout_ms, ars548_frame ** out)
{
  if (receiver == nullptr || out == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  *out = nullptr;
  const uint64_t errors_before = receiver->receiver.stats().frames_error_total();
  const std::string socket_error_before = receiver->receiver.last_error();
  auto frame = receiver->receiver.poll(timeout_ms);
  if (frame) {
    *out = new ars548_frame{std::move(*frame)};
    return ARS548_OK;
  }
  if (receiver->receiver.stats().frames_error_total() > errors_before) {
    return fail(ARS548_ERR_DECODE, "datagram rejected by the wire codec");
  }
  const std::string & socket_error = receiver->receiver.last_error();
  if (!socket_error.empty() && socket_error != socket_error_before) {
    return fail(ARS548_ERR_IO, socket_error);
  }
  g_last_error = "no datagram within the timeout";
  return ARS548_ERR_TIMEOUT;
}

int ars548_receiver_set_raw_sink(ars548_receiver * receiver, ars548_raw_sink sink, void * user)
{
  if (receiver == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  receiver->sink = sink;
  receiver->sink_user = user;
  if (sink == nullptr) {
    receiver->receiver.set_raw_sink({});
    return ARS548_OK;
  }
  receiver->receiver.set_raw_sink(
    [receiver](ars548::ByteView bytes, ars548::RecvTime recv_time, ars548::Endpoint source) {
      receiver->sink(
        bytes.data(), bytes.size(), recv_time.wall_ns, source.ipv4, source.port,
        receiver->sink_user);
    });
  return ARS548_OK;
}

uint64_t ars548_receiver_stat(const ars548_receiver * receiver, int selector)
{
  if (receiver == nullptr) {
    return 0;
  }
  const ars548::DriverStats & stats = receiver->receiver.stats();
  switch (selector) {
    case ARS548_STAT_DATAGRAMS:
      return stats.datagrams_received;
    case ARS548_STAT_BYTES:
      return stats.bytes_received;
    case ARS548_STAT_FRAMES_OK_TOTAL:
      return stats.frames_ok_total();
    case ARS548_STAT_FRAMES_ERROR_TOTAL:
      return stats.frames_error_total();
    case ARS548_STAT_SEQUENCE_GAPS:
      return stats.sequence_gaps;
    case ARS548_STAT_FRAMES_OK_STATUS:
      return stats.frames_ok[static_cast<std::size_t>(ars548::FrameKind::status)];
    case ARS548_STAT_FRAMES_OK_OBJECT_LIST:
      return stats.frames_ok[static_cast<std::size_t>(ars548::FrameKind::object_list)];
    case ARS548_STAT_FRAMES_OK_DETECTION_LIST:
      return stats.frames_ok[static_cast<std::size_t>(ars548::FrameKind::detection_list)];
    case ARS548_STAT_ERR_TRUNCATED:
    case ARS548_STAT_ERR_UNKNOWN_METHOD:
    case ARS548_STAT_ERR_BAD_CRC:
    case ARS548_STAT_ERR_BAD_LENGTH:
    case ARS548_STAT_ERR_FIELD_RANGE:
    case ARS548_STAT_ERR_COUNT_OVERFLOW:
      return stats.frames_error[static_cast<std::size_t>(selector - ARS548_STAT_ERR_TRUNCATED)];
    default:
      return 0;
  }
}

const char * ars548_receiver_stats_text(ars548_receiver * receiver)
{
  if (receiver == nullptr) {
    fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
    return "";
  }
  receiver->stats_text = receiver->receiver.stats().to_text();
  return receiver->stats_text.c_str();
}

void ars548_receiver_free(ars548_receiver * receiver)
{
  delete receiver;
}

/* ------------------------------------------------------------------ */
/* Configuration sender                                               */

ars548_config * ars548_config_new(void)
{
  return new ars548_config{};
}

int ars548_config_set_mounting(
  ars548_config * config, float longitudinal, float lateral, float vertical, float yaw,
  float pitch, int plug_orientation)
{
  if (config == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (plug_orientation != ARS548_PLUG_LEFT && plug_orientation != ARS548_PLUG_RIGHT) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, "plug_orientation must be 0 (left) or 1 (right)");
  }
  config->value.mounting = ars548::MountingPose{
    longitudinal, lateral,
    vertical,     yaw,
    pitch,        static_cast<ars548::PlugOrientation>(plug_orientation)};
  return ARS548_OK;
}

int ars548_config_set_vehicle(
  ars548_config * config, float length, float width, float height, float wheelbase)
{
  if (config == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  config->value.vehicle = ars548::VehicleDimensions{length, width, height, wheelbase};
  return ARS548_OK;
}

int ars548_config_set_radar(
  ars548_config * config, uint16_t max_detection_distance, int frequency_slot,
  uint8_t cycle_time_ms, uint32_t sensor_ipv4, int powersave_standstill)
{
  if (config == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (
    frequency_slot != ARS548_SLOT_LOW && frequency_slot != ARS548_SLOT_MID &&
    frequency_slot != ARS548_SLOT_HIGH) {
    return fail(
      ARS548_ERR_INVALID_ARGUMENT, "frequency_slot must be 0 (low), 1 (mid), or 2 (high)");
  }
  config->value.radar = ars548::RadarParameters{
    max_detection_distance, static_cast<ars548::FrequencySlot>(frequency_slot), cycle_time_ms,
    sensor_ipv4, powersave_standstill != 0};
  return ARS548_OK;
}

int ars548_config_set_new_ip(ars548_config * config, uint32_t sensor_ipv4)
{
  if (config == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  config->value.new_sensor_ipv4 = sensor_ipv4;
  return ARS548_OK;
}

void ars548_config_free(ars548_config * config)
{
  delete config;
}

int ars548_send_configuration(
  const ars548_receiver_config * transport, const ars548_config * config, int * outcome)
{
  if (transport == nullptr || config == nullptr || outcome == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  std::string error;
  auto core_transport = to_transport(transport, error);
  if (!core_transport) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, error);
  }
  // Client-side validation runs here so rejected requests report
  // ARS548_ERR_INVALID_ARGUMENT before anything touches the network.
  if (auto encoded = ars548::encode_configuration(config->value); !encoded.ok()) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, encoded.error().to_string());
  }
  auto result = ars548::send_configuration(*core_transport, config->value, error);
  if (!result) {
    return fail(ARS548_ERR_IO, error);
  }
  *outcome = static_cast<int>(*result);
  return ARS548_OK;
}

/* ------------------------------------------------------------------ */
/* Datagram logs                                                      */

ars548_log_writer * ars548_log_writer_open(const char * path)
{
  if (path == nullptr) {
    return fail_null<ars548_log_writer>(null_handle);
  }
  auto * writer = new ars548_log_writer{};
  if (auto error = writer->writer.open(path)) {
    g_last_error = error->to_string();
    delete writer;
    return nullptr;
  }
  return writer;
}

int ars548_log_writer_write(
  ars548_log_writer * writer, uint64_t recv_wall_ns, uint32_t source_ipv4, uint16_t source_port,
  const uint8_t * payload, size_t size)
{
  if (writer == nullptr || (payload == nullptr && size > 0)) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  ars548::LogRecord record;
  record.recv_wall_ns = recv_wall_ns;
  record.source = ars548::Endpoint{source_ipv4, source_port};
  record.payload.assign(payload, payload + size);
  if (auto error = writer->writer.write(record)) {
    return fail(ARS548_ERR_IO, error->to_string());
  }
  return ARS548_OK;
}

uint64_t ars548_log_writer_records(const ars548_log_writer * writer)
{
  return writer != nullptr ? writer->writer.records_written() : 0;
}

int ars548_log_writer_close(ars548_log_writer * writer)
{
  if (writer == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (auto error = writer->writer.close()) {
    return fail(ARS548_ERR_IO, error->to_string());
  }
  return ARS548_OK;
}

void ars548_log_writer_free(ars548_log_writer * writer)
{
  delete writer;
}

ars548_log_reader * ars548_log_reader_open(const char * path)
{
  if (path == nullptr) {
    return fail_null<ars548_log_reader>(null_handle);
  }
  auto * reader = new ars548_log_reader{};
  if (auto error = reader->reader.open(path)) {
    g_last_error = error->to_string();
    delete reader;
    return nullptr;
  }
  return reader;
}

int ars548_log_reader_next(ars548_log_reader * reader, ars548_log_record_view * out)
{
  if (reader == nullptr || out == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  auto record = reader->reader.next();
  if (!record) {
    if (reader->reader.error()) {
      return fail(ARS548_ERR_IO, reader->reader.error()->to_string());
    }
    g_last_error = reader->reader.truncated_tail() ? "log ends mid-record" : "end of log";
    return ARS548_ERR_END;
  }
  reader->current = std::move(*record);
  out->recv_wall_ns = reader->current.recv_wall_ns;
  out->source_ipv4 = reader->current.source.ipv4;
  out->source_port = reader->current.source.port;
  out->payload = reader->current.payload.data();
  out->payload_size = reader->current.payload.size();
  return ARS548_OK;
}

int ars548_log_reader_truncated(const ars548_log_reader * reader)
{
  return reader != nullptr && reader->reader.truncated_tail() ? 1 : 0;
}

uint64_t ars548_log_reader_records(const ars548_log_reader * reader)
{
  return reader != nullptr ? reader->reader.records_read() : 0;
}

void ars548_log_reader_free(ars548_log_reader * reader)
{
  delete reader;
}

/* ------------------------------------------------------------------ */
/* Stop tokens and replay                                             */

ars548_stop * ars548_stop_new(void)
{
  return new ars548_stop{};
}

void ars548_stop_trigger(ars548_stop * stop)
{
  if (stop != nullptr) {
    stop->flag.store(true, std::memory_order_relaxed);
  }
}

void ars548_stop_free(ars548_stop * stop)
{
  delete stop;
}

int ars548_replay_to_udp(
  const char * path, uint32_t target_ipv4, uint16_t target_port, double speed_factor,
  int as_fast_as_possible, const ars548_stop * stop, uint64_t * records, int * truncated)
{
  if (path == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  if (!as_fast_as_possible && !(speed_factor > 0.0)) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, "speed factor must be > 0");
  }
  const std::atomic<bool> * flag = stop != nullptr ? &stop->flag : nullptr;
  ars548::ReplaySummary summary = ars548::replay_log_to_udp(
    path, target_ipv4, target_port, speed_factor, as_fast_as_possible != 0, flag);
  if (records != nullptr) {
    *records = summary.records;
  }
  if (truncated != nullptr) {
    *truncated = summary.truncated_tail ? 1 : 0;
  }
  if (summary.error) {
    return fail(ARS548_ERR_IO, summary.error->to_string());
  }
  return ARS548_OK;
}

/* ------------------------------------------------------------------ */
/* Scenario simulation                                                */

ars548_scenario * ars548_scenario_load(const char * path)
{
  if (path == nullptr) {
    return fail_null<ars548_scenario>(null_handle);
  }
  ars548::ScenarioError error;
  auto scenario = ars548::load_scenario(path, error);
  if (!scenario) {
    return fail_null<ars548_scenario>(error.message);
  }
  return new ars548_scenario{std::move(*scenario)};
}

const char * ars548_scenario_name(const ars548_scenario * scenario)
{
  if (scenario == nullptr) {
    fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
    return "";
  }
  return scenario->value.name.c_str();
}

uint64_t ars548_scenario_cycles(const ars548_scenario * scenario)
{
  return scenario != nullptr ? scenario->value.cycle_count() : 0;
}

double ars548_scenario_rate_hz(const ars548_scenario * scenario)
{
  return scenario != nullptr ? scenario->value.cycle_rate_hz : 0.0;
}

int ars548_scenario_set_seed(ars548_scenario * scenario, uint64_t seed)
{
  if (scenario == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  scenario->value.seed = seed;
  return ARS548_OK;
}

void ars548_scenario_free(ars548_scenario * scenario)
{
  delete scenario;
}

void ars548_sim_options_default(ars548_sim_options * options)
{
  if (options == nullptr) {
    return;
  }
  const ars548::EmitterOptions defaults;
  options->target_ipv4 = defaults.target_ipv4;
  options->target_port = defaults.target_port;
  options->config_port = defaults.config_port;
  options->ground_truth_path = nullptr;
  options->pace = defaults.pace ? 1 : 0;
}

ars548_sim * ars548_sim_new(const ars548_scenario * scenario)
{
  if (scenario == nullptr) {
    return fail_null<ars548_sim>(null_handle);
  }
  return new ars548_sim(scenario->value);
}

int ars548_sim_run(ars548_sim * sim, const ars548_sim_options * options, ars548_sim_summary * summary)
{
  if (sim == nullptr || options == nullptr) {
    return fail(ARS548_ERR_INVALID_ARGUMENT, null_handle);
  }
  ars548::EmitterOptions core_options;
  core_options.target_ipv4 = options->target_ipv4;
  core_options.target_port = options->target_port;
  core_options.config_port = options->config_port;
  core_options.ground_truth_path =
    options->ground_truth_path != nullptr ? options->ground_truth_path : "";
  core_options.pace = options->pace != 0;
  ars548::EmissionSummary result = sim->sim.run(core_options);
  if (summary != nullptr) {
    summary->cycles = result.cycles;
    summary->detection_frames = result.detection_frames;
    summary->object_frames = result.object_frames;
    summary->status_frames = result.status_frames;
    summary->configurations_applied = result.configurations_applied;
    summary->configurations_rejected = result.configurations_rejected;
  }
  if (!result.ok()) {
    return fail(ARS548_ERR_IO, result.error);
  }
  return ARS548_OK;
}

void ars548_sim_request_stop(ars548_sim * sim)
{
  if (sim != nullptr) {
    sim->sim.request_stop();
  }
}

void ars548_sim_free(ars548_sim * sim)
{
  delete sim;
}

}  // extern "C"
