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

// Exercises the shared library through its C header only; no core C++
// types appear here, so these tests double as a link check for external
// consumers of libars548.

#include "ars548/ars548.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "temp_files.hpp"

namespace
{

using ars548::testgen::TempFile;
using ars548::testgen::read_lines;

void put_u16(std::vector<uint8_t> & out, uint16_t v)
{
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v & 0xFF));
}

void put_u32(std::vector<uint8_t> & out, uint32_t v)
{
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<uint8_t>(v & 0xFF));
}

void put_f32(std::vector<uint8_t> & out, float v)
{
  put_u32(out, std::bit_cast<uint32_t>(v));
}

std::vector<uint8_t> wrap_frame(uint16_t method, const std::vector<uint8_t> & payload)
{
  std::vector<uint8_t> out;
  put_u16(out, 0);
  put_u16(out, method);
  put_u32(out, static_cast<uint32_t>(payload.size()));
  put_u16(out, ars548_crc16(payload.data(), payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

struct WireDetection
{
  float azimuth{0.5F};
  float elevation{-0.2F};
  float range{12.0F};
  float range_rate{-3.0F};
  int8_t rcs{7};
  uint8_t invalid_flags{0};
  uint16_t measurement_id{42};
  uint16_t object_id{3};
  uint8_t classification{1};
};

std::vector<uint8_t> detection_list_bytes(
  uint32_t sequence, const std::vector<WireDetection> & detections)
{
  std::vector<uint8_t> payload;
  put_u32(payload, 100);
  put_u32(payload, 250'000'000);
  payload.push_back(1);
  put_u32(payload, sequence);
  put_f32(payload, 1.5F);
  put_f32(payload, 0.25F);
  put_f32(payload, 0.9F);
  put_u32(payload, static_cast<uint32_t>(detections.size()));
  for (const WireDetection & d : detections) {
    put_f32(payload, d.azimuth);
    put_f32(payload, 0.01F);
    put_f32(payload, d.elevation);
    put_f32(payload, 0.02F);
    put_f32(payload, d.range);
    put_f32(payload, 0.1F);
    put_f32(payload, d.range_rate);
    put_f32(payload, 0.05F);
    payload.push_back(static_cast<uint8_t>(d.rcs));
    payload.push_back(d.invalid_flags);
    put_u16(payload, d.measurement_id);
    put_u16(payload, d.object_id);
    payload.push_back(d.classification);
  }
  return wrap_frame(336, payload);
}

struct WireObject
{
  uint32_t id{};
  float velocity_x{};
  float velocity_y{};
  uint8_t car_probability{80};
};

std::vector<uint8_t> object_list_bytes(uint32_t sequence, const std::vector<WireObject> & objects)
{
  std::vector<uint8_t> payload;
  put_u32(payload, 100);
  put_u32(payload, 500'000'000);
  payload.push_back(1);
  put_u32(payload, sequence);
  put_u32(payload, static_cast<uint32_t>(objects.size()));
  for (const WireObject & o : objects) {
    put_u32(payload, o.id);
    put_u16(payload, 9);
    payload.push_back(0);
    payload.push_back(0);
    put_f32(payload, 20.0F);
    put_f32(payload, -1.0F);
    put_f32(payload, 0.5F);
    for (int i = 0; i < 3; ++i) {
      put_f32(payload, 0.1F);
    }
    put_f32(payload, 0.0F);
    put_f32(payload, 0.01F);
    put_f32(payload, o.velocity_x);
    put_f32(payload, o.velocity_y);
    put_f32(payload, 0.2F);
    put_f32(payload, 0.2F);
    put_f32(payload, 0.0F);
    put_f32(payload, 0.0F);
    put_f32(payload, 0.3F);
    put_f32(payload, 0.3F);
    put_f32(payload, 0.0F);
    put_f32(payload, 4.5F);
    put_f32(payload, 1.8F);
    payload.push_back(0);
    payload.push_back(o.car_probability);
    for (int i = 0; i < 6; ++i) {
      payload.push_back(0);
    }
  }
  return wrap_frame(329, payload);
}

std::vector<uint8_t> status_bytes()
{
  std::vector<uint8_t> payload;
  put_u32(payload, 77);
  put_u32(payload, 5);
  payload.push_back(1);
  payload.push_back(5);
  payload.push_back(48);
  payload.push_back(2);
  put_f32(payload, 1.2F);
  put_f32(payload, -0.3F);
  put_f32(payload, 0.8F);
  put_f32(payload, 0.05F);
  put_f32(payload, -0.02F);
  payload.push_back(1);
  put_f32(payload, 4.6F);
  put_f32(payload, 1.85F);
  put_f32(payload, 1.5F);
  put_f32(payload, 2.8F);
  put_u16(payload, 300);
  payload.push_back(1);
  payload.push_back(60);
  put_u32(payload, 0x0A0D0171);
  payload.push_back(0);
  payload.push_back(0);
  payload.push_back(0);
  return wrap_frame(380, payload);
}

uint16_t grab_free_port()
{
  const int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  REQUIRE(fd >= 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  REQUIRE(::bind(fd, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) == 0);
  socklen_t len = sizeof(addr);
  REQUIRE(::getsockname(fd, reinterpret_cast<sockaddr *>(&addr), &len) == 0);
  const uint16_t port = ntohs(addr.sin_port);
  ::close(fd);
  return port;
}

void send_udp(uint16_t port, const std::vector<uint8_t> & bytes)
{
  const int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  REQUIRE(fd >= 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  const ssize_t sent = ::sendto(
    fd, bytes.data(), bytes.size(), 0, reinterpret_cast<sockaddr *>(&addr), sizeof(addr));
  ::close(fd);
  REQUIRE(sent == static_cast<ssize_t>(bytes.size()));
}

ars548_receiver_config loopback_config(uint16_t port)
{
  ars548_receiver_config config;
  ars548_receiver_config_default(&config);
  config.listen_port = port;
  config.multicast_group = 0;
  config.sensor_ipv4 = 0x7F000001;
  return config;
}

}  // namespace

TEST_CASE("version and error plumbing")
{
  CHECK(std::string(ars548_version()) == "1.0.0");
  CHECK(ars548_last_error() != nullptr);

  CHECK(ars548_ipv4_parse(nullptr, nullptr) == ARS548_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ars548_last_error()) == "null handle");
}

TEST_CASE("outcome names")
{
  CHECK(std::string(ars548_config_outcome_name(ARS548_CONFIG_CONFIRMED)) == "CONFIRMED");
  CHECK(std::string(ars548_config_outcome_name(ARS548_CONFIG_UNCONFIRMED)) == "UNCONFIRMED");
  CHECK(std::string(ars548_config_outcome_name(ARS548_CONFIG_MISMATCH)) == "MISMATCH");
  CHECK(std::string(ars548_config_outcome_name(99)) == "INVALID");
}

TEST_CASE("ipv4 helpers")
{
  uint32_t addr = 0;
  REQUIRE(ars548_ipv4_parse("10.13.1.113", &addr) == ARS548_OK);
  CHECK(addr == 0x0A0D0171);

  char buf[16];
  REQUIRE(ars548_ipv4_format(addr, buf, sizeof(buf)) == ARS548_OK);
  CHECK(std::string(buf) == "10.13.1.113");

  char tiny[4];
  CHECK(ars548_ipv4_format(0xFFFFFFFF, tiny, sizeof(tiny)) == ARS548_ERR_INVALID_ARGUMENT);

  CHECK(ars548_ipv4_parse("not-an-address", &addr) == ARS548_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ars548_last_error()).find("not-an-address") != std::string::npos);
}

TEST_CASE("crc check value")
{
  const char * digits = "123456789";
  CHECK(ars548_crc16(reinterpret_cast<const uint8_t *>(digits), 9) == 0x29B1);
  CHECK(ars548_crc16(nullptr, 0) == 0xFFFF);
}

TEST_CASE("peek method")
{
  const auto bytes = status_bytes();
  uint16_t method = 0;
  REQUIRE(ars548_peek_method(bytes.data(), bytes.size(), &method) == ARS548_OK);
  CHECK(method == 380);

  CHECK(ars548_peek_method(bytes.data(), 4, &method) == ARS548_ERR_DECODE);
}

TEST_CASE("detection frame decode, accessors, and reencode")
{
  const auto bytes = detection_list_bytes(900, {WireDetection{}});

  ars548_frame * frame = nullptr;
  REQUIRE(ars548_frame_decode(bytes.data(), bytes.size(), 111, 222, 0xC0A80101, 42102, &frame) ==
          ARS548_OK);
  REQUIRE(frame != nullptr);

  CHECK(ars548_frame_kind(frame) == ARS548_FRAME_DETECTION_LIST);

  uint32_t seconds = 0;
  uint32_t nanoseconds = 0;
  int sync = 0;
  REQUIRE(ars548_frame_stamp(frame, &seconds, &nanoseconds, &sync) == ARS548_OK);
  CHECK(seconds == 100);
  CHECK(nanoseconds == 250'000'000);
  CHECK(sync == ARS548_SYNC_OK);

  uint64_t wall = 0;
  uint64_t mono = 0;
  REQUIRE(ars548_frame_recv_time(frame, &wall, &mono) == ARS548_OK);
  CHECK(wall == 111);
  CHECK(mono == 222);

  uint32_t ipv4 = 0;
  uint16_t port = 0;
  REQUIRE(ars548_frame_source(frame, &ipv4, &port) == ARS548_OK);
  CHECK(ipv4 == 0xC0A80101);
  CHECK(port == 42102);

  uint32_t sequence = 0;
  REQUIRE(ars548_frame_sequence(frame, &sequence) == ARS548_OK);
  CHECK(sequence == 900);

  REQUIRE(ars548_frame_detection_count(frame) == 1);
  CHECK(ars548_frame_object_count(frame) == 0);

  ars548_detection detection{};
  REQUIRE(ars548_frame_detection(frame, 0, &detection) == ARS548_OK);
  CHECK(detection.azimuth == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(detection.elevation == doctest::Approx(-0.2).epsilon(1e-6));
  CHECK(detection.range == doctest::Approx(12.0).epsilon(1e-6));
  CHECK(detection.range_rate == doctest::Approx(-3.0).epsilon(1e-6));
  CHECK(detection.rcs == 7);
  CHECK(detection.measurement_id == 42);
  CHECK(detection.object_id == 3);
  CHECK(detection.classification == ARS548_CLASS_CAR);

  CHECK(ars548_frame_detection(frame, 1, &detection) == ARS548_ERR_INVALID_ARGUMENT);
  CHECK(ars548_frame_object(frame, 0, nullptr) == ARS548_ERR_INVALID_ARGUMENT);

  uint8_t encoded[2048];
  size_t written = 0;
  REQUIRE(ars548_frame_encode(frame, encoded, sizeof(encoded), &written) == ARS548_OK);
  REQUIRE(written == bytes.size());
  CHECK(std::memcmp(encoded, bytes.data(), written) == 0);

  size_t needed = 0;
  CHECK(ars548_frame_encode(frame, encoded, 4, &needed) == ARS548_ERR_INVALID_ARGUMENT);
  CHECK(needed == bytes.size());

  ars548_frame_free(frame);
}

TEST_CASE("status frame view")
{
  const auto bytes = status_bytes();
  ars548_frame * frame = nullptr;
  REQUIRE(ars548_frame_decode(bytes.data(), bytes.size(), 0, 0, 0, 0, &frame) == ARS548_OK);

  CHECK(ars548_frame_kind(frame) == ARS548_FRAME_STATUS);

  uint32_t sequence = 0;
  CHECK(ars548_frame_sequence(frame, &sequence) == ARS548_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ars548_last_error()).find("sequence") != std::string::npos);

  ars548_status status{};
  REQUIRE(ars548_frame_status(frame, &status) == ARS548_OK);
  CHECK(status.stamp_seconds == 77);
  CHECK(status.software_version_major == 5);
  CHECK(status.software_version_minor == 48);
  CHECK(status.software_version_patch == 2);
  CHECK(status.mounting_longitudinal == doctest::Approx(1.2).epsilon(1e-6));
  CHECK(status.mounting_plug_orientation == ARS548_PLUG_RIGHT);
  CHECK(status.vehicle_wheelbase == doctest::Approx(2.8).epsilon(1e-6));
  CHECK(status.radar_max_detection_distance == 300);
  CHECK(status.radar_frequency_slot == ARS548_SLOT_MID);
  CHECK(status.radar_cycle_time_ms == 60);
  CHECK(status.radar_sensor_ipv4 == 0x0A0D0171);
  CHECK(status.radar_powersave_standstill == 0);
  CHECK(status.blockage == 0);
  CHECK(status.defective == 0);

  ars548_cloud * cloud = nullptr;
  CHECK(ars548_frame_to_cloud(frame, &cloud) == ARS548_ERR_INVALID_ARGUMENT);
  CHECK(cloud == nullptr);

  ars548_frame_free(frame);
}

TEST_CASE("decode rejects corrupt input")
{
  auto bytes = status_bytes();
  bytes[12] ^= 0xFF;
  ars548_frame * frame = nullptr;
  CHECK(ars548_frame_decode(bytes.data(), bytes.size(), 0, 0, 0, 0, &frame) == ARS548_ERR_DECODE);
  CHECK(frame == nullptr);
  CHECK(std::string(ars548_last_error()).find("crc") != std::string::npos);
}

TEST_CASE("filters through the c interface")
{
  ars548_filter * bogus = ars548_filter_compile("bogus=1");
  CHECK(bogus == nullptr);
  CHECK(std::string(ars548_last_error()) == "unknown filter key 'bogus'");

  ars548_filter * filter = ars548_filter_compile("min_speed_kmh=10");
  REQUIRE(filter != nullptr);
  CHECK(std::string(ars548_filter_name(filter)) == "min_speed_kmh=10");

  // Object 1 crawls at 3.6 km/h; object 2 does 36 km/h.
  const auto bytes = object_list_bytes(
    5, {WireObject{1, 1.0F, 0.0F, 80}, WireObject{2, 10.0F, 0.0F, 80}});
  ars548_frame * frame = nullptr;
  REQUIRE(ars548_frame_decode(bytes.data(), bytes.size(), 0, 0, 0, 0, &frame) == ARS548_OK);
  REQUIRE(ars548_frame_object_count(frame) == 2);

  ars548_frame * kept = nullptr;
  REQUIRE(ars548_frame_filter_objects(frame, filter, &kept) == ARS548_OK);
  REQUIRE(ars548_frame_object_count(kept) == 1);

  ars548_object object{};
  REQUIRE(ars548_frame_object(kept, 0, &object) == ARS548_OK);
  CHECK(object.id == 2);
  CHECK(object.velocity_rel_x == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(object.shape_length == doctest::Approx(4.5).epsilon(1e-6));
  CHECK(object.classification_probabilities[ARS548_CLASS_CAR] == 80);

  uint32_t sequence = 0;
  REQUIRE(ars548_frame_sequence(kept, &sequence) == ARS548_OK);
  CHECK(sequence == 5);

  // Non-object frames pass through unchanged.
  const auto det_bytes = detection_list_bytes(1, {WireDetection{}});
  ars548_frame * det_frame = nullptr;
  REQUIRE(ars548_frame_decode(det_bytes.data(), det_bytes.size(), 0, 0, 0, 0, &det_frame) ==
          ARS548_OK);
  ars548_frame * det_kept = nullptr;
  REQUIRE(ars548_frame_filter_objects(det_frame, filter, &det_kept) == ARS548_OK);
  CHECK(ars548_frame_detection_count(det_kept) == 1);

  ars548_frame_free(det_kept);
  ars548_frame_free(det_frame);
  ars548_frame_free(kept);
  ars548_frame_free(frame);
  ars548_filter_free(filter);
}

TEST_CASE("clouds and exporters")
{
  const auto bytes = detection_list_bytes(3, {WireDetection{}});
  ars548_frame * frame = nullptr;
  REQUIRE(ars548_frame_decode(bytes.data(), bytes.size(), 0, 0, 0, 0, &frame) == ARS548_OK);

  ars548_cloud * cloud = nullptr;
  REQUIRE(ars548_frame_to_cloud(frame, &cloud) == ARS548_OK);
  REQUIRE(ars548_cloud_point_count(cloud) == 1);

  ars548_point point{};
  REQUIRE(ars548_cloud_point(cloud, 0, &point) == ARS548_OK);
  const double azimuth = static_cast<double>(0.5F);
  const double elevation = static_cast<double>(-0.2F);
  const double range = 12.0;
  CHECK(point.x == doctest::Approx(range * std::cos(elevation) * std::cos(azimuth)).epsilon(1e-9));
  CHECK(point.y == doctest::Approx(range * std::cos(elevation) * std::sin(azimuth)).epsilon(1e-9));
  CHECK(point.z == doctest::Approx(range * std::sin(elevation)).epsilon(1e-9));
  CHECK(point.doppler == doctest::Approx(-3.0).epsilon(1e-6));
  CHECK(point.intensity == doctest::Approx(7.0));
  CHECK(point.source_id == 42);

  CHECK(ars548_cloud_point(cloud, 1, &point) == ARS548_ERR_INVALID_ARGUMENT);

  TempFile csv("capi_cloud.csv");
  REQUIRE(ars548_cloud_write_csv(cloud, csv.path().c_str()) == ARS548_OK);
  const auto csv_lines = read_lines(csv.path());
  REQUIRE(csv_lines.size() == 2);
  CHECK(csv_lines[0] == "x,y,z,doppler,intensity,source_id");

  TempFile pcd("capi_cloud.pcd");
  REQUIRE(ars548_cloud_write_pcd(cloud, pcd.path().c_str()) == ARS548_OK);
  const auto pcd_lines = read_lines(pcd.path());
  REQUIRE(pcd_lines.size() == 12);
  CHECK(pcd_lines[2] == "FIELDS x y z doppler intensity");
  CHECK(pcd_lines[9] == "POINTS 1");

  CHECK(ars548_cloud_write_csv(cloud, "/nonexistent-dir/out.csv") == ARS548_ERR_IO);

  TempFile jsonl("capi_cloud.jsonl");
  ars548_jsonl * writer = ars548_jsonl_open(jsonl.path().c_str());
  REQUIRE(writer != nullptr);
  REQUIRE(ars548_jsonl_write(writer, cloud) == ARS548_OK);
  REQUIRE(ars548_jsonl_write(writer, cloud) == ARS548_OK);
  CHECK(ars548_jsonl_lines_written(writer) == 2);
  REQUIRE(ars548_jsonl_close(writer) == ARS548_OK);
  ars548_jsonl_free(writer);

  const auto jsonl_lines = read_lines(jsonl.path());
  REQUIRE(jsonl_lines.size() == 2);
  CHECK(jsonl_lines[0].find("\"frame\":\"ars548\"") != std::string::npos);
  CHECK(jsonl_lines[0].find("\"points\":[") != std::string::npos);

  CHECK(ars548_jsonl_open("/nonexistent-dir/out.jsonl") == nullptr);

  ars548_cloud_free(cloud);
  ars548_frame_free(frame);
}

TEST_CASE("receiver config defaults")
{
  ars548_receiver_config config;
  ars548_receiver_config_default(&config);
  CHECK(config.listen_port == 42102);
  CHECK(config.multicast_group == 0xE0000202);
  CHECK(config.interface_ipv4 == 0);
  CHECK(config.sensor_ipv4 == 0x0A0D0171);
  CHECK(config.config_port == 42101);
  CHECK(config.stamp_policy == ARS548_STAMP_OVERRIDE_LOCAL);
  CHECK(config.receive_buffer_bytes > 0);
}

TEST_CASE("receiver rejects bad configs")
{
  ars548_receiver_config config = loopback_config(0);
  CHECK(ars548_receiver_new(&config) == nullptr);
  CHECK(std::string(ars548_last_error()) == "listen_port must be nonzero");

  config = loopback_config(grab_free_port());
  config.stamp_policy = 7;
  CHECK(ars548_receiver_new(&config) == nullptr);
  CHECK(std::string(ars548_last_error()).find("stamp_policy") != std::string::npos);
}

namespace
{

struct RawSinkLog
{
  size_t calls{};
  size_t bytes{};
};

void log_raw(
  const uint8_t *, size_t size, uint64_t, uint32_t, uint16_t, void * user)
{
  auto * log = static_cast<RawSinkLog *>(user);
  ++log->calls;
  log->bytes += size;
}

}  // namespace

TEST_CASE("receiver poll over loopback")
{
  const uint16_t port = grab_free_port();
  ars548_receiver_config config = loopback_config(port);
  config.stamp_policy = ARS548_STAMP_KEEP_ORIGINAL;
  ars548_receiver * receiver = ars548_receiver_new(&config);
  REQUIRE(receiver != nullptr);

  RawSinkLog raw_log;
  REQUIRE(ars548_receiver_set_raw_sink(receiver, log_raw, &raw_log) == ARS548_OK);

  const auto good = detection_list_bytes(10, {WireDetection{}});
  send_udp(port, good);

  ars548_frame * frame = nullptr;
  REQUIRE(ars548_receiver_poll(receiver, 2000, &frame) == ARS548_OK);
  REQUIRE(frame != nullptr);
  CHECK(ars548_frame_kind(frame) == ARS548_FRAME_DETECTION_LIST);
  uint32_t seconds = 0;
  REQUIRE(ars548_frame_stamp(frame, &seconds, nullptr, nullptr) == ARS548_OK);
  CHECK(seconds == 100);
  ars548_frame_free(frame);

  auto corrupt = good;
  corrupt[9] ^= 0x01;
  send_udp(port, corrupt);
  CHECK(ars548_receiver_poll(receiver, 2000, &frame) == ARS548_ERR_DECODE);
  CHECK(frame == nullptr);

  CHECK(ars548_receiver_poll(receiver, 50, &frame) == ARS548_ERR_TIMEOUT);

  CHECK(ars548_receiver_stat(receiver, ARS548_STAT_DATAGRAMS) == 2);
  CHECK(ars548_receiver_stat(receiver, ARS548_STAT_BYTES) == 2 * good.size());
  CHECK(ars548_receiver_stat(receiver, ARS548_STAT_FRAMES_OK_TOTAL) == 1);
  CHECK(ars548_receiver_stat(receiver, ARS548_STAT_FRAMES_OK_DETECTION_LIST) == 1);
  CHECK(ars548_receiver_stat(receiver, ARS548_STAT_FRAMES_ERROR_TOTAL) == 1);
  CHECK(ars548_receiver_stat(receiver, ARS548_STAT_ERR_BAD_CRC) == 1);
  CHECK(ars548_receiver_stat(receiver, ARS548_STAT_SEQUENCE_GAPS) == 0);

  CHECK(raw_log.calls == 2);
  CHECK(raw_log.bytes == 2 * good.size());

  const std::string stats_text = ars548_receiver_stats_text(receiver);
  CHECK(stats_text.find("frames_ok.detection_list=1\n") != std::string::npos);
  CHECK(stats_text.find("frames_error.bad_crc=1\n") != std::string::npos);

  ars548_receiver_free(receiver);
}

TEST_CASE("configuration request validation")
{
  ars548_config * config = ars548_config_new();
  REQUIRE(config != nullptr);

  CHECK(ars548_config_set_mounting(config, 1.0F, 0.0F, 0.5F, 0.0F, 0.0F, 5) ==
        ARS548_ERR_INVALID_ARGUMENT);
  CHECK(ars548_config_set_radar(config, 300, 9, 60, 0, 0) == ARS548_ERR_INVALID_ARGUMENT);

  // An empty request is rejected before any socket use.
  ars548_receiver_config transport = loopback_config(grab_free_port());
  transport.config_port = grab_free_port();
  int outcome = -1;
  CHECK(ars548_send_configuration(&transport, config, &outcome) == ARS548_ERR_INVALID_ARGUMENT);

  // Out-of-range values are rejected client side as well.
  REQUIRE(ars548_config_set_radar(config, 1501, ARS548_SLOT_MID, 60, 0x0A0D0171, 0) == ARS548_OK);
  CHECK(ars548_send_configuration(&transport, config, &outcome) == ARS548_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ars548_last_error()).find("max_detection_distance") != std::string::npos);

  ars548_config_free(config);
}

TEST_CASE("configuration send with a silent sensor")
{
  ars548_receiver_config transport = loopback_config(grab_free_port());
  transport.config_port = grab_free_port();

  ars548_config * config = ars548_config_new();
  REQUIRE(ars548_config_set_vehicle(config, 4.5F, 1.8F, 1.5F, 2.7F) == ARS548_OK);

  int outcome = -1;
  REQUIRE(ars548_send_configuration(&transport, config, &outcome) == ARS548_OK);
  CHECK(outcome == ARS548_CONFIG_UNCONFIRMED);

  ars548_config_free(config);
}

TEST_CASE("log writer and reader round trip")
{
  TempFile log("capi_log.bin");

  const auto first = status_bytes();
  const auto second = detection_list_bytes(1, {WireDetection{}});

  ars548_log_writer * writer = ars548_log_writer_open(log.path().c_str());
  REQUIRE(writer != nullptr);
  REQUIRE(ars548_log_writer_write(writer, 1000, 0x7F000001, 42102, first.data(), first.size()) ==
          ARS548_OK);
  REQUIRE(ars548_log_writer_write(writer, 2000, 0x7F000001, 42102, second.data(), second.size()) ==
          ARS548_OK);
  CHECK(ars548_log_writer_records(writer) == 2);
  REQUIRE(ars548_log_writer_close(writer) == ARS548_OK);
  ars548_log_writer_free(writer);

  ars548_log_reader * reader = ars548_log_reader_open(log.path().c_str());
  REQUIRE(reader != nullptr);

  ars548_log_record_view view{};
  REQUIRE(ars548_log_reader_next(reader, &view) == ARS548_OK);
  CHECK(view.recv_wall_ns == 1000);
  CHECK(view.source_ipv4 == 0x7F000001);
  CHECK(view.source_port == 42102);
  REQUIRE(view.payload_size == first.size());
  CHECK(std::memcmp(view.payload, first.data(), first.size()) == 0);

  REQUIRE(ars548_log_reader_next(reader, &view) == ARS548_OK);
  CHECK(view.recv_wall_ns == 2000);
  REQUIRE(view.payload_size == second.size());
  CHECK(std::memcmp(view.payload, second.data(), second.size()) == 0);

  CHECK(ars548_log_reader_next(reader, &view) == ARS548_ERR_END);
  CHECK(ars548_log_reader_truncated(reader) == 0);
  CHECK(ars548_log_reader_records(reader) == 2);
  ars548_log_reader_free(reader);

  CHECK(ars548_log_reader_open("/nonexistent-dir/missing.bin") == nullptr);
}

TEST_CASE("replay to a udp endpoint")
{
  TempFile log("capi_replay.bin");
  const auto payload = status_bytes();

  ars548_log_writer * writer = ars548_log_writer_open(log.path().c_str());
  REQUIRE(writer != nullptr);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(ars548_log_writer_write(
              writer, 1000 + static_cast<uint64_t>(i), 0x7F000001, 42102, payload.data(),
              payload.size()) == ARS548_OK);
  }
  REQUIRE(ars548_log_writer_close(writer) == ARS548_OK);
  ars548_log_writer_free(writer);

  const uint16_t port = grab_free_port();
  ars548_receiver_config config = loopback_config(port);
  ars548_receiver * receiver = ars548_receiver_new(&config);
  REQUIRE(receiver != nullptr);

  uint64_t records = 0;
  int truncated = -1;
  REQUIRE(ars548_replay_to_udp(log.path().c_str(), 0x7F000001, port, 1.0, 1, nullptr, &records,
                               &truncated) == ARS548_OK);
  CHECK(records == 3);
  CHECK(truncated == 0);

  for (int i = 0; i < 3; ++i) {
    ars548_frame * frame = nullptr;
    REQUIRE(ars548_receiver_poll(receiver, 2000, &frame) == ARS548_OK);
    CHECK(ars548_frame_kind(frame) == ARS548_FRAME_STATUS);
    ars548_frame_free(frame);
  }
  ars548_receiver_free(receiver);

  CHECK(ars548_replay_to_udp(log.path().c_str(), 0x7F000001, port, 0.0, 0, nullptr, nullptr,
                             nullptr) == ARS548_ERR_INVALID_ARGUMENT);

  // A pre-triggered stop token ends the replay before the first record.
  ars548_stop * stop = ars548_stop_new();
  ars548_stop_trigger(stop);
  records = 99;
  REQUIRE(ars548_replay_to_udp(log.path().c_str(), 0x7F000001, port, 1.0, 1, stop, &records,
                               nullptr) == ARS548_OK);
  CHECK(records == 0);
  ars548_stop_free(stop);
}

TEST_CASE("scenario loading and simulation")
{
  TempFile scenario_file("capi_scenario.json");
  {
    std::ofstream out(scenario_file.path());
    out << R"({
      "name": "loopback-smoke",
      "duration_seconds": 0.5,
      "cycle_rate_hz": 10,
      "seed": 7,
      "objects": [
        {"id": 1, "position": [20, 0, 0], "velocity": [-5, 0], "detections_per_cycle": 2}
      ]
    })";
  }

  CHECK(ars548_scenario_load("/nonexistent-dir/missing.json") == nullptr);
  CHECK(std::string(ars548_last_error()).find("cannot open") != std::string::npos);

  ars548_scenario * scenario = ars548_scenario_load(scenario_file.path().c_str());
  REQUIRE(scenario != nullptr);
  CHECK(std::string(ars548_scenario_name(scenario)) == "loopback-smoke");
  CHECK(ars548_scenario_cycles(scenario) == 5);
  CHECK(ars548_scenario_rate_hz(scenario) == doctest::Approx(10.0));

  const uint16_t data_port = grab_free_port();
  ars548_receiver_config config = loopback_config(data_port);
  config.stamp_policy = ARS548_STAMP_KEEP_ORIGINAL;
  ars548_receiver * receiver = ars548_receiver_new(&config);
  REQUIRE(receiver != nullptr);

  TempFile truth_file("capi_truth.jsonl");
  ars548_sim_options options;
  ars548_sim_options_default(&options);
  options.target_port = data_port;
  options.config_port = grab_free_port();
  options.ground_truth_path = truth_file.path().c_str();
  options.pace = 0;

  ars548_sim * sim = ars548_sim_new(scenario);
  REQUIRE(sim != nullptr);

  ars548_sim_summary summary{};
  REQUIRE(ars548_sim_run(sim, &options, &summary) == ARS548_OK);
  CHECK(summary.cycles == 5);
  CHECK(summary.detection_frames == 5);
  CHECK(summary.object_frames == 5);
  CHECK(summary.status_frames == 1);
  CHECK(summary.configurations_applied == 0);

  size_t detections_seen = 0;
  size_t objects_seen = 0;
  size_t statuses_seen = 0;
  for (;;) {
    ars548_frame * frame = nullptr;
    const int rc = ars548_receiver_poll(receiver, 200, &frame);
    if (rc == ARS548_ERR_TIMEOUT) {
      break;
    }
    REQUIRE(rc == ARS548_OK);
    switch (ars548_frame_kind(frame)) {
      case ARS548_FRAME_DETECTION_LIST:
        ++detections_seen;
        CHECK(ars548_frame_detection_count(frame) == 2);
        break;
      case ARS548_FRAME_OBJECT_LIST:
        ++objects_seen;
        CHECK(ars548_frame_object_count(frame) == 1);
        break;
      default:
        ++statuses_seen;
        break;
    }
    ars548_frame_free(frame);
  }
  CHECK(detections_seen == 5);
  CHECK(objects_seen == 5);
  CHECK(statuses_seen == 1);
  CHECK(ars548_receiver_stat(receiver, ARS548_STAT_SEQUENCE_GAPS) == 0);

  const auto truth_lines = read_lines(truth_file.path());
  REQUIRE(truth_lines.size() == 5);
  CHECK(truth_lines[0].find("\"cycle\":0") != std::string::npos);
  CHECK(truth_lines[4].find("\"cycle\":4") != std::string::npos);

  ars548_receiver_free(receiver);
  ars548_sim_free(sim);
  ars548_scenario_free(scenario);
}
