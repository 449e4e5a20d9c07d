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

// Command line front end for the radar toolkit. Everything here goes
// through the public C interface; the C++ core stays an implementation
// detail of the shared library.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include "ars548/ars548.h"

#include <atomic>
#include <chrono>
#include <cinttypes>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace
{

constexpr int exit_success = 0;
constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

/* ------------------------------------------------------------------ */
/* Logging, selected by ARS548_TOOLKIT_LOG                            */

enum class LogLevel : int { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel g_log_level = LogLevel::info;

void init_log_level()
{
  const char * raw = std::getenv("ARS548_TOOLKIT_LOG");
  if (raw == nullptr) {
    return;
  }
  const std::string value(raw);
  if (value == "error") {
    g_log_level = LogLevel::error;
  } else if (value == "warn") {
    g_log_level = LogLevel::warn;
  } else if (value == "info") {
    g_log_level = LogLevel::info;
  } else if (value == "debug") {
    g_log_level = LogLevel::debug;
  } else {
    std::fprintf(
      stderr, "warn: ARS548_TOOLKIT_LOG='%s' is not one of error|warn|info|debug\n", raw);
  }
}

bool log_enabled(LogLevel level)
{
  return static_cast<int>(level) <= static_cast<int>(g_log_level);
}

#define LOG_AT(level, tag, ...)                  \
  do {                                           \
    if (log_enabled(level)) {                    \
      std::fprintf(stderr, tag " " __VA_ARGS__); \
      std::fputc('\n', stderr);                  \
    }                                            \
  } while (0)

#define LOG_ERROR(...) LOG_AT(LogLevel::error, "error:", __VA_ARGS__)
#define LOG_WARN(...) LOG_AT(LogLevel::warn, "warn:", __VA_ARGS__)
#define LOG_INFO(...) LOG_AT(LogLevel::info, "info:", __VA_ARGS__)
#define LOG_DEBUG(...) LOG_AT(LogLevel::debug, "debug:", __VA_ARGS__)

/* ------------------------------------------------------------------ */
/* Interrupt handling                                                 */

std::atomic<int> g_interrupted{0};
ars548_stop * g_stop = nullptr;
std::atomic<ars548_sim *> g_active_sim{nullptr};

extern "C" void handle_interrupt(int)
{
  g_interrupted.store(1, std::memory_order_relaxed);
  if (g_stop != nullptr) {
    ars548_stop_trigger(g_stop);
  }
  ars548_sim * sim = g_active_sim.load(std::memory_order_relaxed);
  if (sim != nullptr) {
    ars548_sim_request_stop(sim);
  }
}

void install_interrupt_handler()
{
  std::signal(SIGINT, handle_interrupt);
  std::signal(SIGTERM, handle_interrupt);
}

bool interrupted()
{
  return g_interrupted.load(std::memory_order_relaxed) != 0;
}

/* ------------------------------------------------------------------ */
/* Small helpers                                                      */

std::optional<uint32_t> parse_address(const std::string & text)
{
  uint32_t out = 0;
  if (ars548_ipv4_parse(text.c_str(), &out) != ARS548_OK) {
    return std::nullopt;
  }
  return out;
}

/// "addr" or "addr:port"; the default port applies when none is given.
bool parse_endpoint(const std::string & text, uint32_t & ipv4, uint16_t & port)
{
  const auto colon = text.rfind(':');
  std::string addr = text;
  if (colon != std::string::npos) {
    addr = text.substr(0, colon);
    const std::string port_text = text.substr(colon + 1);
    char * end = nullptr;
    const unsigned long value = std::strtoul(port_text.c_str(), &end, 10);
    if (end == nullptr || *end != '\0' || port_text.empty() || value == 0 || value > 65535) {
      return false;
    }
    port = static_cast<uint16_t>(value);
  }
  const auto parsed = parse_address(addr);
  if (!parsed) {
    return false;
  }
  ipv4 = *parsed;
  return true;
}

/// "none" disables multicast; anything else must be a dotted quad.
bool parse_group(const std::string & text, uint32_t & group)
{
  if (text == "none") {
    group = 0;
    return true;
  }
  const auto parsed = parse_address(text);
  if (!parsed) {
    return false;
  }
  group = *parsed;
  return true;
}

uint64_t steady_ms()
{
  return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now().time_since_epoch())
                                 .count());
}

/* ------------------------------------------------------------------ */
/* Shared receiver flags (listen, record)                             */

struct ReceiverFlags
{
  uint16_t port = 42102;
  std::string group = "224.0.2.2";
  std::string iface;
  double duration_seconds = 0.0;  // 0 = until interrupted
};

void add_receiver_flags(CLI::App & cmd, ReceiverFlags & flags)
{
  cmd.add_option("--port", flags.port, "UDP data port to bind")->capture_default_str();
  cmd.add_option("--group", flags.group, "Multicast group to join, or 'none' for plain unicast")
    ->capture_default_str();
  cmd.add_option("--iface", flags.iface, "Interface address for the multicast join");
  cmd.add_option(
    "--duration", flags.duration_seconds, "Stop after this many seconds (0 = run until Ctrl-C)");
}

/// Fills config from the shared flags. Returns an exit code, exit_success
/// meaning "keep going".
int receiver_config_from_flags(const ReceiverFlags & flags, ars548_receiver_config & config)
{
  ars548_receiver_config_default(&config);
  config.listen_port = flags.port;
  if (!parse_group(flags.group, config.multicast_group)) {
    LOG_ERROR("--group '%s' is not a dotted-quad address or 'none'", flags.group.c_str());
    return exit_usage;
  }
  if (!flags.iface.empty()) {
    const auto parsed = parse_address(flags.iface);
    if (!parsed) {
      LOG_ERROR("--iface '%s' is not a dotted-quad address", flags.iface.c_str());
      return exit_usage;
    }
    config.interface_ipv4 = *parsed;
  }
  return exit_success;
}

/* ------------------------------------------------------------------ */
/* Frame export shared by listen and export                           */

struct Exporter
{
  std::string format;  // csv, pcd, or jsonl; empty = disabled
  std::string out_dir;
  ars548_jsonl * detections_jsonl = nullptr;
  ars548_jsonl * objects_jsonl = nullptr;
  uint64_t files_written = 0;

  bool enabled() const { return !format.empty(); }

  /// Validates flags and prepares the output directory.
  int open()
  {
    if (!enabled()) {
      return exit_success;
    }
    if (out_dir.empty()) {
      LOG_ERROR("--export needs --out <dir>");
      return exit_usage;
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      LOG_ERROR("cannot create '%s': %s", out_dir.c_str(), ec.message().c_str());
      return exit_runtime;
    }
    return exit_success;
  }

  /// Writes one frame's cloud. Status frames are skipped silently.
  int write(const ars548_frame * frame)
  {
    if (!enabled() || ars548_frame_kind(frame) == ARS548_FRAME_STATUS) {
      return exit_success;
    }
    ars548_cloud * cloud = nullptr;
    if (ars548_frame_to_cloud(frame, &cloud) != ARS548_OK) {
      LOG_ERROR("cloud conversion failed: %s", ars548_last_error());
      return exit_runtime;
    }
    const bool is_detections = ars548_frame_kind(frame) == ARS548_FRAME_DETECTION_LIST;
    const char * kind_name = is_detections ? "detections" : "objects";
    int code = exit_success;
    if (format == "jsonl") {
      ars548_jsonl *& writer = is_detections ? detections_jsonl : objects_jsonl;
      if (writer == nullptr) {
        const std::string path = out_dir + "/" + kind_name + ".jsonl";
        writer = ars548_jsonl_open(path.c_str());
        if (writer == nullptr) {
          LOG_ERROR("cannot open '%s': %s", path.c_str(), ars548_last_error());
          code = exit_runtime;
        }
      }
      if (writer != nullptr) {
        if (ars548_jsonl_write(writer, cloud) != ARS548_OK) {
          LOG_ERROR("jsonl write failed: %s", ars548_last_error());
          code = exit_runtime;
        } else {
          ++files_written;
        }
      }
    } else {
      uint32_t sequence = 0;
      ars548_frame_sequence(frame, &sequence);
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%010u.%s", kind_name, sequence, format.c_str());
      const std::string path = out_dir + "/" + name;
      const int rc = format == "csv" ? ars548_cloud_write_csv(cloud, path.c_str())
                                     : ars548_cloud_write_pcd(cloud, path.c_str());
      if (rc != ARS548_OK) {
        LOG_ERROR("cannot write '%s': %s", path.c_str(), ars548_last_error());
        code = exit_runtime;
      } else {
        ++files_written;
      }
    }
    ars548_cloud_free(cloud);
    return code;
  }

  int close()
  {
    int code = exit_success;
    for (ars548_jsonl * writer : {detections_jsonl, objects_jsonl}) {
      if (writer != nullptr) {
        if (ars548_jsonl_close(writer) != ARS548_OK) {
          LOG_ERROR("jsonl close failed: %s", ars548_last_error());
          code = exit_runtime;
        }
        ars548_jsonl_free(writer);
      }
    }
    detections_jsonl = nullptr;
    objects_jsonl = nullptr;
    return code;
  }
};

void print_counters(ars548_receiver * receiver)
{
  std::printf(
    "status=%" PRIu64 " object_list=%" PRIu64 " detection_list=%" PRIu64 " errors=%" PRIu64
    " gaps=%" PRIu64 "\n",
    ars548_receiver_stat(receiver, ARS548_STAT_FRAMES_OK_STATUS),
    ars548_receiver_stat(receiver, ARS548_STAT_FRAMES_OK_OBJECT_LIST),
    ars548_receiver_stat(receiver, ARS548_STAT_FRAMES_OK_DETECTION_LIST),
    ars548_receiver_stat(receiver, ARS548_STAT_FRAMES_ERROR_TOTAL),
    ars548_receiver_stat(receiver, ARS548_STAT_SEQUENCE_GAPS));
  std::fflush(stdout);
}

/* ------------------------------------------------------------------ */
/* listen                                                             */

struct ListenFlags
{
  ReceiverFlags receiver;
  std::string stamp = "local";
  std::string filter_expression;
  std::string export_format;
  std::string out_dir;
  double stats_every_seconds = 10.0;
};

int run_listen(const ListenFlags & flags)
{
  ars548_receiver_config config;
  if (const int rc = receiver_config_from_flags(flags.receiver, config); rc != exit_success) {
    return rc;
  }
  config.stamp_policy =
    flags.stamp == "keep" ? ARS548_STAMP_KEEP_ORIGINAL : ARS548_STAMP_OVERRIDE_LOCAL;

  ars548_filter * filter = nullptr;
  if (!flags.filter_expression.empty()) {
    filter = ars548_filter_compile(flags.filter_expression.c_str());
    if (filter == nullptr) {
      LOG_ERROR("--filter: %s", ars548_last_error());
      return exit_usage;
    }
    LOG_INFO("filter: %s", ars548_filter_name(filter));
  }

  Exporter exporter{flags.export_format, flags.out_dir};
  if (const int rc = exporter.open(); rc != exit_success) {
    ars548_filter_free(filter);
    return rc;
  }

  ars548_receiver * receiver = ars548_receiver_new(&config);
  if (receiver == nullptr) {
    LOG_ERROR("cannot open receiver: %s", ars548_last_error());
    ars548_filter_free(filter);
    return exit_runtime;
  }
  LOG_INFO(
    "listening on port %u (%s)", config.listen_port,
    config.multicast_group != 0 ? "multicast" : "unicast");

  const uint64_t started_ms = steady_ms();
  uint64_t next_stats_ms = flags.stats_every_seconds > 0
                             ? started_ms + static_cast<uint64_t>(flags.stats_every_seconds * 1e3)
                             : UINT64_MAX;
  int code = exit_success;
  while (!interrupted()) {
    if (
      flags.receiver.duration_seconds > 0 &&
      steady_ms() - started_ms >= static_cast<uint64_t>(flags.receiver.duration_seconds * 1e3)) {
      break;
    }
    ars548_frame * frame = nullptr;
    const int rc = ars548_receiver_poll(receiver, 100, &frame);
    if (rc == ARS548_OK) {
      if (filter != nullptr && ars548_frame_kind(frame) == ARS548_FRAME_OBJECT_LIST) {
        ars548_frame * kept = nullptr;
        if (ars548_frame_filter_objects(frame, filter, &kept) == ARS548_OK) {
          ars548_frame_free(frame);
          frame = kept;
        }
      }
      if (log_enabled(LogLevel::debug)) {
        uint32_t seconds = 0;
        uint32_t nanoseconds = 0;
        ars548_frame_stamp(frame, &seconds, &nanoseconds, nullptr);
        LOG_DEBUG(
          "frame kind=%d stamp=%u.%09u detections=%zu objects=%zu", ars548_frame_kind(frame),
          seconds, nanoseconds, ars548_frame_detection_count(frame),
          ars548_frame_object_count(frame));
      }
      if (const int wrc = exporter.write(frame); wrc != exit_success) {
        code = wrc;
        ars548_frame_free(frame);
        break;
      }
      ars548_frame_free(frame);
    } else if (rc == ARS548_ERR_DECODE) {
      LOG_DEBUG("dropped datagram: %s", ars548_last_error());
    } else if (rc == ARS548_ERR_IO) {
      LOG_ERROR("receive failed: %s", ars548_last_error());
      code = exit_runtime;
      break;
    }
    if (steady_ms() >= next_stats_ms) {
      print_counters(receiver);
      next_stats_ms += static_cast<uint64_t>(flags.stats_every_seconds * 1e3);
    }
  }

  if (const int rc = exporter.close(); rc != exit_success && code == exit_success) {
    code = rc;
  }
  print_counters(receiver);
  if (exporter.enabled()) {
    std::printf("exported=%" PRIu64 "\n", exporter.files_written);
  }
  ars548_receiver_free(receiver);
  ars548_filter_free(filter);
  return code;
}

/* ------------------------------------------------------------------ */
/* record                                                             */

struct RecordFlags
{
  ReceiverFlags receiver;
  std::string out_path;
};

void record_datagram(
  const uint8_t * data, size_t size, uint64_t recv_wall_ns, uint32_t source_ipv4,
  uint16_t source_port, void * user)
{
  auto * writer = static_cast<ars548_log_writer *>(user);
  if (ars548_log_writer_write(writer, recv_wall_ns, source_ipv4, source_port, data, size) !=
      ARS548_OK) {
    LOG_ERROR("log write failed: %s", ars548_last_error());
  }
}

int run_record(const RecordFlags & flags)
{
  ars548_receiver_config config;
  if (const int rc = receiver_config_from_flags(flags.receiver, config); rc != exit_success) {
    return rc;
  }
  config.stamp_policy = ARS548_STAMP_KEEP_ORIGINAL;

  ars548_log_writer * writer = ars548_log_writer_open(flags.out_path.c_str());
  if (writer == nullptr) {
    LOG_ERROR("cannot open '%s': %s", flags.out_path.c_str(), ars548_last_error());
    return exit_runtime;
  }

  ars548_receiver * receiver = ars548_receiver_new(&config);
  if (receiver == nullptr) {
    LOG_ERROR("cannot open receiver: %s", ars548_last_error());
    ars548_log_writer_free(writer);
    return exit_runtime;
  }
  ars548_receiver_set_raw_sink(receiver, record_datagram, writer);
  LOG_INFO("recording port %u to %s", config.listen_port, flags.out_path.c_str());

  const uint64_t started_ms = steady_ms();
  int code = exit_success;
  while (!interrupted()) {
    if (
      flags.receiver.duration_seconds > 0 &&
      steady_ms() - started_ms >= static_cast<uint64_t>(flags.receiver.duration_seconds * 1e3)) {
      break;
    }
    ars548_frame * frame = nullptr;
    const int rc = ars548_receiver_poll(receiver, 100, &frame);
    if (rc == ARS548_OK) {
      ars548_frame_free(frame);
    } else if (rc == ARS548_ERR_IO) {
      LOG_ERROR("receive failed: %s", ars548_last_error());
      code = exit_runtime;
      break;
    }
  }

  const uint64_t bytes_received = ars548_receiver_stat(receiver, ARS548_STAT_BYTES);
  ars548_receiver_free(receiver);
  if (ars548_log_writer_close(writer) != ARS548_OK) {
    LOG_ERROR("log close failed: %s", ars548_last_error());
    code = exit_runtime;
  }
  std::printf(
    "records=%" PRIu64 " bytes=%" PRIu64 "\n", ars548_log_writer_records(writer), bytes_received);
  ars548_log_writer_free(writer);
  return code;
}

/* ------------------------------------------------------------------ */
/* replay                                                             */

struct ReplayFlags
{
  std::string in_path;
  std::string target = "127.0.0.1:42102";
  double speed = 1.0;
  bool fast = false;
};

int run_replay(const ReplayFlags & flags)
{
  uint32_t target_ipv4 = 0x7F000001;
  uint16_t target_port = 42102;
  if (!parse_endpoint(flags.target, target_ipv4, target_port)) {
    LOG_ERROR("--target '%s' is not addr or addr:port", flags.target.c_str());
    return exit_usage;
  }
  if (!flags.fast && !(flags.speed > 0.0)) {
    LOG_ERROR("--speed must be > 0");
    return exit_usage;
  }

  uint64_t records = 0;
  int truncated = 0;
  const int rc = ars548_replay_to_udp(
    flags.in_path.c_str(), target_ipv4, target_port, flags.speed, flags.fast ? 1 : 0, g_stop,
    &records, &truncated);
  if (rc != ARS548_OK) {
    LOG_ERROR("replay failed: %s", ars548_last_error());
    return exit_runtime;
  }
  std::printf("records=%" PRIu64 " truncated=%d\n", records, truncated);
  return exit_success;
}

/* ------------------------------------------------------------------ */
/* export                                                             */

struct ExportFlags
{
  std::string in_path;
  std::string format;
  std::string out_dir;
  std::string filter_expression;
};

int run_export(const ExportFlags & flags)
{
  ars548_filter * filter = nullptr;
  if (!flags.filter_expression.empty()) {
    filter = ars548_filter_compile(flags.filter_expression.c_str());
    if (filter == nullptr) {
      LOG_ERROR("--filter: %s", ars548_last_error());
      return exit_usage;
    }
  }

  Exporter exporter{flags.format, flags.out_dir};
  if (const int rc = exporter.open(); rc != exit_success) {
    ars548_filter_free(filter);
    return rc;
  }

  ars548_log_reader * reader = ars548_log_reader_open(flags.in_path.c_str());
  if (reader == nullptr) {
    LOG_ERROR("cannot open '%s': %s", flags.in_path.c_str(), ars548_last_error());
    ars548_filter_free(filter);
    return exit_runtime;
  }

  uint64_t decoded = 0;
  uint64_t decode_errors = 0;
  uint64_t status_frames = 0;
  int code = exit_success;
  for (;;) {
    ars548_log_record_view view{};
    const int rc = ars548_log_reader_next(reader, &view);
    if (rc == ARS548_ERR_END) {
      break;
    }
    if (rc != ARS548_OK) {
      LOG_ERROR("log read failed: %s", ars548_last_error());
      code = exit_runtime;
      break;
    }
    ars548_frame * frame = nullptr;
    if (ars548_frame_decode(
          view.payload, view.payload_size, view.recv_wall_ns, 0, view.source_ipv4,
          view.source_port, &frame) != ARS548_OK) {
      ++decode_errors;
      LOG_DEBUG("skipping record: %s", ars548_last_error());
      continue;
    }
    ++decoded;
    if (ars548_frame_kind(frame) == ARS548_FRAME_STATUS) {
      ++status_frames;
    }
    if (filter != nullptr && ars548_frame_kind(frame) == ARS548_FRAME_OBJECT_LIST) {
      ars548_frame * kept = nullptr;
      if (ars548_frame_filter_objects(frame, filter, &kept) == ARS548_OK) {
        ars548_frame_free(frame);
        frame = kept;
      }
    }
    if (const int wrc = exporter.write(frame); wrc != exit_success) {
      code = wrc;
      ars548_frame_free(frame);
      break;
    }
    ars548_frame_free(frame);
  }

  const int truncated = ars548_log_reader_truncated(reader);
  if (const int rc = exporter.close(); rc != exit_success && code == exit_success) {
    code = rc;
  }
  std::printf(
    "frames=%" PRIu64 " exported=%" PRIu64 " decode_errors=%" PRIu64 " status_frames=%" PRIu64
    " truncated=%d\n",
    decoded, exporter.files_written, decode_errors, status_frames, truncated);
  ars548_log_reader_free(reader);
  ars548_filter_free(filter);
  return code;
}

/* ------------------------------------------------------------------ */
/* configure                                                          */

struct ConfigureFlags
{
  std::string sensor_ip = "10.13.1.113";
  uint16_t config_port = 42101;
  uint16_t data_port = 42102;
  std::string group = "224.0.2.2";
  std::vector<double> mounting;  // longitudinal lateral vertical yaw pitch plug
  std::vector<double> vehicle;   // length width height wheelbase
  std::optional<uint16_t> max_distance;
  std::optional<int> frequency_slot;
  std::optional<int> cycle_time;
  std::optional<bool> powersave;
  std::string radar_ip;
  std::string new_ip;
};

int run_configure(const ConfigureFlags & flags)
{
  ars548_receiver_config transport;
  ars548_receiver_config_default(&transport);
  transport.listen_port = flags.data_port;
  transport.config_port = flags.config_port;
  if (!parse_group(flags.group, transport.multicast_group)) {
    LOG_ERROR("--group '%s' is not a dotted-quad address or 'none'", flags.group.c_str());
    return exit_usage;
  }
  const auto sensor = parse_address(flags.sensor_ip);
  if (!sensor) {
    LOG_ERROR("--sensor-ip '%s' is not a dotted-quad address", flags.sensor_ip.c_str());
    return exit_usage;
  }
  transport.sensor_ipv4 = *sensor;

  ars548_config * request = ars548_config_new();
  if (!flags.mounting.empty()) {
    if (ars548_config_set_mounting(
          request, static_cast<float>(flags.mounting[0]), static_cast<float>(flags.mounting[1]),
          static_cast<float>(flags.mounting[2]), static_cast<float>(flags.mounting[3]),
          static_cast<float>(flags.mounting[4]),
          static_cast<int>(flags.mounting[5])) != ARS548_OK) {
      LOG_ERROR("--mounting: %s", ars548_last_error());
      ars548_config_free(request);
      return exit_usage;
    }
  }
  if (!flags.vehicle.empty()) {
    ars548_config_set_vehicle(
      request, static_cast<float>(flags.vehicle[0]), static_cast<float>(flags.vehicle[1]),
      static_cast<float>(flags.vehicle[2]), static_cast<float>(flags.vehicle[3]));
  }
  const bool radar_requested = flags.max_distance.has_value() ||
                               flags.frequency_slot.has_value() || flags.cycle_time.has_value() ||
                               flags.powersave.has_value() || !flags.radar_ip.empty();
  if (radar_requested) {
    // Unspecified radar fields fall back to documented defaults; the sensor
    // applies the group as a whole.
    uint32_t radar_ipv4 = transport.sensor_ipv4;
    if (!flags.radar_ip.empty()) {
      const auto parsed = parse_address(flags.radar_ip);
      if (!parsed) {
        LOG_ERROR("--radar-ip '%s' is not a dotted-quad address", flags.radar_ip.c_str());
        ars548_config_free(request);
        return exit_usage;
      }
      radar_ipv4 = *parsed;
    }
    if (ars548_config_set_radar(
          request, flags.max_distance.value_or(300), flags.frequency_slot.value_or(ARS548_SLOT_MID),
          static_cast<uint8_t>(flags.cycle_time.value_or(75)), radar_ipv4,
          flags.powersave.value_or(false) ? 1 : 0) != ARS548_OK) {
      LOG_ERROR("--frequency-slot: %s", ars548_last_error());
      ars548_config_free(request);
      return exit_usage;
    }
  }
  if (!flags.new_ip.empty()) {
    const auto parsed = parse_address(flags.new_ip);
    if (!parsed) {
      LOG_ERROR("--new-ip '%s' is not a dotted-quad address", flags.new_ip.c_str());
      ars548_config_free(request);
      return exit_usage;
    }
    ars548_config_set_new_ip(request, *parsed);
  }

  if (flags.mounting.empty() && flags.vehicle.empty() && !radar_requested && flags.new_ip.empty()) {
    LOG_ERROR("nothing to configure; pass at least one parameter flag");
    ars548_config_free(request);
    return exit_usage;
  }

  int outcome = -1;
  const int rc = ars548_send_configuration(&transport, request, &outcome);
  ars548_config_free(request);
  if (rc == ARS548_ERR_INVALID_ARGUMENT) {
    LOG_ERROR("rejected before sending: %s", ars548_last_error());
    return exit_usage;
  }
  if (rc != ARS548_OK) {
    LOG_ERROR("send failed: %s", ars548_last_error());
    return exit_runtime;
  }
  std::printf("%s\n", ars548_config_outcome_name(outcome));
  return outcome == ARS548_CONFIG_CONFIRMED ? exit_success : exit_runtime;
}

/* ------------------------------------------------------------------ */
/* simulate                                                           */

struct SimulateFlags
{
  std::string scenario_path;
  std::string target = "127.0.0.1:42102";
  uint16_t config_port = 42101;
  std::optional<uint64_t> seed;
  std::string ground_truth_path;
  bool no_pace = false;
};

int run_simulate(const SimulateFlags & flags)
{
  uint32_t target_ipv4 = 0x7F000001;
  uint16_t target_port = 42102;
  if (!parse_endpoint(flags.target, target_ipv4, target_port)) {
    LOG_ERROR("--target '%s' is not addr or addr:port", flags.target.c_str());
    return exit_usage;
  }

  ars548_scenario * scenario = ars548_scenario_load(flags.scenario_path.c_str());
  if (scenario == nullptr) {
    LOG_ERROR("cannot load scenario: %s", ars548_last_error());
    return exit_runtime;
  }
  if (flags.seed) {
    ars548_scenario_set_seed(scenario, *flags.seed);
  }
  LOG_INFO(
    "scenario '%s': %" PRIu64 " cycles at %.3g Hz", ars548_scenario_name(scenario),
    ars548_scenario_cycles(scenario), ars548_scenario_rate_hz(scenario));

  ars548_sim_options options;
  ars548_sim_options_default(&options);
  options.target_ipv4 = target_ipv4;
  options.target_port = target_port;
  options.config_port = flags.config_port;
  options.ground_truth_path =
    flags.ground_truth_path.empty() ? nullptr : flags.ground_truth_path.c_str();
  options.pace = flags.no_pace ? 0 : 1;

  ars548_sim * sim = ars548_sim_new(scenario);
  g_active_sim.store(sim, std::memory_order_relaxed);

  ars548_sim_summary summary{};
  const int rc = ars548_sim_run(sim, &options, &summary);
  g_active_sim.store(nullptr, std::memory_order_relaxed);

  std::printf(
    "cycles=%" PRIu64 " detection_frames=%" PRIu64 " object_frames=%" PRIu64
    " status_frames=%" PRIu64 " configurations_applied=%" PRIu64
    " configurations_rejected=%" PRIu64 "\n",
    summary.cycles, summary.detection_frames, summary.object_frames, summary.status_frames,
    summary.configurations_applied, summary.configurations_rejected);

  int code = exit_success;
  if (rc != ARS548_OK) {
    LOG_ERROR("simulation failed: %s", ars548_last_error());
    code = exit_runtime;
  }
  ars548_sim_free(sim);
  ars548_scenario_free(scenario);
  return code;
}

}  // namespace

int main(int argc, char ** argv)
{
  init_log_level();
  g_stop = ars548_stop_new();
  install_interrupt_handler();

  CLI::App app{"Driver toolkit for the ARS 548 RDI radar"};
  app.require_subcommand(1);

  ListenFlags listen_flags;
  CLI::App * listen = app.add_subcommand("listen", "Receive, filter, and export live frames");
  add_receiver_flags(*listen, listen_flags.receiver);
  listen->add_option("--stamp", listen_flags.stamp, "Timestamp policy")
    ->check(CLI::IsMember({"keep", "local"}))
    ->capture_default_str();
  listen->add_option(
    "--filter", listen_flags.filter_expression,
    "Object filter, key=value terms joined by '&' (keys: min_speed_kmh, class, moving_only)");
  listen->add_option("--export", listen_flags.export_format, "Write point clouds as they arrive")
    ->check(CLI::IsMember({"csv", "pcd", "jsonl"}));
  listen->add_option("--out", listen_flags.out_dir, "Output directory for --export");
  listen->add_option("--stats-every", listen_flags.stats_every_seconds,
                     "Seconds between counter lines (0 = only at exit)")
    ->capture_default_str();

  RecordFlags record_flags;
  CLI::App * record = app.add_subcommand("record", "Capture raw datagrams to a log file");
  add_receiver_flags(*record, record_flags.receiver);
  record->add_option("--out", record_flags.out_path, "Log file to write")->required();

  ReplayFlags replay_flags;
  CLI::App * replay = app.add_subcommand("replay", "Resend a recorded log over UDP");
  replay->add_option("--in", replay_flags.in_path, "Log file to read")->required();
  replay->add_option("--target", replay_flags.target, "Destination addr or addr:port")
    ->capture_default_str();
  replay->add_option("--speed", replay_flags.speed, "Pacing factor (2 = twice as fast)")
    ->capture_default_str();
  replay->add_flag("--fast", replay_flags.fast, "Ignore recorded timing entirely");

  ExportFlags export_flags;
  CLI::App * exporter = app.add_subcommand("export", "Convert a recorded log to point clouds");
  exporter->add_option("--in", export_flags.in_path, "Log file to read")->required();
  exporter->add_option("--format", export_flags.format, "Output format")
    ->check(CLI::IsMember({"csv", "pcd", "jsonl"}))
    ->required();
  exporter->add_option("--out", export_flags.out_dir, "Output directory")->required();
  exporter->add_option(
    "--filter", export_flags.filter_expression, "Object filter applied before export");

  ConfigureFlags configure_flags;
  CLI::App * configure = app.add_subcommand("configure", "Send a parameter change to the sensor");
  configure->add_option("--sensor-ip", configure_flags.sensor_ip, "Sensor address")
    ->capture_default_str();
  configure->add_option("--config-port", configure_flags.config_port, "Sensor configuration port")
    ->capture_default_str();
  configure->add_option("--data-port", configure_flags.data_port,
                        "Data port watched for the status echo")
    ->capture_default_str();
  configure->add_option("--group", configure_flags.group,
                        "Multicast group for the status echo, or 'none'")
    ->capture_default_str();
  configure
    ->add_option(
      "--mounting", configure_flags.mounting,
      "Mounting pose: longitudinal lateral vertical yaw pitch plug(0=left,1=right)")
    ->expected(6);
  configure
    ->add_option(
      "--vehicle", configure_flags.vehicle, "Vehicle dimensions: length width height wheelbase")
    ->expected(4);
  configure->add_option("--max-distance", configure_flags.max_distance,
                        "Detection range limit in meters [99, 1500]");
  configure->add_option("--frequency-slot", configure_flags.frequency_slot,
                        "0 = low, 1 = mid, 2 = high");
  configure->add_option("--cycle-time", configure_flags.cycle_time,
                        "Cycle time in ms [50, 100] (default 75 when the radar group is sent)")
    ->check(CLI::Range(50, 100));
  configure->add_option("--powersave", configure_flags.powersave,
                        "Powersave at standstill (true/false)");
  configure->add_option("--radar-ip", configure_flags.radar_ip,
                        "Sensor address field inside the radar group (default --sensor-ip)");
  configure->add_option("--new-ip", configure_flags.new_ip, "Assign a new sensor address");

  SimulateFlags simulate_flags;
  CLI::App * simulate = app.add_subcommand("simulate", "Emit scenario frames like a live sensor");
  simulate->add_option("--scenario", simulate_flags.scenario_path, "Scenario JSON file")
    ->required();
  simulate->add_option("--target", simulate_flags.target, "Destination addr or addr:port")
    ->capture_default_str();
  simulate->add_option("--config-port", simulate_flags.config_port,
                       "Port that accepts configuration requests")
    ->capture_default_str();
  simulate->add_option("--seed", simulate_flags.seed, "Override the scenario's noise seed");
  simulate->add_option("--ground-truth", simulate_flags.ground_truth_path,
                       "Write per-cycle ground truth JSONL here");
  simulate->add_flag("--no-pace", simulate_flags.no_pace, "Emit as fast as possible");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return exit_usage;
  }

  int code = exit_usage;
  if (*listen) {
    code = run_listen(listen_flags);
  } else if (*record) {
    code = run_record(record_flags);
  } else if (*replay) {
    code = run_replay(replay_flags);
  } else if (*exporter) {
    code = run_export(export_flags);
  } else if (*configure) {
    code = run_configure(configure_flags);
  } else if (*simulate) {
    code = run_simulate(simulate_flags);
  }

  ars548_stop_free(g_stop);
  g_stop = nullptr;
  return code;
}
