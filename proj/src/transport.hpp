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

#include "codec.hpp"
#include "model.hpp"
#include "udp.hpp"

#include <array>
#include <atomic>
#include <functional>
#include <optional>
#include <string>

namespace ars548
{

inline constexpr uint16_t default_data_port = 42102;
inline constexpr uint16_t default_config_port = 42101;
inline constexpr uint32_t default_multicast_group = 0xE0000202;  // 224.0.2.2
inline constexpr uint32_t default_sensor_address = 0x0A0D0171;   // 10.13.1.113
inline constexpr int ack_timeout_ms = 2000;

struct TransportConfig
{
  uint16_t listen_port{default_data_port};
  std::optional<uint32_t> multicast_group{default_multicast_group};
  std::optional<uint32_t> interface_address{};
  uint32_t sensor_address{default_sensor_address};
  uint16_t config_port{default_config_port};
  StampPolicy stamp_policy{StampPolicy::override_local};
  int receive_buffer_bytes{4 * 1024 * 1024};

  bool operator==(const TransportConfig &) const = default;
};

/// nullopt when the config is usable; otherwise the reason.
std::optional<std::string> validate_transport_config(const TransportConfig & config);

/// Receive-side counters. All monotone; snapshot semantics via copy.
struct DriverStats
{
  static constexpr std::size_t kind_count = 3;
  static constexpr std::size_t error_kind_count = 6;

  std::array<uint64_t, kind_count> frames_ok{};          // indexed by FrameKind
  std::array<uint64_t, error_kind_count> frames_error{};  // indexed by WireError::Kind
  std::array<std::optional<uint32_t>, kind_count> last_sequence{};
  uint64_t sequence_gaps{};
  uint64_t datagrams_received{};
  uint64_t bytes_received{};

  uint64_t frames_ok_total() const;
  uint64_t frames_error_total() const;

  /// Line-oriented key=value dump, stable key order.
  std::string to_text() const;
};

/// UDP receiver with decode, stamp policy, and statistics. Typical use:
/// open(), then poll() in a loop; or the run_receiver() convenience wrapper.
class Receiver
{
public:
  using RawSink = std::function<void(ByteView, RecvTime, Endpoint)>;

  Receiver() = default;

  std::optional<std::string> open(const TransportConfig & config);

  /// Called for every datagram before decoding (recorder hook).
  void set_raw_sink(RawSink sink) { raw_sink_ = std::move(sink); }

  /// Waits up to timeout_ms. Returns a decoded frame with the stamp policy
  /// applied, or nullopt on timeout / undecodable datagram (stats updated
  /// either way). Fatal socket errors surface through last_error().
  std::optional<Frame> poll(int timeout_ms);

  const DriverStats & stats() const { return stats_; }
  const std::string & last_error() const { return last_error_; }
  bool is_open() const { return socket_.is_open(); }
  void close() { socket_.close(); }

private:
  TransportConfig config_{};
  UdpSocket socket_;
  DriverStats stats_{};
  RawSink raw_sink_;
  std::string last_error_;
  std::vector<uint8_t> buffer_ = std::vector<uint8_t>(65535);
};

/// Runs a receive loop until `stop` goes true; valid frames go to the sink
/// in arrival order. Returns the final statistics. Startup failures are
/// reported through `startup_error` and return empty stats.
DriverStats run_receiver(
  const TransportConfig & config, const std::function<void(const Frame &)> & sink,
  const std::atomic<bool> & stop, std::string * startup_error = nullptr);

enum class ConfigOutcome : uint8_t {
  confirmed = 0,    // a Status echoed all requested groups within the window
  unconfirmed = 1,  // no Status arrived before the 2 s timeout
  mismatch = 2,     // Status arrived but some requested value differs
};

const char * config_outcome_name(ConfigOutcome outcome);

/// True iff every group present in the request is echoed exactly by the
/// status (new_sensor_ipv4 compares against radar.sensor_ipv4).
bool status_matches_request(const SensorStatus & status, const SensorConfiguration & request);

/// Validates and sends a configuration frame to the sensor, then listens on
/// the data port for Status echoes until ACK_TIMEOUT. On failure before any
/// transmission, `error` is set and nullopt returned.
std::optional<ConfigOutcome> send_configuration(
  const TransportConfig & config, const SensorConfiguration & request, std::string & error);

}  // namespace ars548
