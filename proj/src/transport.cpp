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

#include "transport.hpp"

#include <chrono>

namespace ars548
{

namespace
{

const char * frame_kind_name(FrameKind kind)
{
  switch (kind) {
    case FrameKind::status:
      return "status";
    case FrameKind::object_list:
      return "object_list";
    case FrameKind::detection_list:
      return "detection_list";
  }
  return "unknown";
}

bool is_multicast(uint32_t ipv4)
{
  return (ipv4 & 0xF0000000u) == 0xE0000000u;
}

}  // namespace

std::optional<std::string> validate_transport_config(const TransportConfig & config)
{
  if (config.listen_port == 0) {
    return "listen_port must be nonzero";
  }
  if (config.config_port == 0) {
    return "config_port must be nonzero";
  }
  if (config.multicast_group && !is_multicast(*config.multicast_group)) {
    return "multicast_group " + ipv4_to_string(*config.multicast_group) +
           " is not in 224.0.0.0/4";
  }
  return std::nullopt;
}

uint64_t DriverStats::frames_ok_total() const
{
  uint64_t total = 0;
  for (const auto count : frames_ok) {
    total += count;
  }
  return total;
}

uint64_t DriverStats::frames_error_total() const
{
  uint64_t total = 0;
  for (const auto count : frames_error) {
    total += count;
  }
  return total;
}

std::string DriverStats::to_text() const
{
  std::string out;
  for (std::size_t kind = 0; kind < kind_count; ++kind) {
    out += "frames_ok.";
    out += frame_kind_name(static_cast<FrameKind>(kind));
    out += "=" + std::to_string(frames_ok[kind]) + "\n";
  }
  for (std::size_t kind = 0; kind < error_kind_count; ++kind) {
    out += "frames_error.";
    out += wire_error_kind_name(static_cast<WireError::Kind>(kind));
    out += "=" + std::to_string(frames_error[kind]) + "\n";
  }
  for (std::size_t kind = 0; kind < kind_count; ++kind) {
    if (last_sequence[kind]) {
      out += "last_sequence.";
      out += frame_kind_name(static_cast<FrameKind>(kind));
      out += "=" + std::to_string(*last_sequence[kind]) + "\n";
    }
  }
  out += "sequence_gaps=" + std::to_string(sequence_gaps) + "\n";
  out += "datagrams_received=" + std::to_string(datagrams_received) + "\n";
  out += "bytes_received=" + std::to_string(bytes_received) + "\n";
  return out;
}

std::optional<std::string> Receiver::open(const TransportConfig & config)
{
  if (auto invalid = validate_transport_config(config)) {
    return invalid;
  }
  config_ = config;
  stats_ = DriverStats{};
  last_error_.clear();
  return socket_.open_bound(
    config.listen_port, config.interface_address, config.multicast_group,
    config.receive_buffer_bytes);
}

std::optional<Frame> Receiver::poll(int timeout_ms)
{
  Endpoint source;
  RecvTime recv_time;
  std::string error;
  const int received =
    socket_.receive(timeout_ms, buffer_.data(), buffer_.size(), source, recv_time, error);
  if (received < 0) {
    last_error_ = error;
    return std::nullopt;
  }
  if (received == 0) {
    return std::nullopt;
  }

  const ByteView datagram(buffer_.data(), static_cast<std::size_t>(received));
  ++stats_.datagrams_received;
  stats_.bytes_received += static_cast<uint64_t>(received);
  if (raw_sink_) {
    raw_sink_(datagram, recv_time, source);
  }

  auto decoded = decode_frame(datagram, recv_time, source);
  if (!decoded.ok()) {
    ++stats_.frames_error[static_cast<std::size_t>(decoded.error().kind)];
    return std::nullopt;
  }

  Frame frame = std::move(decoded.value());
  const auto kind = static_cast<std::size_t>(frame.kind());
  ++stats_.frames_ok[kind];

  // Status frames carry no sequence counter; gap tracking covers the two
  // list kinds.
  if (frame.kind() != FrameKind::status) {
    const uint32_t sequence = std::visit(
      [](const auto & payload) -> uint32_t {
        if constexpr (requires { payload.sequence_counter; }) {
          return payload.sequence_counter;
        } else {
          return 0;
        }
      },
      frame.payload);
    if (stats_.last_sequence[kind]) {
      // 32-bit wraparound-safe: a gap is any step other than exactly +1.
      const uint32_t step = sequence - *stats_.last_sequence[kind];
      if (step != 1) {
        ++stats_.sequence_gaps;
      }
    }
    stats_.last_sequence[kind] = sequence;
  }

  return apply_stamp_policy(std::move(frame), config_.stamp_policy);
}

DriverStats run_receiver(
  const TransportConfig & config, const std::function<void(const Frame &)> & sink,
  const std::atomic<bool> & stop, std::string * startup_error)
{
  Receiver receiver;
  if (auto failed = receiver.open(config)) {
    if (startup_error != nullptr) {
      *startup_error = *failed;
    }
    return DriverStats{};
  }
  while (!stop.load(std::memory_order_relaxed)) {
    if (auto frame = receiver.poll(50)) {
      sink(*frame);
    }
    if (!receiver.last_error().empty()) {
      if (startup_error != nullptr) {
        *startup_error = receiver.last_error();
      }
      break;
    }
  }
  return receiver.stats();
}

const char * config_outcome_name(ConfigOutcome outcome)
{
  switch (outcome) {
    case ConfigOutcome::confirmed:
      return "CONFIRMED";
    case ConfigOutcome::unconfirmed:
      return "UNCONFIRMED";
    case ConfigOutcome::mismatch:
      return "MISMATCH";
  }
  return "UNKNOWN";
}

bool status_matches_request(const SensorStatus & status, const SensorConfiguration & request)
{
  if (request.mounting && !(status.mounting == *request.mounting)) {
    return false;
  }
  if (request.vehicle && !(status.vehicle == *request.vehicle)) {
    return false;
  }
  if (request.radar && !(status.radar == *request.radar)) {
    return false;
  }
  if (request.new_sensor_ipv4 && status.radar.sensor_ipv4 != *request.new_sensor_ipv4) {
    return false;
  }
  return true;
}

std::optional<ConfigOutcome> send_configuration(
  const TransportConfig & config, const SensorConfiguration & request, std::string & error)
{
  if (auto invalid = validate_transport_config(config)) {
    error = *invalid;
    return std::nullopt;
  }
  auto encoded = encode_configuration(request);
  if (!encoded.ok()) {
    error = encoded.error().to_string();
    return std::nullopt;
  }

  // Listen for the Status echo on the data port. Opened before sending so a
  // fast echo cannot slip past.
  UdpSocket listen_socket;
  if (
    auto failed = listen_socket.open_bound(
      config.listen_port, config.interface_address, config.multicast_group,
      config.receive_buffer_bytes)) {
    error = "listen: " + *failed;
    return std::nullopt;
  }
  UdpSocket send_socket;
  if (auto failed = send_socket.open_sender()) {
    error = *failed;
    return std::nullopt;
  }
  if (auto failed =
        send_socket.send_to(encoded.value(), config.sensor_address, config.config_port)) {
    error = *failed;
    return std::nullopt;
  }

  const auto deadline =
    std::chrono::steady_clock::now() + std::chrono::milliseconds(ack_timeout_ms);
  std::vector<uint8_t> buffer(65535);
  bool status_seen = false;
  while (true) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      break;
    }
    Endpoint source;
    RecvTime recv_time;
    std::string receive_error;
    const int received = listen_socket.receive(
      static_cast<int>(remaining.count()), buffer.data(), buffer.size(), source, recv_time,
      receive_error);
    if (received < 0) {
      error = receive_error;
      return std::nullopt;
    }
    if (received == 0) {
      continue;
    }
    auto decoded = decode_frame(
      ByteView(buffer.data(), static_cast<std::size_t>(received)), recv_time, source);
    if (!decoded.ok()) {
      continue;
    }
    const auto * status = std::get_if<SensorStatus>(&decoded.value().payload);
    if (status == nullptr) {
      continue;
    }
    status_seen = true;
    if (status_matches_request(*status, request)) {
      return ConfigOutcome::confirmed;
    }
  }
  return status_seen ? ConfigOutcome::mismatch : ConfigOutcome::unconfirmed;
}

}  // namespace ars548
