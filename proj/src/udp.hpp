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

#include <cstdint>
#include <optional>
#include <string>

namespace ars548
{

/// Wall and monotonic clocks sampled back to back.
RecvTime sample_recv_time();

/// Thin RAII wrapper over a UDP/IPv4 socket. Addresses are host-order
/// IPv4 words throughout, matching the rest of the toolkit.
class UdpSocket
{
public:
  UdpSocket() = default;
  ~UdpSocket();
  UdpSocket(const UdpSocket &) = delete;
  UdpSocket & operator=(const UdpSocket &) = delete;
  UdpSocket(UdpSocket && other) noexcept;
  UdpSocket & operator=(UdpSocket && other) noexcept;

  /// Binds for reception. bind_address empty = INADDR_ANY. A multicast
  /// group, when given, is joined on bind_address (or the default
  /// interface). receive_buffer_bytes <= 0 keeps the system default.
  std::optional<std::string> open_bound(
    uint16_t port, std::optional<uint32_t> bind_address, std::optional<uint32_t> multicast_group,
    int receive_buffer_bytes);

  /// Unbound socket for sending only.
  std::optional<std::string> open_sender();

  /// Waits up to timeout_ms for one datagram. Returns the byte count,
  /// 0 on timeout, -1 on error (with `error` set). recv_time is sampled
  /// immediately after the datagram lands.
  int receive(
    int timeout_ms, uint8_t * buffer, std::size_t capacity, Endpoint & source,
    RecvTime & recv_time, std::string & error);

  std::optional<std::string> send_to(ByteView bytes, uint32_t ipv4, uint16_t port);

  bool is_open() const { return fd_ >= 0; }

  /// Port actually bound (useful after binding port 0).
  uint16_t bound_port() const;

  void close();

private:
  int fd_{-1};
};

}  // namespace ars548
