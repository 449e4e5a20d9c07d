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

#include "udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ctime>
#include <utility>

namespace ars548
{

namespace
{

std::string errno_message(const char * action)
{
  return std::string(action) + ": " + std::strerror(errno);
}

uint64_t clock_ns(clockid_t clock)
{
  timespec ts{};
  clock_gettime(clock, &ts);
  return static_cast<uint64_t>(ts.tv_sec) * 1'000'000'000ull + static_cast<uint64_t>(ts.tv_nsec);
}

sockaddr_in make_addr(uint32_t ipv4, uint16_t port)
{
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(ipv4);
  addr.sin_port = htons(port);
  return addr;
}

}  // namespace

RecvTime sample_recv_time()
{
  return RecvTime{clock_ns(CLOCK_REALTIME), clock_ns(CLOCK_MONOTONIC)};
}

UdpSocket::~UdpSocket()
{
  close();
}

UdpSocket::UdpSocket(UdpSocket && other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

UdpSocket & UdpSocket::operator=(UdpSocket && other) noexcept
{
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

std::optional<std::string> UdpSocket::open_bound(
  uint16_t port, std::optional<uint32_t> bind_address, std::optional<uint32_t> multicast_group,
  int receive_buffer_bytes)
{
  close();
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) {
    return errno_message("socket");
  }

  const int one = 1;
  if (::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one)) != 0) {
    const std::string message = errno_message("setsockopt(SO_REUSEADDR)");
    close();
    return message;
  }
  if (receive_buffer_bytes > 0) {
    // Best effort; the kernel may clamp to rmem_max.
    ::setsockopt(
      fd_, SOL_SOCKET, SO_RCVBUF, &receive_buffer_bytes, sizeof(receive_buffer_bytes));
  }

  // Multicast reception needs an INADDR_ANY bind on Linux to accept traffic
  // addressed to the group.
  const uint32_t bind_ip = multicast_group ? INADDR_ANY : bind_address.value_or(INADDR_ANY);
  sockaddr_in addr = make_addr(bind_ip, port);
  if (::bind(fd_, reinterpret_cast<const sockaddr *>(&addr), sizeof(addr)) != 0) {
    const std::string message = errno_message("bind");
    close();
    return message;
  }

  if (multicast_group) {
    ip_mreq request{};
    request.imr_multiaddr.s_addr = htonl(*multicast_group);
    request.imr_interface.s_addr = htonl(bind_address.value_or(INADDR_ANY));
    if (::setsockopt(fd_, IPPROTO_IP, IP_ADD_MEMBERSHIP, &request, sizeof(request)) != 0) {
      const std::string message =
        errno_message(("join " + ipv4_to_string(*multicast_group)).c_str());
      close();
      return message;
    }
  }
  return std::nullopt;
}

std::optional<std::string> UdpSocket::open_sender()
{
  close();
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) {
    return errno_message("socket");
  }
  return std::nullopt;
}

int UdpSocket::receive(
  int timeout_ms, uint8_t * buffer, std::size_t capacity, Endpoint & source, RecvTime & recv_time,
  std::string & error)
{
  pollfd pfd{fd_, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, timeout_ms);
  if (ready == 0) {
    return 0;
  }
  if (ready < 0) {
    if (errno == EINTR) {
      return 0;
    }
    error = errno_message("poll");
    return -1;
  }

  sockaddr_in from{};
  socklen_t from_len = sizeof(from);
  const ssize_t received = ::recvfrom(
    fd_, buffer, capacity, 0, reinterpret_cast<sockaddr *>(&from), &from_len);
  recv_time = sample_recv_time();
  if (received < 0) {
    if (errno == EAGAIN || errno == EINTR) {
      return 0;
    }
    error = errno_message("recvfrom");
    return -1;
  }
  source.ipv4 = ntohl(from.sin_addr.s_addr);
  source.port = ntohs(from.sin_port);
  return static_cast<int>(received);
}

std::optional<std::string> UdpSocket::send_to(ByteView bytes, uint32_t ipv4, uint16_t port)
{
  sockaddr_in addr = make_addr(ipv4, port);
  const ssize_t sent = ::sendto(
    fd_, bytes.data(), bytes.size(), 0, reinterpret_cast<const sockaddr *>(&addr), sizeof(addr));
  if (sent < 0 || static_cast<std::size_t>(sent) != bytes.size()) {
    return errno_message(("sendto " + ipv4_to_string(ipv4)).c_str());
  }
  return std::nullopt;
}

uint16_t UdpSocket::bound_port() const
{
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (::getsockname(fd_, reinterpret_cast<sockaddr *>(&addr), &len) != 0) {
    return 0;
  }
  return ntohs(addr.sin_port);
}

void UdpSocket::close()
{
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace ars548
