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

#include "recorder.hpp"

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "udp.hpp"

namespace ars548
{

namespace
{

constexpr char log_magic[10] = {'A', 'R', 'S', '5', '4', '8', 'L', 'O', 'G', '\0'};

void put_u16(uint8_t * out, uint16_t v)
{
  out[0] = static_cast<uint8_t>(v >> 8);
  out[1] = static_cast<uint8_t>(v);
}

void put_u32(uint8_t * out, uint32_t v)
{
  put_u16(out, static_cast<uint16_t>(v >> 16));
  put_u16(out + 2, static_cast<uint16_t>(v));
}

void put_u64(uint8_t * out, uint64_t v)
{
  put_u32(out, static_cast<uint32_t>(v >> 32));
  put_u32(out + 4, static_cast<uint32_t>(v));
}

uint16_t get_u16(const uint8_t * in)
{
  return static_cast<uint16_t>(static_cast<uint16_t>(in[0]) << 8 | in[1]);
}

uint32_t get_u32(const uint8_t * in)
{
  return static_cast<uint32_t>(get_u16(in)) << 16 | get_u16(in + 2);
}

uint64_t get_u64(const uint8_t * in)
{
  return static_cast<uint64_t>(get_u32(in)) << 32 | get_u32(in + 4);
}

LogError errno_error(const std::string & path, uint64_t offset, const char * action)
{
  return LogError{path, offset, std::string(action) + ": " + std::strerror(errno)};
}

}  // namespace

std::string LogError::to_string() const
{
  return path + " at byte " + std::to_string(byte_offset) + ": " + message;
}

LogWriter::~LogWriter()
{
  if (file_ != nullptr) {
    std::fclose(file_);
  }
}

std::optional<LogError> LogWriter::open(const std::string & path)
{
  path_ = path;
  offset_ = 0;
  records_ = 0;
  file_ = std::fopen(path.c_str(), "wb");
  if (file_ == nullptr) {
    return errno_error(path_, 0, "open");
  }
  uint8_t header[log_header_size];
  std::memcpy(header, log_magic, sizeof(log_magic));
  put_u16(header + sizeof(log_magic), log_format_version);
  if (std::fwrite(header, 1, sizeof(header), file_) != sizeof(header)) {
    return errno_error(path_, 0, "write header");
  }
  offset_ = log_header_size;
  return std::nullopt;
}

std::optional<LogError> LogWriter::write(const LogRecord & record)
{
  if (file_ == nullptr) {
    return LogError{path_, offset_, "write: log not open"};
  }
  uint8_t prefix[log_record_prefix_size];
  put_u64(prefix, record.recv_wall_ns);
  put_u32(prefix + 8, record.source.ipv4);
  put_u16(prefix + 12, record.source.port);
  put_u32(prefix + 14, static_cast<uint32_t>(record.payload.size()));
  if (std::fwrite(prefix, 1, sizeof(prefix), file_) != sizeof(prefix)) {
    return errno_error(path_, offset_, "write record prefix");
  }
  if (
    !record.payload.empty() &&
    std::fwrite(record.payload.data(), 1, record.payload.size(), file_) !=
      record.payload.size()) {
    return errno_error(path_, offset_ + log_record_prefix_size, "write record payload");
  }
  offset_ += log_record_prefix_size + record.payload.size();
  ++records_;
  return std::nullopt;
}

std::optional<LogError> LogWriter::close()
{
  if (file_ == nullptr) {
    return std::nullopt;
  }
  std::optional<LogError> result;
  if (std::fflush(file_) != 0) {
    result = errno_error(path_, offset_, "flush");
  }
  if (std::fclose(file_) != 0 && !result) {
    result = errno_error(path_, offset_, "close");
  }
  file_ = nullptr;
  return result;
}

LogReader::~LogReader()
{
  if (file_ != nullptr) {
    std::fclose(file_);
  }
}

std::optional<LogError> LogReader::open(const std::string & path)
{
  path_ = path;
  offset_ = 0;
  records_ = 0;
  truncated_ = false;
  error_.reset();
  file_ = std::fopen(path.c_str(), "rb");
  if (file_ == nullptr) {
    return errno_error(path_, 0, "open");
  }
  uint8_t header[log_header_size];
  const std::size_t read = std::fread(header, 1, sizeof(header), file_);
  if (read != sizeof(header)) {
    return LogError{
      path_, read, "file shorter than the 12-byte log header (" + std::to_string(read) +
                     " bytes)"};
  }
  if (std::memcmp(header, log_magic, sizeof(log_magic)) != 0) {
    return LogError{path_, 0, "bad magic, not an ARS548LOG file"};
  }
  const uint16_t version = get_u16(header + sizeof(log_magic));
  if (version != log_format_version) {
    return LogError{
      path_, sizeof(log_magic),
      "unsupported log version " + std::to_string(version) + ", expected " +
        std::to_string(log_format_version)};
  }
  offset_ = log_header_size;
  return std::nullopt;
}

std::optional<LogRecord> LogReader::next()
{
  if (file_ == nullptr || error_ || truncated_) {
    return std::nullopt;
  }

  uint8_t prefix[log_record_prefix_size];
  const std::size_t prefix_read = std::fread(prefix, 1, sizeof(prefix), file_);
  if (prefix_read == 0 && std::feof(file_)) {
    return std::nullopt;  // clean end of log
  }
  if (prefix_read != sizeof(prefix)) {
    if (std::feof(file_)) {
      truncated_ = true;  // cut inside a record prefix
      return std::nullopt;
    }
    error_ = errno_error(path_, offset_, "read record prefix");
    return std::nullopt;
  }

  LogRecord record;
  record.recv_wall_ns = get_u64(prefix);
  record.source.ipv4 = get_u32(prefix + 8);
  record.source.port = get_u16(prefix + 12);
  const uint32_t length = get_u32(prefix + 14);
  if (length > 65535) {
    error_ = LogError{
      path_, offset_ + 14,
      "record length " + std::to_string(length) + " exceeds the 65535-byte datagram bound"};
    return std::nullopt;
  }

  record.payload.resize(length);
  if (length > 0) {
    const std::size_t payload_read = std::fread(record.payload.data(), 1, length, file_);
    if (payload_read != length) {
      if (std::feof(file_)) {
        truncated_ = true;  // cut inside a payload
        return std::nullopt;
      }
      error_ = errno_error(path_, offset_ + log_record_prefix_size, "read record payload");
      return std::nullopt;
    }
  }

  offset_ += log_record_prefix_size + length;
  ++records_;
  return record;
}

ReplaySummary replay_log(
  const std::string & path, const std::function<void(const LogRecord &)> & sink,
  double speed_factor, bool as_fast_as_possible, const std::atomic<bool> * stop)
{
  ReplaySummary summary;
  if (!as_fast_as_possible && !(speed_factor > 0.0)) {
    summary.error = LogError{path, 0, "speed factor must be > 0"};
    return summary;
  }

  LogReader reader;
  if (auto open_error = reader.open(path)) {
    summary.error = open_error;
    return summary;
  }

  std::optional<uint64_t> previous_recv_ns;
  auto next_deadline = std::chrono::steady_clock::now();
  while (true) {
    if (stop != nullptr && stop->load(std::memory_order_relaxed)) {
      break;
    }
    auto record = reader.next();
    if (!record) {
      break;
    }
    if (!as_fast_as_possible) {
      if (previous_recv_ns && record->recv_wall_ns > *previous_recv_ns) {
        const uint64_t delta_ns = record->recv_wall_ns - *previous_recv_ns;
        next_deadline += std::chrono::nanoseconds(
          static_cast<uint64_t>(static_cast<double>(delta_ns) / speed_factor));
        std::this_thread::sleep_until(next_deadline);
      }
      previous_recv_ns = record->recv_wall_ns;
    }
    sink(*record);
    ++summary.records;
    summary.bytes += record->payload.size();
  }
  summary.truncated_tail = reader.truncated_tail();
  if (reader.error()) {
    summary.error = reader.error();
  }
  return summary;
}

ReplaySummary replay_log_to_udp(
  const std::string & path, uint32_t target_ipv4, uint16_t target_port, double speed_factor,
  bool as_fast_as_possible, const std::atomic<bool> * stop)
{
  UdpSocket sender;
  if (auto socket_error = sender.open_sender()) {
    ReplaySummary summary;
    summary.error = LogError{path, 0, *socket_error};
    return summary;
  }
  std::optional<std::string> send_error;
  ReplaySummary summary = replay_log(
    path,
    [&](const LogRecord & record) {
      if (!send_error) {
        send_error = sender.send_to(record.payload, target_ipv4, target_port);
      }
    },
    speed_factor, as_fast_as_possible, stop);
  if (send_error && !summary.error) {
    summary.error = LogError{path, 0, *send_error};
  }
  return summary;
}

}  // namespace ars548
