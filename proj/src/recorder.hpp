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

#include <atomic>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

namespace ars548
{

// Log file layout, all integers big-endian like the wire codec:
//   magic "ARS548LOG\0" (10 bytes), version u16 = 1,
//   then per record: recv_time u64 | source ipv4 u32 | source port u16 |
//   payload length u32 | payload bytes.
inline constexpr std::size_t log_header_size = 12;
inline constexpr std::size_t log_record_prefix_size = 18;
inline constexpr uint16_t log_format_version = 1;

/// One captured datagram.
struct LogRecord
{
  uint64_t recv_wall_ns{};
  Endpoint source{};
  Bytes payload;

  bool operator==(const LogRecord &) const = default;
};

/// Read or write failure with the offset that triggered it.
struct LogError
{
  std::string path;
  uint64_t byte_offset{};
  std::string message;

  std::string to_string() const;
};

/// Appends datagrams to a log file. Writes the header on open, flushes on
/// close.
class LogWriter
{
public:
  LogWriter() = default;
  ~LogWriter();
  LogWriter(const LogWriter &) = delete;
  LogWriter & operator=(const LogWriter &) = delete;

  std::optional<LogError> open(const std::string & path);
  std::optional<LogError> write(const LogRecord & record);
  std::optional<LogError> close();

  uint64_t records_written() const { return records_; }

private:
  std::FILE * file_{nullptr};
  std::string path_;
  uint64_t offset_{};
  uint64_t records_{};
};

/// Sequential log reader. A clean truncation mid-record stops iteration and
/// raises truncated_tail() instead of an error, reporting every complete
/// record before the cut.
class LogReader
{
public:
  LogReader() = default;
  ~LogReader();
  LogReader(const LogReader &) = delete;
  LogReader & operator=(const LogReader &) = delete;

  std::optional<LogError> open(const std::string & path);

  /// nullopt at end of input (check error()/truncated_tail() to see why).
  std::optional<LogRecord> next();

  bool truncated_tail() const { return truncated_; }
  const std::optional<LogError> & error() const { return error_; }
  uint64_t records_read() const { return records_; }

private:
  std::FILE * file_{nullptr};
  std::string path_;
  uint64_t offset_{};
  uint64_t records_{};
  bool truncated_{false};
  std::optional<LogError> error_;
};

struct ReplaySummary
{
  uint64_t records{};
  uint64_t bytes{};
  bool truncated_tail{false};
  std::optional<LogError> error;

  bool ok() const { return !error.has_value(); }
};

/// Replays a log into a callback, reproducing the recorded inter-record
/// delays divided by speed_factor. as_fast_as_possible skips all pacing.
/// A stop flag (may be null) aborts between records.
ReplaySummary replay_log(
  const std::string & path, const std::function<void(const LogRecord &)> & sink,
  double speed_factor, bool as_fast_as_possible, const std::atomic<bool> * stop = nullptr);

/// Replays a log to a UDP endpoint with the same pacing contract.
ReplaySummary replay_log_to_udp(
  const std::string & path, uint32_t target_ipv4, uint16_t target_port, double speed_factor,
  bool as_fast_as_possible, const std::atomic<bool> * stop = nullptr);

}  // namespace ars548
