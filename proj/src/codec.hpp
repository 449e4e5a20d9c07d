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

#include "model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ars548
{

// Frame header, 10 bytes, all fields big-endian:
//   service_id u16 @0 (always 0), method_id u16 @2, payload_length u32 @4,
//   crc16 u16 @8 (CRC-16/CCITT-FALSE over the payload bytes).
inline constexpr std::size_t header_size = 10;

inline constexpr uint16_t method_status = 380;
inline constexpr uint16_t method_object_list = 329;
inline constexpr uint16_t method_detection_list = 336;
inline constexpr uint16_t method_configuration = 390;

inline constexpr std::size_t detection_record_size = 39;
inline constexpr std::size_t object_record_size = 92;
inline constexpr std::size_t detection_list_prefix_size = 29;
inline constexpr std::size_t object_list_prefix_size = 17;
inline constexpr std::size_t status_payload_size = 60;

/// Decode/encode failure with enough context to log the offending frame.
struct WireError
{
  enum class Kind : uint8_t {
    truncated,       // expected / got byte counts
    unknown_method,  // method carries the offending id
    bad_crc,         // expected (header) / got (computed)
    bad_length,      // expected / got byte counts
    field_range,     // field name / raw value
    count_overflow,  // declared count / maximum
  };

  Kind kind{};
  uint64_t expected{};
  uint64_t got{};
  uint16_t method{};
  std::string field;
  double value{};

  static WireError truncated(uint64_t expected, uint64_t got);
  static WireError unknown_method(uint16_t method);
  static WireError bad_crc(uint16_t expected, uint16_t got);
  static WireError bad_length(uint64_t expected, uint64_t got);
  static WireError field_range(std::string field, double value);
  static WireError count_overflow(uint64_t declared, uint64_t maximum);

  std::string to_string() const;
};

/// Stable lowercase name of an error kind, e.g. "bad_crc". Used as stats key.
const char * wire_error_kind_name(WireError::Kind kind);

/// Value-or-WireError return type for all codec entry points.
template <typename T>
class [[nodiscard]] Result
{
public:
  Result(T value) : data_(std::move(value)) {}
  Result(WireError error) : data_(std::move(error)) {}

  bool ok() const { return data_.index() == 0; }
  explicit operator bool() const { return ok(); }

  T & value() { return std::get<0>(data_); }
  const T & value() const { return std::get<0>(data_); }
  const WireError & error() const { return std::get<1>(data_); }

private:
  std::variant<T, WireError> data_;
};

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final
/// xor. Check value: crc16("123456789") == 0x29B1.
uint16_t crc16_ccitt_false(ByteView data);

/// Reads the method id without a full decode. Needs the whole header.
Result<uint16_t> peek_method(ByteView bytes);

Result<Frame> decode_frame(ByteView bytes, RecvTime recv_time, Endpoint source);

/// Encodes header + payload for any of the three sensor frame kinds.
Result<Bytes> encode_frame(const Frame & frame);

Result<DetectionList> decode_detection_list(ByteView payload);
Result<ObjectList> decode_object_list(ByteView payload);
Result<SensorStatus> decode_status(ByteView payload);

/// Configuration payload: presence bitmask u8 (bit0 mounting, bit1 vehicle,
/// bit2 radar, bit3 new ip), then the present groups in that order.
Result<SensorConfiguration> decode_configuration(ByteView payload);

/// Full CONFIGURATION frame (method 390), header included.
Result<Bytes> encode_configuration(const SensorConfiguration & configuration);

/// Header-validating counterpart of decode_configuration; the simulator's
/// receive path for method 390.
Result<SensorConfiguration> decode_configuration_frame(ByteView bytes);

}  // namespace ars548
