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

#ifndef ARS548_ARS548_H
#define ARS548_ARS548_H

/// C interface to the ARS 548 RDI driver toolkit.
///
/// Conventions:
///  - Functions returning int yield ARS548_OK or an error code; the
///    thread-local ars548_last_error() then carries a human-readable reason.
///  - Functions returning a pointer yield NULL on failure, with the reason
///    in ars548_last_error().
///  - Opaque handles are freed with their matching *_free function. Handles
///    are not thread-safe unless a function says otherwise.
///  - IPv4 addresses are host-order u32 (10.13.1.113 = 0x0A0D0171).

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef ARS548_EXPORT
#define ARS548_EXPORT __attribute__((visibility("default")))
#endif

/* ------------------------------------------------------------------ */
/* Errors and library info                                            */

enum {
  ARS548_OK = 0,
  ARS548_ERR_INVALID_ARGUMENT = 1, /* bad handle, range, or expression     */
  ARS548_ERR_IO = 2,               /* socket or file system failure        */
  ARS548_ERR_DECODE = 3,           /* datagram rejected by the wire codec  */
  ARS548_ERR_TIMEOUT = 4,          /* nothing arrived within the window    */
  ARS548_ERR_END = 5,              /* clean end of a log or stream         */
};

/// Message for the most recent failure on this thread. Never NULL.
ARS548_EXPORT const char * ars548_last_error(void);

/// Library version, "major.minor.patch".
ARS548_EXPORT const char * ars548_version(void);

/* ------------------------------------------------------------------ */
/* Shared constants                                                   */

enum {
  ARS548_FRAME_STATUS = 0,
  ARS548_FRAME_OBJECT_LIST = 1,
  ARS548_FRAME_DETECTION_LIST = 2,
};

enum {
  ARS548_SYNC_OK = 1,
  ARS548_SYNC_NEVER = 2,
  ARS548_SYNC_LOST = 3,
};

enum {
  ARS548_STAMP_KEEP_ORIGINAL = 0,
  ARS548_STAMP_OVERRIDE_LOCAL = 1,
};

enum {
  ARS548_CLASS_UNKNOWN = 0,
  ARS548_CLASS_CAR = 1,
  ARS548_CLASS_TRUCK = 2,
  ARS548_CLASS_MOTORCYCLE = 3,
  ARS548_CLASS_PEDESTRIAN = 4,
  ARS548_CLASS_BICYCLE = 5,
  ARS548_CLASS_ANIMAL = 6,
  ARS548_CLASS_HAZARD = 7,
};

enum {
  ARS548_SLOT_LOW = 0,
  ARS548_SLOT_MID = 1,
  ARS548_SLOT_HIGH = 2,
};

enum {
  ARS548_PLUG_LEFT = 0,
  ARS548_PLUG_RIGHT = 1,
};

/* Configuration acknowledgment outcomes. */
enum {
  ARS548_CONFIG_CONFIRMED = 0,
  ARS548_CONFIG_UNCONFIRMED = 1,
  ARS548_CONFIG_MISMATCH = 2,
};

ARS548_EXPORT const char * ars548_config_outcome_name(int outcome);

/* ------------------------------------------------------------------ */
/* Address helpers                                                    */

/// Parses dotted-quad text. Returns ARS548_OK and fills *out.
ARS548_EXPORT int ars548_ipv4_parse(const char * text, uint32_t * out);

/// Formats a host-order address into buf (at least 16 bytes).
ARS548_EXPORT int ars548_ipv4_format(uint32_t ipv4, char * buf, size_t buf_size);

/* ------------------------------------------------------------------ */
/* Wire codec                                                         */

/// CRC-16/CCITT-FALSE over an arbitrary buffer.
ARS548_EXPORT uint16_t ars548_crc16(const uint8_t * data, size_t size);

/// Reads the method id from a frame header without decoding the payload.
ARS548_EXPORT int ars548_peek_method(const uint8_t * data, size_t size, uint16_t * method);

typedef struct ars548_frame ars548_frame;

/// Decodes one datagram into a frame handle. recv_wall_ns/recv_mono_ns are
/// the host reception stamps (0 if unknown); ipv4/port name the sender.
ARS548_EXPORT int ars548_frame_decode(
  const uint8_t * data, size_t size, uint64_t recv_wall_ns, uint64_t recv_mono_ns, uint32_t ipv4,
  uint16_t port, ars548_frame ** out);

/// Reencodes a frame. Fills buf (cap bytes) and *written.
ARS548_EXPORT int ars548_frame_encode(
  const ars548_frame * frame, uint8_t * buf, size_t cap, size_t * written);

ARS548_EXPORT void ars548_frame_free(ars548_frame * frame);

/* ------------------------------------------------------------------ */
/* Frame accessors                                                    */

/// ARS548_FRAME_* value, or a negative value on a bad handle.
ARS548_EXPORT int ars548_frame_kind(const ars548_frame * frame);

ARS548_EXPORT int ars548_frame_stamp(
  const ars548_frame * frame, uint32_t * seconds, uint32_t * nanoseconds, int * sync_status);

/// Host reception stamps recorded when the frame was decoded.
ARS548_EXPORT int ars548_frame_recv_time(
  const ars548_frame * frame, uint64_t * wall_ns, uint64_t * mono_ns);

ARS548_EXPORT int ars548_frame_source(
  const ars548_frame * frame, uint32_t * ipv4, uint16_t * port);

/// Wire sequence counter. Status frames have none: ARS548_ERR_INVALID_ARGUMENT.
ARS548_EXPORT int ars548_frame_sequence(const ars548_frame * frame, uint32_t * sequence);

/// Record counts; 0 for kinds without that record type.
ARS548_EXPORT size_t ars548_frame_detection_count(const ars548_frame * frame);
ARS548_EXPORT size_t ars548_frame_object_count(const ars548_frame * frame);

typedef struct {
  float azimuth;
  float azimuth_std;
  float elevation;
  float elevation_std;
  float range;
  float range_std;
  float range_rate;
  float range_rate_std;
  int8_t rcs;
  uint8_t invalid_flags;
  uint16_t measurement_id;
  uint16_t object_id;
  uint8_t classification;
} ars548_detection;

typedef struct {
  uint32_t id;
  uint16_t age;
  uint8_t status_measurement;
  uint8_t status_movement;
  float position_x;
  float position_y;
  float position_z;
  float position_std_x;
  float position_std_y;
  float position_std_z;
  float orientation_yaw;
  float orientation_yaw_std;
  float velocity_rel_x;
  float velocity_rel_y;
  float velocity_std_x;
  float velocity_std_y;
  float acceleration_rel_x;
  float acceleration_rel_y;
  float acceleration_std_x;
  float acceleration_std_y;
  float yaw_rate;
  float shape_length;
  float shape_width;
  uint8_t classification_probabilities[8];
} ars548_object;

typedef struct {
  uint32_t stamp_seconds;
  uint32_t stamp_nanoseconds;
  uint8_t stamp_sync;
  uint8_t software_version_major;
  uint8_t software_version_minor;
  uint8_t software_version_patch;
  float mounting_longitudinal;
  float mounting_lateral;
  float mounting_vertical;
  float mounting_yaw;
  float mounting_pitch;
  uint8_t mounting_plug_orientation;
  float vehicle_length;
  float vehicle_width;
  float vehicle_height;
  float vehicle_wheelbase;
  uint16_t radar_max_detection_distance;
  uint8_t radar_frequency_slot;
  uint8_t radar_cycle_time_ms;
  uint32_t radar_sensor_ipv4;
  uint8_t radar_powersave_standstill;
  uint8_t blockage;
  uint8_t defective;
} ars548_status;

ARS548_EXPORT int ars548_frame_detection(
  const ars548_frame * frame, size_t index, ars548_detection * out);
ARS548_EXPORT int ars548_frame_object(
  const ars548_frame * frame, size_t index, ars548_object * out);
ARS548_EXPORT int ars548_frame_status(const ars548_frame * frame, ars548_status * out);

/* ------------------------------------------------------------------ */
/* Object filters                                                     */

typedef struct ars548_filter ars548_filter;

/// Compiles "key=value" terms joined by '&'. Keys: min_speed_kmh, class,
/// moving_only. An empty expression accepts every object.
ARS548_EXPORT ars548_filter * ars548_filter_compile(const char * expression);

ARS548_EXPORT const char * ars548_filter_name(const ars548_filter * filter);
ARS548_EXPORT void ars548_filter_free(ars548_filter * filter);

/// New frame holding only the accepted objects. Frames of other kinds pass
/// through as an unmodified copy.
ARS548_EXPORT int ars548_frame_filter_objects(
  const ars548_frame * frame, const ars548_filter * filter, ars548_frame ** out);

/* ------------------------------------------------------------------ */
/* Point clouds and exporters                                         */

typedef struct ars548_cloud ars548_cloud;

typedef struct {
  double x;
  double y;
  double z;
  double doppler;
  double intensity;
  uint32_t source_id;
} ars548_point;

/// Converts a detection or object list into Cartesian points. Detections
/// with invalid range or angle bits are skipped; object doppler is the
/// radial velocity component. Status frames are not convertible.
ARS548_EXPORT int ars548_frame_to_cloud(const ars548_frame * frame, ars548_cloud ** out);

ARS548_EXPORT size_t ars548_cloud_point_count(const ars548_cloud * cloud);
ARS548_EXPORT int ars548_cloud_point(const ars548_cloud * cloud, size_t index, ars548_point * out);
ARS548_EXPORT void ars548_cloud_free(ars548_cloud * cloud);

/// CSV with header x,y,z,doppler,intensity,source_id.
ARS548_EXPORT int ars548_cloud_write_csv(const ars548_cloud * cloud, const char * path);

/// PCD 0.7 ASCII with fields x y z doppler intensity.
ARS548_EXPORT int ars548_cloud_write_pcd(const ars548_cloud * cloud, const char * path);

typedef struct ars548_jsonl ars548_jsonl;

/// JSON Lines stream: one frame object per ars548_jsonl_write call.
ARS548_EXPORT ars548_jsonl * ars548_jsonl_open(const char * path);
ARS548_EXPORT int ars548_jsonl_write(ars548_jsonl * writer, const ars548_cloud * cloud);
ARS548_EXPORT uint64_t ars548_jsonl_lines_written(const ars548_jsonl * writer);
ARS548_EXPORT int ars548_jsonl_close(ars548_jsonl * writer);
ARS548_EXPORT void ars548_jsonl_free(ars548_jsonl * writer);

/* ------------------------------------------------------------------ */
/* Receiving driver                                                   */

typedef struct {
  uint16_t listen_port;      /* data port, default 42102                  */
  uint32_t multicast_group;  /* 0 = plain unicast, default 224.0.2.2      */
  uint32_t interface_ipv4;   /* 0 = any                                   */
  uint32_t sensor_ipv4;      /* default 10.13.1.113                       */
  uint16_t config_port;      /* default 42101                             */
  int stamp_policy;          /* ARS548_STAMP_*                            */
  int receive_buffer_bytes;  /* socket receive buffer request             */
} ars548_receiver_config;

/// Fills the factory defaults described above.
ARS548_EXPORT void ars548_receiver_config_default(ars548_receiver_config * config);

typedef struct ars548_receiver ars548_receiver;

/// Opens the UDP listener. NULL on failure (bad config, bind error).
ARS548_EXPORT ars548_receiver * ars548_receiver_new(const ars548_receiver_config * config);

/// Waits up to timeout_ms for one datagram. ARS548_OK with *out set on a
/// decoded frame (caller frees); ARS548_ERR_TIMEOUT with *out NULL when
/// nothing arrived; ARS548_ERR_DECODE when a datagram was rejected (the
/// statistics record why); ARS548_ERR_IO on socket failure.
ARS548_EXPORT int ars548_receiver_poll(
  ars548_receiver * receiver, int timeout_ms, ars548_frame ** out);

/// Called for every datagram before decoding; payload is only valid during
/// the callback. Pass NULL to remove.
typedef void (*ars548_raw_sink)(
  const uint8_t * data, size_t size, uint64_t recv_wall_ns, uint32_t source_ipv4,
  uint16_t source_port, void * user);
ARS548_EXPORT int ars548_receiver_set_raw_sink(
  ars548_receiver * receiver, ars548_raw_sink sink, void * user);

/* Statistic selectors for ars548_receiver_stat. */
enum {
  ARS548_STAT_DATAGRAMS = 0,
  ARS548_STAT_BYTES = 1,
  ARS548_STAT_FRAMES_OK_TOTAL = 2,
  ARS548_STAT_FRAMES_ERROR_TOTAL = 3,
  ARS548_STAT_SEQUENCE_GAPS = 4,
  ARS548_STAT_FRAMES_OK_STATUS = 5,
  ARS548_STAT_FRAMES_OK_OBJECT_LIST = 6,
  ARS548_STAT_FRAMES_OK_DETECTION_LIST = 7,
  ARS548_STAT_ERR_TRUNCATED = 8,
  ARS548_STAT_ERR_UNKNOWN_METHOD = 9,
  ARS548_STAT_ERR_BAD_CRC = 10,
  ARS548_STAT_ERR_BAD_LENGTH = 11,
  ARS548_STAT_ERR_FIELD_RANGE = 12,
  ARS548_STAT_ERR_COUNT_OVERFLOW = 13,
};

/// One counter value; 0 for unknown selectors.
ARS548_EXPORT uint64_t ars548_receiver_stat(const ars548_receiver * receiver, int selector);

/// Key=value dump of every counter. Owned by the handle, valid until the
/// next call on the same handle.
ARS548_EXPORT const char * ars548_receiver_stats_text(ars548_receiver * receiver);

ARS548_EXPORT void ars548_receiver_free(ars548_receiver * receiver);

/* ------------------------------------------------------------------ */
/* Configuration sender                                               */

typedef struct ars548_config ars548_config;

/// Empty request; add groups with the setters below.
ARS548_EXPORT ars548_config * ars548_config_new(void);

ARS548_EXPORT int ars548_config_set_mounting(
  ars548_config * config, float longitudinal, float lateral, float vertical, float yaw,
  float pitch, int plug_orientation);
ARS548_EXPORT int ars548_config_set_vehicle(
  ars548_config * config, float length, float width, float height, float wheelbase);
ARS548_EXPORT int ars548_config_set_radar(
  ars548_config * config, uint16_t max_detection_distance, int frequency_slot,
  uint8_t cycle_time_ms, uint32_t sensor_ipv4, int powersave_standstill);
ARS548_EXPORT int ars548_config_set_new_ip(ars548_config * config, uint32_t sensor_ipv4);

ARS548_EXPORT void ars548_config_free(ars548_config * config);

/// Validates the request, sends it to sensor_ipv4:config_port, and watches
/// the data port for a status echo until the 2 s acknowledgment window
/// closes. On ARS548_OK, *outcome is one of ARS548_CONFIG_*. Client-side
/// rejections (out-of-range values, empty request) return
/// ARS548_ERR_INVALID_ARGUMENT without transmitting.
ARS548_EXPORT int ars548_send_configuration(
  const ars548_receiver_config * transport, const ars548_config * config, int * outcome);

/* ------------------------------------------------------------------ */
/* Datagram logs                                                      */

typedef struct ars548_log_writer ars548_log_writer;

ARS548_EXPORT ars548_log_writer * ars548_log_writer_open(const char * path);
ARS548_EXPORT int ars548_log_writer_write(
  ars548_log_writer * writer, uint64_t recv_wall_ns, uint32_t source_ipv4, uint16_t source_port,
  const uint8_t * payload, size_t size);
ARS548_EXPORT uint64_t ars548_log_writer_records(const ars548_log_writer * writer);
ARS548_EXPORT int ars548_log_writer_close(ars548_log_writer * writer);
ARS548_EXPORT void ars548_log_writer_free(ars548_log_writer * writer);

typedef struct ars548_log_reader ars548_log_reader;

/// View into the reader's current record; pointers are valid until the next
/// ars548_log_reader_next call.
typedef struct {
  uint64_t recv_wall_ns;
  uint32_t source_ipv4;
  uint16_t source_port;
  const uint8_t * payload;
  size_t payload_size;
} ars548_log_record_view;

ARS548_EXPORT ars548_log_reader * ars548_log_reader_open(const char * path);

/// ARS548_OK and fills *out; ARS548_ERR_END at the end of the log (check
/// ars548_log_reader_truncated); ARS548_ERR_IO on a malformed file.
ARS548_EXPORT int ars548_log_reader_next(
  ars548_log_reader * reader, ars548_log_record_view * out);

/// 1 when the log ends mid-record (every complete record was returned).
ARS548_EXPORT int ars548_log_reader_truncated(const ars548_log_reader * reader);
ARS548_EXPORT uint64_t ars548_log_reader_records(const ars548_log_reader * reader);
ARS548_EXPORT void ars548_log_reader_free(ars548_log_reader * reader);

/* ------------------------------------------------------------------ */
/* Stop tokens and replay                                             */

typedef struct ars548_stop ars548_stop;

/// Cooperative cancellation flag. ars548_stop_trigger may be called from
/// any thread or a signal handler.
ARS548_EXPORT ars548_stop * ars548_stop_new(void);
ARS548_EXPORT void ars548_stop_trigger(ars548_stop * stop);
ARS548_EXPORT void ars548_stop_free(ars548_stop * stop);

/// Replays a log to a UDP endpoint, reproducing recorded delays divided by
/// speed_factor (as_fast_as_possible skips pacing). stop may be NULL.
/// records/truncated may be NULL.
ARS548_EXPORT int ars548_replay_to_udp(
  const char * path, uint32_t target_ipv4, uint16_t target_port, double speed_factor,
  int as_fast_as_possible, const ars548_stop * stop, uint64_t * records, int * truncated);

/* ------------------------------------------------------------------ */
/* Scenario simulation                                                */

typedef struct ars548_scenario ars548_scenario;

/// Loads and validates a scenario description (JSON file).
ARS548_EXPORT ars548_scenario * ars548_scenario_load(const char * path);
ARS548_EXPORT const char * ars548_scenario_name(const ars548_scenario * scenario);
ARS548_EXPORT uint64_t ars548_scenario_cycles(const ars548_scenario * scenario);
ARS548_EXPORT double ars548_scenario_rate_hz(const ars548_scenario * scenario);

/// Replaces the scenario's noise seed, e.g. to rerun with a fresh draw.
ARS548_EXPORT int ars548_scenario_set_seed(ars548_scenario * scenario, uint64_t seed);

ARS548_EXPORT void ars548_scenario_free(ars548_scenario * scenario);

typedef struct ars548_sim ars548_sim;

typedef struct {
  uint32_t target_ipv4;           /* where frames go, default 127.0.0.1   */
  uint16_t target_port;           /* default 42102                        */
  uint16_t config_port;           /* listens for requests, default 42101  */
  const char * ground_truth_path; /* NULL = no ground truth file          */
  int pace;                       /* 0 = emit as fast as possible         */
} ars548_sim_options;

ARS548_EXPORT void ars548_sim_options_default(ars548_sim_options * options);

typedef struct {
  uint64_t cycles;
  uint64_t detection_frames;
  uint64_t object_frames;
  uint64_t status_frames;
  uint64_t configurations_applied;
  uint64_t configurations_rejected;
} ars548_sim_summary;

ARS548_EXPORT ars548_sim * ars548_sim_new(const ars548_scenario * scenario);

/// Emits the whole scenario; blocks until finished or stopped. summary may
/// be NULL.
ARS548_EXPORT int ars548_sim_run(
  ars548_sim * sim, const ars548_sim_options * options, ars548_sim_summary * summary);

/// Thread-safe; ends the run at the next cycle boundary.
ARS548_EXPORT void ars548_sim_request_stop(ars548_sim * sim);

ARS548_EXPORT void ars548_sim_free(ars548_sim * sim);

#ifdef __cplusplus
}
#endif

#endif /* ARS548_ARS548_H */
