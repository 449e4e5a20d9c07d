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

#include "sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "codec.hpp"
#include "udp.hpp"

namespace ars548
{

namespace
{

constexpr uint64_t splitmix64_gamma = 0x9E3779B97F4A7C15ull;

// Representative RCS per class, dBsm.
int8_t class_rcs(Classification classification)
{
  switch (classification) {
    case Classification::car:
      return 10;
    case Classification::truck:
      return 25;
    case Classification::motorcycle:
      return 5;
    case Classification::pedestrian:
      return -5;
    case Classification::bicycle:
      return -2;
    case Classification::animal:
      return -8;
    case Classification::hazard:
      return 3;
    case Classification::unknown:
      return 0;
  }
  return 0;
}

Timestamp cycle_stamp(const Scenario & scenario, uint64_t cycle)
{
  const uint64_t offset_ns =
    static_cast<uint64_t>(std::llround(scenario.stamp_offset_seconds * 1e9));
  return Timestamp::from_nanoseconds(
    offset_ns + cycle * scenario.cycle_period_ns(), SyncStatus::sync_ok);
}

uint8_t nominal_cycle_time_ms(double cycle_rate_hz)
{
  const long long ms = std::llround(1000.0 / cycle_rate_hz);
  // The wire field only admits [50, 100]; faster or slower nominal rates
  // saturate at the nearest representable value.
  if (ms < 50) return 50;
  if (ms > 100) return 100;
  return static_cast<uint8_t>(ms);
}

}  // namespace

uint64_t splitmix64(uint64_t x)
{
  x += splitmix64_gamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double counter_gaussian(
  uint64_t seed, uint64_t cycle, uint32_t object_index, uint32_t sample, uint32_t channel)
{
  const uint64_t name = (static_cast<uint64_t>(object_index) << 40) ^
                        (static_cast<uint64_t>(sample) << 20) ^ static_cast<uint64_t>(channel);
  const uint64_t key = splitmix64(seed ^ splitmix64(cycle ^ splitmix64(name)));
  const uint64_t word_a = splitmix64(key);
  const uint64_t word_b = splitmix64(key + splitmix64_gamma);

  // 53-bit uniforms: u1 in (0, 1] keeps the log finite, u2 in [0, 1).
  const double u1 = (static_cast<double>(word_a >> 11) + 1.0) / 9007199254740992.0;
  const double u2 = static_cast<double>(word_b >> 11) / 9007199254740992.0;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

KinematicState propagate(const ScenarioObject & object, double t_seconds)
{
  const double t = t_seconds;
  KinematicState state;
  state.position_x = object.position_x + object.velocity_x * t + 0.5 * object.acceleration_x * t * t;
  state.position_y = object.position_y + object.velocity_y * t + 0.5 * object.acceleration_y * t * t;
  state.position_z = object.position_z;
  state.velocity_x = object.velocity_x + object.acceleration_x * t;
  state.velocity_y = object.velocity_y + object.acceleration_y * t;
  return state;
}

CycleFrames synthesize_cycle(
  const Scenario & scenario, uint64_t cycle, const MountingPose & mounting)
{
  CycleFrames frames;
  const Timestamp stamp = cycle_stamp(scenario, cycle);
  const double t = static_cast<double>(cycle) / scenario.cycle_rate_hz;

  frames.truth.cycle = cycle;
  frames.truth.time_seconds = t;

  frames.objects.stamp = stamp;
  frames.objects.sequence_counter = static_cast<uint32_t>(cycle);

  frames.detections.stamp = stamp;
  frames.detections.sequence_counter = static_cast<uint32_t>(cycle);
  frames.detections.origin_x = mounting.longitudinal;
  frames.detections.origin_y = mounting.lateral;
  frames.detections.origin_z = mounting.vertical;

  for (std::size_t index = 0; index < scenario.objects.size(); ++index) {
    const ScenarioObject & source = scenario.objects[index];
    const KinematicState state = propagate(source, t);
    frames.truth.objects.push_back(GroundTruthObject{source.id, state});

    const double speed = std::hypot(state.velocity_x, state.velocity_y);

    TrackedObject object;
    object.id = source.id;
    object.age = static_cast<uint16_t>(std::min<uint64_t>(cycle + 1, 0xFFFF));
    object.status_measurement = MeasurementStatus::measured;
    object.status_movement =
      speed > eps_speed ? MovementStatus::moving : MovementStatus::stationary;
    object.position_x = static_cast<float>(state.position_x);
    object.position_y = static_cast<float>(state.position_y);
    object.position_z = static_cast<float>(state.position_z);
    object.position_std_x = static_cast<float>(scenario.noise.range_std);
    object.position_std_y = static_cast<float>(scenario.noise.range_std);
    object.position_std_z = static_cast<float>(scenario.noise.range_std);
    object.orientation_yaw =
      speed > eps_speed ? wrap_angle_to_wire(std::atan2(state.velocity_y, state.velocity_x)) : 0.f;
    object.orientation_yaw_std = static_cast<float>(scenario.noise.azimuth_std);
    object.velocity_rel_x = static_cast<float>(state.velocity_x);
    object.velocity_rel_y = static_cast<float>(state.velocity_y);
    object.velocity_std_x = static_cast<float>(scenario.noise.range_rate_std);
    object.velocity_std_y = static_cast<float>(scenario.noise.range_rate_std);
    object.acceleration_rel_x = static_cast<float>(source.acceleration_x);
    object.acceleration_rel_y = static_cast<float>(source.acceleration_y);
    object.acceleration_std_x = 0.f;
    object.acceleration_std_y = 0.f;
    object.yaw_rate = 0.f;
    object.shape_length = static_cast<float>(source.shape_length);
    object.shape_width = static_cast<float>(source.shape_width);
    object.classification_probabilities = {};
    object.classification_probabilities[static_cast<std::size_t>(source.classification)] = 100;
    frames.objects.objects.push_back(object);

    const double norm = std::sqrt(
      state.position_x * state.position_x + state.position_y * state.position_y +
      state.position_z * state.position_z);
    const double true_range = norm;
    const double true_azimuth = norm >= 1e-9 ? std::atan2(state.position_y, state.position_x) : 0.0;
    const double true_elevation = norm >= 1e-9 ? std::asin(state.position_z / norm) : 0.0;
    const double true_range_rate =
      norm >= 1e-9
        ? (state.position_x * state.velocity_x + state.position_y * state.velocity_y) / norm
        : 0.0;

    const auto object_index = static_cast<uint32_t>(index);
    for (uint32_t sample = 0; sample < source.detections_per_cycle; ++sample) {
      const double noisy_range =
        true_range +
        counter_gaussian(scenario.seed, cycle, object_index, sample, 0) * scenario.noise.range_std;
      const double noisy_azimuth =
        true_azimuth + counter_gaussian(scenario.seed, cycle, object_index, sample, 1) *
                         scenario.noise.azimuth_std;
      const double noisy_elevation =
        true_elevation + counter_gaussian(scenario.seed, cycle, object_index, sample, 2) *
                           scenario.noise.elevation_std;
      const double noisy_range_rate =
        true_range_rate + counter_gaussian(scenario.seed, cycle, object_index, sample, 3) *
                            scenario.noise.range_rate_std;

      Detection detection;
      detection.azimuth = wrap_angle_to_wire(noisy_azimuth);
      detection.azimuth_std = static_cast<float>(scenario.noise.azimuth_std);
      detection.elevation = clamp_elevation_to_wire(noisy_elevation);
      detection.elevation_std = static_cast<float>(scenario.noise.elevation_std);
      detection.range = static_cast<float>(std::max(noisy_range, 0.0));
      detection.range_std = static_cast<float>(scenario.noise.range_std);
      detection.range_rate = static_cast<float>(noisy_range_rate);
      detection.range_rate_std = static_cast<float>(scenario.noise.range_rate_std);
      detection.rcs = class_rcs(source.classification);
      detection.invalid_flags = 0;
      detection.measurement_id = static_cast<uint16_t>(
        object_index * max_detections_per_object + sample);
      detection.object_id = static_cast<uint16_t>(source.id);
      detection.classification = source.classification;
      frames.detections.detections.push_back(detection);
    }
  }
  return frames;
}

SensorStatus default_status(const Scenario & scenario)
{
  SensorStatus status;
  status.stamp = cycle_stamp(scenario, 0);
  status.software_version_major = 1;
  status.software_version_minor = 0;
  status.software_version_patch = 0;
  status.mounting = MountingPose{};
  status.vehicle = VehicleDimensions{4.5f, 1.8f, 1.5f, 2.7f};
  status.radar = RadarParameters{
    300, FrequencySlot::mid, nominal_cycle_time_ms(scenario.cycle_rate_hz), 0x0A0D0171u, false};
  status.blockage = Blockage::none;
  status.defective = false;
  return status;
}

Simulator::Simulator(Scenario scenario)
: scenario_(std::move(scenario)), status_(default_status(scenario_))
{
}

SensorStatus Simulator::current_status() const
{
  std::lock_guard lock(mutex_);
  return status_;
}

void Simulator::apply_configuration(const SensorConfiguration & configuration)
{
  std::lock_guard lock(mutex_);
  if (configuration.mounting) {
    status_.mounting = *configuration.mounting;
  }
  if (configuration.vehicle) {
    status_.vehicle = *configuration.vehicle;
  }
  if (configuration.radar) {
    status_.radar = *configuration.radar;
  }
  if (configuration.new_sensor_ipv4) {
    status_.radar.sensor_ipv4 = *configuration.new_sensor_ipv4;
  }
}

EmissionSummary Simulator::run(const EmitterOptions & options)
{
  EmissionSummary summary;
  stop_.store(false, std::memory_order_relaxed);

  if (auto invalid = validate_scenario(scenario_)) {
    summary.error = invalid->message;
    return summary;
  }

  UdpSocket sender;
  if (auto error = sender.open_sender()) {
    summary.error = *error;
    return summary;
  }
  UdpSocket config_socket;
  if (auto error = config_socket.open_bound(options.config_port, std::nullopt, std::nullopt, 0)) {
    summary.error = "config port: " + *error;
    return summary;
  }

  std::FILE * truth_file = nullptr;
  if (!options.ground_truth_path.empty()) {
    truth_file = std::fopen(options.ground_truth_path.c_str(), "wb");
    if (truth_file == nullptr) {
      summary.error = options.ground_truth_path + ": cannot open";
      return summary;
    }
  }

  std::atomic<bool> listener_stop{false};
  std::thread listener([&] {
    std::vector<uint8_t> buffer(65535);
    while (!listener_stop.load(std::memory_order_relaxed)) {
      Endpoint source;
      RecvTime recv_time;
      std::string error;
      const int received =
        config_socket.receive(50, buffer.data(), buffer.size(), source, recv_time, error);
      if (received <= 0) {
        continue;
      }
      auto configuration =
        decode_configuration_frame(ByteView(buffer.data(), static_cast<std::size_t>(received)));
      if (configuration.ok()) {
        apply_configuration(configuration.value());
        ++summary.configurations_applied;
      } else {
        ++summary.configurations_rejected;
      }
    }
  });

  const auto start = std::chrono::steady_clock::now();
  const auto period = std::chrono::nanoseconds(scenario_.cycle_period_ns());
  const uint64_t cycles = scenario_.cycle_count();

  for (uint64_t cycle = 0; cycle < cycles; ++cycle) {
    if (stop_.load(std::memory_order_relaxed)) {
      break;
    }

    SensorStatus status = current_status();
    const CycleFrames frames = synthesize_cycle(scenario_, cycle, status.mounting);

    auto detection_bytes = encode_frame(Frame{frames.detections, {}, {}});
    auto object_bytes = encode_frame(Frame{frames.objects, {}, {}});
    if (!detection_bytes.ok() || !object_bytes.ok()) {
      summary.error = "encode failed at cycle " + std::to_string(cycle);
      break;
    }
    if (auto error =
          sender.send_to(detection_bytes.value(), options.target_ipv4, options.target_port)) {
      summary.error = *error;
      break;
    }
    ++summary.detection_frames;
    if (auto error =
          sender.send_to(object_bytes.value(), options.target_ipv4, options.target_port)) {
      summary.error = *error;
      break;
    }
    ++summary.object_frames;

    if (cycle % 10 == 0) {
      status.stamp = frames.detections.stamp;
      auto status_bytes = encode_frame(Frame{status, {}, {}});
      if (!status_bytes.ok()) {
        summary.error = "status encode failed at cycle " + std::to_string(cycle);
        break;
      }
      if (auto error =
            sender.send_to(status_bytes.value(), options.target_ipv4, options.target_port)) {
        summary.error = *error;
        break;
      }
      ++summary.status_frames;
    }

    if (truth_file != nullptr) {
      std::string line =
        "{\"cycle\":" + std::to_string(frames.truth.cycle) + ",\"time\":" + [&] {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.9g", frames.truth.time_seconds);
          return std::string(buf);
        }() + ",\"objects\":[";
      for (std::size_t i = 0; i < frames.truth.objects.size(); ++i) {
        const auto & truth = frames.truth.objects[i];
        char buf[160];
        std::snprintf(
          buf, sizeof(buf), "%s{\"id\":%u,\"p\":[%.9g,%.9g,%.9g],\"v\":[%.9g,%.9g]}",
          i > 0 ? "," : "", truth.id, truth.state.position_x, truth.state.position_y,
          truth.state.position_z, truth.state.velocity_x, truth.state.velocity_y);
        line += buf;
      }
      line += "]}\n";
      if (std::fwrite(line.data(), 1, line.size(), truth_file) != line.size()) {
        summary.error = options.ground_truth_path + ": write failed";
        break;
      }
    }

    ++summary.cycles;
    if (options.pace) {
      std::this_thread::sleep_until(start + period * (cycle + 1));
    }
  }

  listener_stop.store(true, std::memory_order_relaxed);
  listener.join();
  if (truth_file != nullptr) {
    std::fclose(truth_file);
  }
  return summary;
}

}  // namespace ars548
