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

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace ars548
{

/// One exported point in the Cartesian sensor frame (x forward, y left,
/// z up). doppler is the radial speed in m/s, negative toward the sensor.
/// intensity is RCS in dBsm for detections and 0 for objects.
struct RadarPoint
{
  double x{};
  double y{};
  double z{};
  double doppler{};
  double intensity{};
  uint32_t source_id{};

  bool operator==(const RadarPoint &) const = default;
};

struct PointCloud
{
  Timestamp stamp{};
  std::string frame_label{"ars548"};
  std::vector<RadarPoint> points;

  bool operator==(const PointCloud &) const = default;
};

struct Pose
{
  double x{};
  double y{};
  double z{};
  double yaw{};  // rad, (-pi, pi]

  bool operator==(const Pose &) const = default;
};

struct PoseSet
{
  Timestamp stamp{};
  std::vector<Pose> poses;

  bool operator==(const PoseSet &) const = default;
};

struct Cartesian
{
  double x{};
  double y{};
  double z{};
};

/// x = r cos(el) cos(az), y = r cos(el) sin(az), z = r sin(el).
Cartesian spherical_to_cartesian(double azimuth, double elevation, double range);

/// One point per detection whose range and angle validity bits (invalid_flags
/// bits 0 and 1) are clear. doppler = range_rate, intensity = rcs,
/// source_id = measurement_id.
PointCloud detections_to_cloud(const DetectionList & list);

/// One point per object at its tracked position. doppler is the radial
/// projection of the relative velocity, (p.v)/|p|, and 0 when |p| < 1e-9.
PointCloud objects_to_cloud(const ObjectList & list);

/// One pose per object, heading from object_heading.
PoseSet objects_to_poses(const ObjectList & list);

/// Failed export with the destination that caused it.
struct IoError
{
  std::string path;
  std::string message;
};

/// CSV with header x,y,z,doppler,intensity,source_id. Numbers use 6
/// significant digits; row order is point order.
std::optional<IoError> write_csv(const PointCloud & cloud, const std::string & path);

/// PCD 0.7 ASCII with FIELDS x y z doppler intensity.
std::optional<IoError> write_pcd(const PointCloud & cloud, const std::string & path);

/// Append-only JSON Lines writer: one frame object per line with the stamp,
/// frame label, and points.
class JsonlWriter
{
public:
  JsonlWriter() = default;
  ~JsonlWriter();
  JsonlWriter(const JsonlWriter &) = delete;
  JsonlWriter & operator=(const JsonlWriter &) = delete;

  std::optional<IoError> open(const std::string & path);
  std::optional<IoError> write(const PointCloud & cloud);
  std::optional<IoError> close();

  uint64_t lines_written() const { return lines_; }

private:
  std::FILE * file_{nullptr};
  std::string path_;
  uint64_t lines_{};
};

}  // namespace ars548
