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

#include "cloud.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>

namespace ars548
{

namespace
{

constexpr double position_norm_floor = 1e-9;

// All exported numbers go through this single formatter so every format
// shares the documented 6-significant-digit contract.
std::string num6(double value)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::optional<IoError> io_error(const std::string & path, const char * action)
{
  return IoError{path, std::string(action) + ": " + std::strerror(errno)};
}

class FileSink
{
public:
  std::optional<IoError> open(const std::string & path)
  {
    path_ = path;
    file_ = std::fopen(path.c_str(), "wb");
    if (file_ == nullptr) {
      return io_error(path_, "open");
    }
    return std::nullopt;
  }

  void append(const std::string & text)
  {
    if (!failed_ && std::fwrite(text.data(), 1, text.size(), file_) != text.size()) {
      failed_ = true;
    }
  }

  std::optional<IoError> close()
  {
    std::optional<IoError> result;
    if (failed_) {
      result = io_error(path_, "write");
    }
    if (std::fclose(file_) != 0 && !result) {
      result = io_error(path_, "close");
    }
    file_ = nullptr;
    return result;
  }

private:
  std::FILE * file_{nullptr};
  std::string path_;
  bool failed_{false};
};

std::string point_fields_csv(const RadarPoint & point)
{
  return num6(point.x) + "," + num6(point.y) + "," + num6(point.z) + "," + num6(point.doppler) +
         "," + num6(point.intensity);
}

}  // namespace

Cartesian spherical_to_cartesian(double azimuth, double elevation, double range)
{
  const double planar = range * std::cos(elevation);
  return {planar * std::cos(azimuth), planar * std::sin(azimuth), range * std::sin(elevation)};
}

PointCloud detections_to_cloud(const DetectionList & list)
{
  PointCloud cloud;
  cloud.stamp = list.stamp;
  cloud.points.reserve(list.detections.size());
  for (const auto & detection : list.detections) {
    if ((detection.invalid_flags & (detection_invalid_range | detection_invalid_angle)) != 0) {
      continue;
    }
    const Cartesian p =
      spherical_to_cartesian(detection.azimuth, detection.elevation, detection.range);
    cloud.points.push_back(RadarPoint{
      p.x, p.y, p.z, detection.range_rate, static_cast<double>(detection.rcs),
      detection.measurement_id});
  }
  return cloud;
}

PointCloud objects_to_cloud(const ObjectList & list)
{
  PointCloud cloud;
  cloud.stamp = list.stamp;
  cloud.points.reserve(list.objects.size());
  for (const auto & object : list.objects) {
    const double px = object.position_x;
    const double py = object.position_y;
    const double pz = object.position_z;
    const double norm = std::sqrt(px * px + py * py + pz * pz);
    double doppler = 0.0;
    if (norm >= position_norm_floor) {
      doppler = (px * object.velocity_rel_x + py * object.velocity_rel_y) / norm;
    }
    cloud.points.push_back(RadarPoint{px, py, pz, doppler, 0.0, object.id});
  }
  return cloud;
}

PoseSet objects_to_poses(const ObjectList & list)
{
  PoseSet poses;
  poses.stamp = list.stamp;
  poses.poses.reserve(list.objects.size());
  for (const auto & object : list.objects) {
    poses.poses.push_back(Pose{
      object.position_x, object.position_y, object.position_z, object_heading(object)});
  }
  return poses;
}

std::optional<IoError> write_csv(const PointCloud & cloud, const std::string & path)
{
  FileSink sink;
  if (auto error = sink.open(path)) {
    return error;
  }
  sink.append("x,y,z,doppler,intensity,source_id\n");
  for (const auto & point : cloud.points) {
    sink.append(point_fields_csv(point) + "," + std::to_string(point.source_id) + "\n");
  }
  return sink.close();
}

std::optional<IoError> write_pcd(const PointCloud & cloud, const std::string & path)
{
  FileSink sink;
  if (auto error = sink.open(path)) {
    return error;
  }
  const std::string count = std::to_string(cloud.points.size());
  sink.append("# .PCD v0.7 - Point Cloud Data file format\n");
  sink.append("VERSION 0.7\n");
  sink.append("FIELDS x y z doppler intensity\n");
  sink.append("SIZE 4 4 4 4 4\n");
  sink.append("TYPE F F F F F\n");
  sink.append("COUNT 1 1 1 1 1\n");
  sink.append("WIDTH " + count + "\n");
  sink.append("HEIGHT 1\n");
  sink.append("VIEWPOINT 0 0 0 1 0 0 0\n");
  sink.append("POINTS " + count + "\n");
  sink.append("DATA ascii\n");
  for (const auto & point : cloud.points) {
    sink.append(
      num6(point.x) + " " + num6(point.y) + " " + num6(point.z) + " " + num6(point.doppler) + " " +
      num6(point.intensity) + "\n");
  }
  return sink.close();
}

JsonlWriter::~JsonlWriter()
{
  if (file_ != nullptr) {
    std::fclose(file_);
  }
}

std::optional<IoError> JsonlWriter::open(const std::string & path)
{
  path_ = path;
  file_ = std::fopen(path.c_str(), "wb");
  if (file_ == nullptr) {
    return io_error(path_, "open");
  }
  return std::nullopt;
}

std::optional<IoError> JsonlWriter::write(const PointCloud & cloud)
{
  if (file_ == nullptr) {
    return IoError{path_, "write: stream not open"};
  }
  std::string line = "{\"stamp\":{\"seconds\":" + std::to_string(cloud.stamp.seconds) +
                     ",\"nanoseconds\":" + std::to_string(cloud.stamp.nanoseconds) +
                     ",\"sync\":" + std::to_string(static_cast<int>(cloud.stamp.sync_status)) +
                     "},\"frame\":\"" + cloud.frame_label + "\",\"points\":[";
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto & point = cloud.points[i];
    if (i > 0) {
      line += ",";
    }
    line += "{\"x\":" + num6(point.x) + ",\"y\":" + num6(point.y) + ",\"z\":" + num6(point.z) +
            ",\"doppler\":" + num6(point.doppler) + ",\"intensity\":" + num6(point.intensity) +
            ",\"source_id\":" + std::to_string(point.source_id) + "}";
  }
  line += "]}\n";
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size()) {
    return io_error(path_, "write");
  }
  ++lines_;
  return std::nullopt;
}

std::optional<IoError> JsonlWriter::close()
{
  if (file_ == nullptr) {
    return std::nullopt;
  }
  std::optional<IoError> result;
  if (std::fflush(file_) != 0) {
    result = io_error(path_, "flush");
  }
  if (std::fclose(file_) != 0 && !result) {
    result = io_error(path_, "close");
  }
  file_ = nullptr;
  return result;
}

}  // namespace ars548
