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

#include "frame_gen.hpp"
#include "model.hpp"
#include "temp_files.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ars548;

namespace
{

// Long-double oracle kept deliberately separate from the production routine.
void reference_spherical(
  double az, double el, double r, long double & x, long double & y, long double & z)
{
  const long double laz = az;
  const long double lel = el;
  const long double lr = r;
  x = lr * std::cos(lel) * std::cos(laz);
  y = lr * std::cos(lel) * std::sin(laz);
  z = lr * std::sin(lel);
}

std::vector<std::string> split(const std::string & line, char sep)
{
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) {
    fields.push_back(field);
  }
  return fields;
}

PointCloud sample_cloud()
{
  PointCloud cloud;
  cloud.stamp = {1700000100u, 500000000u, SyncStatus::sync_ok};
  cloud.points = {
    {12.5, -3.25, 0.75, -4.5, 10.0, 17},
    {0.001234, 25000.0, -1.5e-7, 0.0, -12.0, 65535},
    {1.0 / 3.0, 2.0 / 7.0, -9.87654321, 3.14159, 99.5, 0},
  };
  return cloud;
}

}  // namespace

TEST_CASE("spherical conversion matches closed-form points")
{
  SUBCASE("boresight")
  {
    const Cartesian p = spherical_to_cartesian(0.0, 0.0, 10.0);
    CHECK(p.x == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(p.z == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }

  SUBCASE("quarter turn left, flat")
  {
    const double half_pi = std::acos(0.0);
    const Cartesian p = spherical_to_cartesian(half_pi, 0.0, 5.0);
    CHECK(std::abs(p.x) < 1e-9);
    CHECK(p.y == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::abs(p.z) < 1e-9);
  }

  SUBCASE("thirty degrees azimuth, forty-five elevation, range two")
  {
    const double pi = std::acos(-1.0);
    const Cartesian p = spherical_to_cartesian(pi / 6.0, pi / 4.0, 2.0);
    CHECK(p.x == doctest::Approx(1.2247448713915892).epsilon(1e-6));
    CHECK(p.y == doctest::Approx(0.7071067811865475).epsilon(1e-6));
    CHECK(p.z == doctest::Approx(1.4142135623730950).epsilon(1e-6));
  }
}

TEST_CASE("spherical conversion matches the long-double oracle on random triples")
{
  std::mt19937_64 rng(0xC10D);
  std::uniform_real_distribution<double> az_dist(-3.14, 3.14);
  std::uniform_real_distribution<double> el_dist(-1.57, 1.57);
  std::uniform_real_distribution<double> r_dist(0.05, 1500.0);

  for (int i = 0; i < 1000; ++i) {
    const double az = az_dist(rng);
    const double el = el_dist(rng);
    const double r = r_dist(rng);
    long double rx = 0;
    long double ry = 0;
    long double rz = 0;
    reference_spherical(az, el, r, rx, ry, rz);
    const Cartesian p = spherical_to_cartesian(az, el, r);
    INFO("az ", az, " el ", el, " r ", r);
    CHECK(std::abs(p.x - static_cast<double>(rx)) <= 1e-6 * r);
    CHECK(std::abs(p.y - static_cast<double>(ry)) <= 1e-6 * r);
    CHECK(std::abs(p.z - static_cast<double>(rz)) <= 1e-6 * r);

    // The conversion is an isometry in range: |p| must reproduce r.
    const double norm = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    CHECK(std::abs(norm - r) <= 1e-9 * r);
  }
}

TEST_CASE("detections convert with validity gating")
{
  DetectionList list;
  list.stamp = {10u, 20u, SyncStatus::sync_ok};
  list.sequence_counter = 4;

  Detection good;
  good.azimuth = 0.0f;
  good.elevation = 0.0f;
  good.range = 10.0f;
  good.range_rate = -5.0f;
  good.rcs = 12;
  good.measurement_id = 100;

  Detection bad_range = good;
  bad_range.invalid_flags = detection_invalid_range;
  bad_range.measurement_id = 101;

  Detection bad_angle = good;
  bad_angle.invalid_flags = detection_invalid_angle;
  bad_angle.measurement_id = 102;

  Detection bad_rate = good;  // range rate validity does not gate the point
  bad_rate.invalid_flags = detection_invalid_range_rate;
  bad_rate.measurement_id = 103;

  list.detections = {good, bad_range, bad_angle, bad_rate};

  const PointCloud cloud = detections_to_cloud(list);
  CHECK(cloud.stamp == list.stamp);
  REQUIRE(cloud.points.size() == 2);
  CHECK(cloud.points[0].source_id == 100);
  CHECK(cloud.points[1].source_id == 103);
  CHECK(cloud.points[0].x == doctest::Approx(10.0));
  CHECK(cloud.points[0].doppler == doctest::Approx(-5.0));
  CHECK(cloud.points[0].intensity == doctest::Approx(12.0));
}

TEST_CASE("object doppler is the radial velocity component")
{
  ObjectList list;
  list.stamp = {1u, 2u, SyncStatus::sync_ok};

  TrackedObject radial;
  radial.id = 1;
  radial.position_x = 10.0f;
  radial.velocity_rel_x = -5.0f;

  TrackedObject tangential;
  tangential.id = 2;
  tangential.position_x = 10.0f;
  tangential.velocity_rel_y = 3.0f;

  TrackedObject oblique;  // p = (3, 4), v = (1, 2): (3 + 8) / 5 = 2.2
  oblique.id = 3;
  oblique.position_x = 3.0f;
  oblique.position_y = 4.0f;
  oblique.velocity_rel_x = 1.0f;
  oblique.velocity_rel_y = 2.0f;

  TrackedObject at_origin;  // degenerate position, doppler defined as 0
  at_origin.id = 4;
  at_origin.velocity_rel_x = 7.0f;

  list.objects = {radial, tangential, oblique, at_origin};
  const PointCloud cloud = objects_to_cloud(list);

  REQUIRE(cloud.points.size() == 4);
  CHECK(cloud.points[0].doppler == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(cloud.points[1].doppler == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(cloud.points[2].doppler == doctest::Approx(2.2).epsilon(1e-12));
  CHECK(cloud.points[3].doppler == 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(cloud.points[i].intensity == 0.0);
    CHECK(cloud.points[i].source_id == list.objects[i].id);
  }
}

TEST_CASE("object doppler magnitude never exceeds the speed")
{
  testgen::Gen gen(31337);
  const ObjectList list = gen.object_list(50);
  const PointCloud cloud = objects_to_cloud(list);
  REQUIRE(cloud.points.size() == 50);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const double speed = object_speed(list.objects[i]);
    INFO("object ", i, " doppler ", cloud.points[i].doppler, " speed ", speed);
    CHECK(std::abs(cloud.points[i].doppler) <= speed + 1e-9);
  }
}

TEST_CASE("poses carry position and heading")
{
  ObjectList list;
  list.stamp = {5u, 6u, SyncStatus::sync_ok};

  TrackedObject mover;
  mover.id = 9;
  mover.position_x = 2.0f;
  mover.position_y = -1.0f;
  mover.position_z = 0.5f;
  mover.velocity_rel_x = 1.0f;
  mover.velocity_rel_y = 1.0f;
  mover.orientation_yaw = -2.0f;

  TrackedObject parked;  // below eps_speed: heading falls back to yaw
  parked.id = 10;
  parked.orientation_yaw = 1.25f;

  list.objects = {mover, parked};
  const PoseSet poses = objects_to_poses(list);

  CHECK(poses.stamp == list.stamp);
  REQUIRE(poses.poses.size() == 2);
  CHECK(poses.poses[0].x == doctest::Approx(2.0));
  CHECK(poses.poses[0].y == doctest::Approx(-1.0));
  CHECK(poses.poses[0].z == doctest::Approx(0.5));
  const double pi = std::acos(-1.0);
  CHECK(poses.poses[0].yaw == doctest::Approx(pi / 4.0).epsilon(1e-6));
  CHECK(poses.poses[1].yaw == doctest::Approx(1.25).epsilon(1e-6));
}

TEST_CASE("CSV export writes the documented table")
{
  const PointCloud cloud = sample_cloud();
  testgen::TempFile file("cloud_csv");
  REQUIRE_FALSE(write_csv(cloud, file.path()).has_value());

  const auto lines = testgen::read_lines(file.path());
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "x,y,z,doppler,intensity,source_id");

  for (std::size_t row = 0; row < cloud.points.size(); ++row) {
    const auto fields = split(lines[row + 1], ',');
    REQUIRE(fields.size() == 6);
    const RadarPoint & point = cloud.points[row];
    // %.6g round-trips within half a unit of the sixth significant digit.
    CHECK(std::stod(fields[0]) == doctest::Approx(point.x).epsilon(1e-5));
    CHECK(std::stod(fields[1]) == doctest::Approx(point.y).epsilon(1e-5));
    CHECK(std::stod(fields[2]) == doctest::Approx(point.z).epsilon(1e-5));
    CHECK(std::stod(fields[3]) == doctest::Approx(point.doppler).epsilon(1e-5));
    CHECK(std::stod(fields[4]) == doctest::Approx(point.intensity).epsilon(1e-5));
    CHECK(std::stoul(fields[5]) == point.source_id);
  }

  // Spot-check the formatting itself on a known row.
  CHECK(lines[1] == "12.5,-3.25,0.75,-4.5,10,17");
}

TEST_CASE("CSV export of an empty cloud is header only")
{
  PointCloud cloud;
  testgen::TempFile file("cloud_csv_empty");
  REQUIRE_FALSE(write_csv(cloud, file.path()).has_value());
  const auto lines = testgen::read_lines(file.path());
  REQUIRE(lines.size() == 1);
  CHECK(lines[0] == "x,y,z,doppler,intensity,source_id");
}

TEST_CASE("PCD export writes a conformant 0.7 ASCII header")
{
  const PointCloud cloud = sample_cloud();
  testgen::TempFile file("cloud_pcd");
  REQUIRE_FALSE(write_pcd(cloud, file.path()).has_value());

  const auto lines = testgen::read_lines(file.path());
  REQUIRE(lines.size() == 11 + cloud.points.size());
  CHECK(lines[0] == "# .PCD v0.7 - Point Cloud Data file format");
  CHECK(lines[1] == "VERSION 0.7");
  CHECK(lines[2] == "FIELDS x y z doppler intensity");
  CHECK(lines[3] == "SIZE 4 4 4 4 4");
  CHECK(lines[4] == "TYPE F F F F F");
  CHECK(lines[5] == "COUNT 1 1 1 1 1");
  CHECK(lines[6] == "WIDTH 3");
  CHECK(lines[7] == "HEIGHT 1");
  CHECK(lines[8] == "VIEWPOINT 0 0 0 1 0 0 0");
  CHECK(lines[9] == "POINTS 3");
  CHECK(lines[10] == "DATA ascii");

  for (std::size_t row = 0; row < cloud.points.size(); ++row) {
    const auto fields = split(lines[11 + row], ' ');
    REQUIRE(fields.size() == 5);
    CHECK(std::stod(fields[0]) == doctest::Approx(cloud.points[row].x).epsilon(1e-5));
    CHECK(std::stod(fields[3]) == doctest::Approx(cloud.points[row].doppler).epsilon(1e-5));
  }
}

TEST_CASE("PCD point count matches the data section for random clouds")
{
  testgen::Gen gen(0xACDC);
  for (const std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{57}}) {
    const PointCloud cloud = detections_to_cloud(gen.detection_list(n));
    testgen::TempFile file("cloud_pcd_n");
    REQUIRE_FALSE(write_pcd(cloud, file.path()).has_value());
    const auto lines = testgen::read_lines(file.path());
    REQUIRE(lines.size() == 11 + cloud.points.size());
    CHECK(lines[6] == "WIDTH " + std::to_string(cloud.points.size()));
    CHECK(lines[9] == "POINTS " + std::to_string(cloud.points.size()));
  }
}

TEST_CASE("JSONL writer appends one well-formed object per frame")
{
  PointCloud first = sample_cloud();
  PointCloud second;
  second.stamp = {1700000101u, 0u, SyncStatus::sync_lost};

  testgen::TempFile file("cloud_jsonl");
  JsonlWriter writer;
  REQUIRE_FALSE(writer.open(file.path()).has_value());
  REQUIRE_FALSE(writer.write(first).has_value());
  REQUIRE_FALSE(writer.write(second).has_value());
  CHECK(writer.lines_written() == 2);
  REQUIRE_FALSE(writer.close().has_value());

  const auto lines = testgen::read_lines(file.path());
  REQUIRE(lines.size() == 2);

  const auto parsed = nlohmann::json::parse(lines[0]);
  CHECK(parsed["stamp"]["seconds"] == 1700000100u);
  CHECK(parsed["stamp"]["nanoseconds"] == 500000000u);
  CHECK(parsed["stamp"]["sync"] == 1);
  CHECK(parsed["frame"] == "ars548");
  REQUIRE(parsed["points"].size() == 3);
  CHECK(parsed["points"][0]["x"].get<double>() == doctest::Approx(12.5));
  CHECK(parsed["points"][0]["doppler"].get<double>() == doctest::Approx(-4.5));
  CHECK(parsed["points"][0]["source_id"] == 17);
  CHECK(parsed["points"][1]["source_id"] == 65535);

  const auto empty_frame = nlohmann::json::parse(lines[1]);
  CHECK(empty_frame["stamp"]["sync"] == 3);
  CHECK(empty_frame["points"].empty());
}

TEST_CASE("JSONL writer refuses to write before open")
{
  JsonlWriter writer;
  const auto error = writer.write(sample_cloud());
  REQUIRE(error.has_value());
  CHECK(error->message.find("not open") != std::string::npos);
}

TEST_CASE("exports are byte-identical across runs")
{
  testgen::Gen gen(555);
  const PointCloud cloud = detections_to_cloud(gen.detection_list(40));

  testgen::TempFile a("cloud_det_a");
  testgen::TempFile b("cloud_det_b");
  REQUIRE_FALSE(write_csv(cloud, a.path()).has_value());
  REQUIRE_FALSE(write_csv(cloud, b.path()).has_value());
  CHECK(testgen::read_bytes(a.path()) == testgen::read_bytes(b.path()));

  testgen::TempFile c("cloud_pcd_a");
  testgen::TempFile d("cloud_pcd_b");
  REQUIRE_FALSE(write_pcd(cloud, c.path()).has_value());
  REQUIRE_FALSE(write_pcd(cloud, d.path()).has_value());
  CHECK(testgen::read_bytes(c.path()) == testgen::read_bytes(d.path()));
}

TEST_CASE("export errors name the destination")
{
  const PointCloud cloud = sample_cloud();
  const std::string bogus = "/nonexistent-dir/cloud.csv";
  const auto error = write_csv(cloud, bogus);
  REQUIRE(error.has_value());
  CHECK(error->path == bogus);
  CHECK_FALSE(error->message.empty());

  JsonlWriter writer;
  const auto open_error = writer.open("/nonexistent-dir/cloud.jsonl");
  REQUIRE(open_error.has_value());
  CHECK(open_error->path == "/nonexistent-dir/cloud.jsonl");
}
