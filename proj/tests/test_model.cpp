#include "model.hpp"

#include "frame_gen.hpp"

#include <doctest.h>

#include <cmath>

using namespace ars548;

namespace
{

TrackedObject object_with_velocity(float vx, float vy)
{
  TrackedObject o;
  o.velocity_rel_x = vx;
  o.velocity_rel_y = vy;
  return o;
}

}  // namespace

TEST_CASE("object_speed basic values")
{
  CHECK(object_speed(object_with_velocity(0.f, 0.f)) == 0.0);
  CHECK(object_speed(object_with_velocity(3.f, 4.f)) == doctest::Approx(5.0));
  // 10 km/h, conversion exact by definition: 10 / 3.6.
  CHECK(object_speed(object_with_velocity(-2.7778f, 0.f)) == doctest::Approx(2.7778));
  CHECK(object_speed(object_with_velocity(-2.7778f, 0.f)) >= 0.0);
}

TEST_CASE("object_speed is scale homogeneous")
{
  testgen::Gen gen(42);
  for (int i = 0; i < 200; ++i) {
    const float vx = gen.uniform(-50.f, 50.f);
    const float vy = gen.uniform(-50.f, 50.f);
    const float k = gen.uniform(-8.f, 8.f);
    const double lhs = object_speed(object_with_velocity(k * vx, k * vy));
    const double rhs = std::abs(static_cast<double>(k)) *
                       object_speed(object_with_velocity(vx, vy));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));
  }
}

TEST_CASE("object_heading basic directions")
{
  CHECK(object_heading(object_with_velocity(1.f, 0.f)) == doctest::Approx(0.0));
  CHECK(object_heading(object_with_velocity(0.f, 1.f)) == doctest::Approx(M_PI / 2));
  // Frozen from the closed form: atan2(-1, -1) = -3*pi/4.
  CHECK(object_heading(object_with_velocity(-1.f, -1.f)) == doctest::Approx(-3.0 * M_PI / 4.0));
}

TEST_CASE("object_heading falls back to orientation below eps speed")
{
  TrackedObject o = object_with_velocity(0.f, 0.f);
  o.orientation_yaw = 1.25f;
  CHECK(object_heading(o) == doctest::Approx(1.25));

  o.velocity_rel_x = 5e-7f;
  CHECK(object_heading(o) == doctest::Approx(1.25));
}

TEST_CASE("object_heading invariant under positive scaling")
{
  testgen::Gen gen(7);
  for (int i = 0; i < 200; ++i) {
    const float vx = gen.uniform(-20.f, 20.f);
    const float vy = gen.uniform(-20.f, 20.f);
    const auto base = object_with_velocity(vx, vy);
    if (object_speed(base) < eps_speed) {
      continue;
    }
    const float k = gen.uniform(0.1f, 10.f);
    CHECK(
      object_heading(object_with_velocity(k * vx, k * vy)) ==
      doctest::Approx(object_heading(base)).epsilon(1e-5));
  }
}

TEST_CASE("object_heading stays in (-pi, pi]")
{
  // atan2(-0, -1) would land on -pi; the convention maps that onto +pi.
  CHECK(object_heading(object_with_velocity(-1.f, -0.f)) == doctest::Approx(M_PI));
  CHECK(object_heading(object_with_velocity(-1.f, 0.f)) == doctest::Approx(M_PI));
}

TEST_CASE("apply_stamp_policy keep is identity")
{
  testgen::Gen gen(11);
  for (const auto kind : {FrameKind::status, FrameKind::object_list, FrameKind::detection_list}) {
    const Frame frame = gen.frame_of_kind(kind);
    CHECK(apply_stamp_policy(frame, StampPolicy::keep_original) == frame);
  }
}

TEST_CASE("apply_stamp_policy override substitutes the receive wall time")
{
  Frame frame;
  DetectionList list;
  list.stamp = Timestamp{100, 5, SyncStatus::sync_ok};
  frame.payload = list;
  frame.recv_time.wall_ns = 200u * 1'000'000'000ull + 7u;

  const Frame out = apply_stamp_policy(frame, StampPolicy::override_local);
  const auto & stamp = std::get<DetectionList>(out.payload).stamp;
  CHECK(stamp.seconds == 200);
  CHECK(stamp.nanoseconds == 7);
  CHECK(stamp.sync_status == SyncStatus::sync_ok);
}

TEST_CASE("apply_stamp_policy override touches exactly the stamp")
{
  testgen::Gen gen(13);
  for (const auto kind : {FrameKind::status, FrameKind::object_list, FrameKind::detection_list}) {
    const Frame original = gen.frame_of_kind(kind);
    Frame overridden = apply_stamp_policy(original, StampPolicy::override_local);

    const Timestamp expected =
      Timestamp::from_nanoseconds(original.recv_time.wall_ns, original.stamp().sync_status);
    CHECK(overridden.stamp() == expected);

    // Restoring the stamp must make the frames identical field-by-field.
    std::visit(
      [&](auto & payload) { payload.stamp = original.stamp(); }, overridden.payload);
    CHECK(overridden == original);
  }
}

TEST_CASE("apply_stamp_policy is idempotent for fixed recv_time")
{
  testgen::Gen gen(17);
  const Frame frame = gen.frame_of_kind(FrameKind::object_list);
  const Frame once = apply_stamp_policy(frame, StampPolicy::override_local);
  const Frame twice = apply_stamp_policy(once, StampPolicy::override_local);
  CHECK(once == twice);
}

TEST_CASE("generated values satisfy the validators")
{
  testgen::Gen gen(23);
  for (int i = 0; i < 50; ++i) {
    CHECK_FALSE(validate(gen.detection()).has_value());
    CHECK_FALSE(validate(gen.object(i + 1)).has_value());
    CHECK_FALSE(validate(gen.status()).has_value());
    CHECK_FALSE(validate(gen.detection_list(gen.index(20))).has_value());
    CHECK_FALSE(validate(gen.object_list(gen.index(10))).has_value());
  }
}

TEST_CASE("validate rejects out-of-range fields")
{
  Timestamp stamp{1, 1'000'000'000, SyncStatus::sync_ok};
  auto violation = validate(stamp);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "stamp.nanoseconds");

  stamp.nanoseconds = 0;
  stamp.sync_status = static_cast<SyncStatus>(4);
  violation = validate(stamp);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "stamp.sync_status");

  Detection d;
  d.azimuth_std = -0.5f;
  violation = validate(d);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "azimuth_std");

  d = Detection{};
  d.azimuth = 3.2f;
  violation = validate(d);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "azimuth");

  d = Detection{};
  d.range = -1.f;
  CHECK(validate(d).has_value());

  d = Detection{};
  d.classification = static_cast<Classification>(8);
  CHECK(validate(d).has_value());
}

TEST_CASE("validate angle bounds in float domain")
{
  // float(pi) is slightly above the double value; still the upper bound.
  Detection d;
  d.azimuth = static_cast<float>(M_PI);
  CHECK_FALSE(validate(d).has_value());
  d.azimuth = -static_cast<float>(M_PI);
  CHECK(validate(d).has_value());  // open lower bound

  d = Detection{};
  d.elevation = static_cast<float>(M_PI / 2);
  CHECK_FALSE(validate(d).has_value());
  d.elevation = -static_cast<float>(M_PI / 2);
  CHECK_FALSE(validate(d).has_value());  // closed both ends
}

TEST_CASE("validate list capacity and id uniqueness")
{
  testgen::Gen gen(29);
  DetectionList detections = gen.detection_list(3);
  detections.detections.resize(max_detections + 1, gen.detection());
  auto violation = validate(detections);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "detections.count");

  ObjectList objects = gen.object_list(2);
  objects.objects[1].id = objects.objects[0].id;
  violation = validate(objects);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "objects[1].id");
}

TEST_CASE("validate vehicle and radar parameter ranges")
{
  VehicleDimensions vehicle{4.5f, 1.8f, 1.5f, 2.7f};
  CHECK_FALSE(validate(vehicle).has_value());
  vehicle.wheelbase = 5.f;
  auto violation = validate(vehicle);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "wheelbase");

  RadarParameters radar{300, FrequencySlot::mid, 50, 0, false};
  CHECK_FALSE(validate(radar).has_value());
  radar.max_detection_distance = 98;
  violation = validate(radar);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "max_detection_distance");
  radar.max_detection_distance = 1501;
  CHECK(validate(radar).has_value());
  radar.max_detection_distance = 99;
  CHECK_FALSE(validate(radar).has_value());
  radar.max_detection_distance = 1500;
  CHECK_FALSE(validate(radar).has_value());

  radar.frequency_slot = static_cast<FrequencySlot>(3);
  violation = validate(radar);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "frequency_slot");
}

TEST_CASE("validate configuration needs at least one group")
{
  SensorConfiguration configuration;
  auto violation = validate(configuration);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "presence");

  configuration.radar = RadarParameters{300, FrequencySlot::low, 55, 0, false};
  CHECK_FALSE(validate(configuration).has_value());

  configuration.radar->max_detection_distance = 50;
  violation = validate(configuration);
  REQUIRE(violation.has_value());
  CHECK(violation->field == "radar.max_detection_distance");
}

TEST_CASE("ipv4 helpers")
{
  CHECK(ipv4_to_string(0x0A0D0171) == "10.13.1.113");
  CHECK(parse_ipv4("10.13.1.113") == 0x0A0D0171u);
  CHECK(parse_ipv4("224.0.2.2") == 0xE0000202u);
  CHECK_FALSE(parse_ipv4("10.13.1").has_value());
  CHECK_FALSE(parse_ipv4("10.13.1.913").has_value());
  CHECK_FALSE(parse_ipv4("hostname").has_value());
}

TEST_CASE("timestamp nanosecond round trip")
{
  const Timestamp stamp = Timestamp::from_nanoseconds(1'234'567'890'123ull, SyncStatus::sync_ok);
  CHECK(stamp.seconds == 1234);
  CHECK(stamp.nanoseconds == 567'890'123);
  CHECK(stamp.to_nanoseconds() == 1'234'567'890'123ull);
}
