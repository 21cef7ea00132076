#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fathom/errors.hpp"
#include "fathom/image_io.hpp"
#include "fathom/io.hpp"
#include "fathom/rng.hpp"

using namespace fathom;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fathom_io_" + std::to_string(Rng(std::random_device{}()).next_u64()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("range map binary round-trips exactly, including NaN cells") {
  TempDir dir;
  RangeMap map(7, 5);
  Rng rng(14001);
  for (float& v : map.values) v = static_cast<float>(rng.uniform(0.2, 6.0));
  map.set(3, 2, RangeMap::invalid_value());

  const fs::path file = dir.path / "m.rmp";
  io::write_range_map(file, map);
  const RangeMap back = io::read_range_map(file);
  CHECK(back.width == map.width);
  CHECK(back.height == map.height);
  for (size_t i = 0; i < map.values.size(); ++i) {
    if (std::isnan(map.values[i])) {
      CHECK(std::isnan(back.values[i]));
    } else {
      CHECK(back.values[i] == map.values[i]);
    }
  }
  CHECK_THROWS_AS(io::read_range_map(dir.path / "missing.rmp"), Error);
}

TEST_CASE("bad magic is a format error") {
  TempDir dir;
  const fs::path file = dir.path / "junk.rmp";
  std::ofstream(file) << "not a range map";
  try {
    io::read_range_map(file);
    FAIL("expected FormatError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::FormatError);
  }
}

TEST_CASE("descriptor binary round-trips ids and rows exactly") {
  TempDir dir;
  Rng rng(14002);
  std::vector<std::string> ids = {"alpha", "b", "view_with_long_name_0099"};
  std::vector<float> data;
  for (int i = 0; i < 3 * 17; ++i) data.push_back(static_cast<float>(rng.normal()));
  const DescriptorSet set(ids, 17, data);

  const fs::path file = dir.path / "d.dsc";
  io::write_descriptors(file, set);
  const DescriptorSet back = io::read_descriptors(file);
  CHECK(back.view_ids() == ids);
  CHECK(back.dim() == 17);
  CHECK(back.data() == data);
}

TEST_CASE("calibration json round-trips and warns on distortion") {
  TempDir dir;
  io::CalibrationSet cams;
  io::CameraCalibration cal;
  cal.intrinsics = {1200.0, 1180.0, 640.0, 480.0, 1280, 960};
  cal.vehicle_to_camera = RigidTransform::from_quaternion(
      {std::sqrt(0.5), 0.0, std::sqrt(0.5), 0.0}, {0.1, -0.2, 0.05});
  cams["left"] = cal;

  const fs::path file = dir.path / "cal.json";
  io::write_calibration(file, cams);
  const io::CalibrationSet back = io::read_calibration(file);
  REQUIRE(back.contains("left"));
  CHECK(back.at("left").intrinsics.fx == 1200.0);
  CHECK(back.at("left").intrinsics.width == 1280);
  CHECK(back.at("left").vehicle_to_camera.rotation.isApprox(cal.vehicle_to_camera.rotation, 1e-12));
  CHECK((back.at("left").vehicle_to_camera.translation - cal.vehicle_to_camera.translation).norm() <
        1e-15);

  // Distortion coefficients are tolerated (and ignored).
  std::ofstream(dir.path / "dist.json")
      << R"({"cam": {"fx": 100, "fy": 100, "cx": 50, "cy": 50, "width": 100, "height": 100,
           "distortion": [0.1, 0.01], "extrinsic": {"q": [1, 0, 0, 0], "t": [0, 0, 0]}}})";
  const io::CalibrationSet tolerant = io::read_calibration(dir.path / "dist.json");
  CHECK(tolerant.contains("cam"));
}

TEST_CASE("pose jsonl round-trips poses bit-exactly for doubles") {
  TempDir dir;
  io::PoseFile poses;
  poses.frame.origin = {-33.123456789, 151.987654321, 12.25};
  Rng rng(14003);
  for (int i = 0; i < 5; ++i) {
    CameraView v;
    v.view_id = "v" + std::to_string(i);
    v.visit_id = "visitA";
    v.camera_id = "left";
    v.t_unix = 1.3e9 + i;
    const Eigen::Vector3d axis =
        Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
    const Eigen::AngleAxisd aa(rng.uniform(0.0, 3.0), axis);
    const Eigen::Quaterniond q(aa);
    v.pose_local = RigidTransform::from_quaternion({q.w(), q.x(), q.y(), q.z()},
                                                   Eigen::Vector3d::Zero());
    v.pose_local.translation =
        -(v.pose_local.rotation * Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()));
    if (i % 2 == 0) v.altitude = 2.0 + i;
    poses.views.push_back(v);
  }

  const fs::path file = dir.path / "poses.jsonl";
  io::write_poses(file, poses);
  const io::PoseFile back = io::read_poses(file);
  CHECK(back.frame.origin.latitude_deg == poses.frame.origin.latitude_deg);
  CHECK(back.frame.origin.longitude_deg == poses.frame.origin.longitude_deg);
  REQUIRE(back.views.size() == poses.views.size());
  for (size_t i = 0; i < poses.views.size(); ++i) {
    CHECK(back.views[i].view_id == poses.views[i].view_id);
    CHECK(back.views[i].t_unix == poses.views[i].t_unix);
    CHECK(back.views[i].pose_local.rotation.isApprox(poses.views[i].pose_local.rotation, 1e-12));
    CHECK((back.views[i].pose_local.translation - poses.views[i].pose_local.translation).norm() <
          1e-12);
    CHECK(back.views[i].altitude.has_value() == poses.views[i].altitude.has_value());
  }

  std::ofstream(dir.path / "empty.jsonl");
  CHECK_THROWS_AS(io::read_poses(dir.path / "empty.jsonl"), Error);

  // Duplicate view ids are rejected on ingest.
  {
    std::ofstream dup(dir.path / "dup.jsonl");
    dup << R"({"site_ref": {"lat": -33.0, "lon": 151.0, "height": 0.0}})" << '\n';
    const char* line =
        R"({"view_id": "v", "visit_id": "a", "camera_id": "c", "t_unix": 1.0,
            "p_ned": [0, 0, 0], "q_l_v": [1, 0, 0, 0]})";
    std::string one_line(line);
    one_line.erase(std::remove(one_line.begin(), one_line.end(), '\n'), one_line.end());
    dup << one_line << '\n' << one_line << '\n';
  }
  CHECK_THROWS_AS(io::read_poses(dir.path / "dup.jsonl"), Error);
}

TEST_CASE("link jsonl and scale-offset jsonl round-trip") {
  TempDir dir;
  std::vector<Link> links = {{"q1", "d1", 0.25, 1.5}, {"q1", "d2", 0.125, 2.25}};
  const fs::path file = dir.path / "links.jsonl";
  io::write_links(file, links);
  const std::vector<Link> back = io::read_links(file);
  REQUIRE(back.size() == 2);
  CHECK(back[0].query_view_id == "q1");
  CHECK(back[0].iou == 0.25);
  CHECK(back[1].center_distance == 2.25);

  std::vector<io::ScaleOffsetRecord> records = {{"v0", {2.0, 0.5, 0.001, 409}}};
  io::write_scale_offsets(dir.path / "so.jsonl", records);
  const auto so_back = io::read_scale_offsets(dir.path / "so.jsonl");
  REQUIRE(so_back.size() == 1);
  CHECK(so_back[0].so.a == 2.0);
  CHECK(so_back[0].so.b == 0.5);
  CHECK(so_back[0].so.sample_count == 409);
}

TEST_CASE("footprint jsonl round-trips and geojson is valid RFC 7946") {
  TempDir dir;
  std::vector<Footprint3D> fps(2);
  for (int f = 0; f < 2; ++f) {
    fps[f].view_id = "v" + std::to_string(f);
    for (int i = 0; i < 4; ++i) {
      fps[f].vertices[i] = {-33.0 + 1e-5 * i, 151.0 + 1e-5 * (i % 2), -20.0 + f};
    }
  }
  io::write_footprints_jsonl(dir.path / "fp.jsonl", fps);
  const auto back = io::read_footprints_jsonl(dir.path / "fp.jsonl");
  REQUIRE(back.size() == 2);
  CHECK(back[0].vertices[1].latitude_deg == fps[0].vertices[1].latitude_deg);
  CHECK(back[1].vertices[3].height_m == fps[1].vertices[3].height_m);

  io::write_footprints_geojson(dir.path / "fp.geojson", fps);
  std::ifstream in(dir.path / "fp.geojson");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto root = nlohmann::json::parse(ss.str());
  CHECK(root["type"] == "FeatureCollection");
  REQUIRE(root["features"].size() == 2);
  const auto& geom = root["features"][0]["geometry"];
  CHECK(geom["type"] == "Polygon");
  REQUIRE(geom["coordinates"][0].size() == 5);  // closed ring
  // [lon, lat] element order.
  CHECK(geom["coordinates"][0][0][0].get<double>() == doctest::Approx(151.0));
  CHECK(geom["coordinates"][0][0][1].get<double>() == doctest::Approx(-33.0));
  CHECK(root["features"][0]["properties"]["view_id"] == "v0");
}

TEST_CASE("eval report json and per-query csv") {
  TempDir dir;
  EvalReport report;
  report.pair = {"qv", "db"};
  report.k_values = {1, 5};
  report.recall_at_k = {0.5, 1.0};
  report.ir_recall_at_k = {0.25, 0.5};
  report.valid_query_count = 2;
  report.invalid_query_count = 1;
  PerQueryOutcome a{"q0", true, 2, {2}};
  PerQueryOutcome b{"q1", true, 1, {1}};
  PerQueryOutcome c{"q2", false, 0, {}};
  report.per_query = {a, b, c};

  io::write_eval_report(dir.path / "report.json", report);
  const EvalReport back = io::read_eval_report(dir.path / "report.json");
  CHECK(back.pair.query_visit_id == "qv");
  CHECK(back.k_values == report.k_values);
  CHECK(back.recall_at_k == report.recall_at_k);
  CHECK(back.valid_query_count == 2);
  REQUIRE(back.per_query.size() == 3);
  CHECK(back.per_query[0].hit_ranks == std::vector<int>{2});

  io::write_per_query_csv(dir.path / "per_query.csv", report);
  std::ifstream csv(dir.path / "per_query.csv");
  std::string header, line0, line2;
  std::getline(csv, header);
  std::getline(csv, line0);
  std::getline(csv, line2);
  std::getline(csv, line2);
  CHECK(header == "view_id,valid,link_count,first_hit_rank,outcome_at_1,outcome_at_5");
  CHECK(line0 == "q0,1,2,2,unrecognized,recognized");
  CHECK(line2 == "q2,0,0,,invalid,invalid");
}

TEST_CASE("pixel stats binary round-trips") {
  TempDir dir;
  PixelStats stats;
  stats.width = 3;
  stats.height = 2;
  stats.channels = 1;
  stats.image_count = 7;
  Rng rng(14004);
  for (int i = 0; i < 6; ++i) {
    stats.mean.push_back(rng.uniform());
    stats.stddev.push_back(rng.uniform() * 0.2);
  }
  io::write_pixel_stats(dir.path / "s.pst", stats);
  const PixelStats back = io::read_pixel_stats(dir.path / "s.pst");
  CHECK(back.image_count == 7);
  CHECK(back.mean == stats.mean);
  CHECK(back.stddev == stats.stddev);
}

TEST_CASE("pnm images round-trip at both bit depths") {
  TempDir dir;
  Image img(5, 4, 3);
  Rng rng(14005);
  for (float& v : img.data) v = static_cast<float>(rng.uniform());

  io::write_image(dir.path / "img8.ppm", img, 8);
  const Image back8 = io::read_image(dir.path / "img8.ppm");
  CHECK(back8.channels == 3);
  for (size_t i = 0; i < img.data.size(); ++i) {
    CHECK(std::abs(back8.data[i] - img.data[i]) <= 0.5f / 255.0f + 1e-6f);
  }
  // Write-read-write is byte-stable (quantization is idempotent).
  io::write_image(dir.path / "img8b.ppm", back8, 8);
  std::ifstream f1(dir.path / "img8.ppm", std::ios::binary);
  std::ifstream f2(dir.path / "img8b.ppm", std::ios::binary);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());

  io::write_image(dir.path / "img16.pgm", Image(4, 3, 1, 0.731f), 16);
  const Image back16 = io::read_image(dir.path / "img16.pgm");
  CHECK(back16.channels == 1);
  CHECK(std::abs(back16.data[0] - 0.731f) <= 0.5f / 65535.0f + 1e-7f);
}

TEST_CASE("png images round-trip at both bit depths") {
  TempDir dir;
  Image img(6, 5, 3);
  Rng rng(14006);
  for (float& v : img.data) v = static_cast<float>(rng.uniform());

  io::write_image(dir.path / "img.png", img, 8);
  const Image back = io::read_image(dir.path / "img.png");
  CHECK(back.width == 6);
  CHECK(back.channels == 3);
  for (size_t i = 0; i < img.data.size(); ++i) {
    CHECK(std::abs(back.data[i] - img.data[i]) <= 0.5f / 255.0f + 1e-6f);
  }

  io::write_image(dir.path / "img16.png", img, 16);
  const Image back16 = io::read_image(dir.path / "img16.png");
  for (size_t i = 0; i < img.data.size(); ++i) {
    CHECK(std::abs(back16.data[i] - img.data[i]) <= 0.5f / 65535.0f + 1e-7f);
  }
}
