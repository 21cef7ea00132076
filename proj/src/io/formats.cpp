#include "fathom/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <set>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "fathom/errors.hpp"

namespace fathom::io {

using ordered_json = nlohmann::ordered_json;

static_assert(std::endian::native == std::endian::little,
              "binary formats are little-endian; big-endian hosts need byte swaps");

namespace {

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) raise(Errc::IoError, "cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) raise(Errc::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const char* what) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) raise(Errc::FormatError, std::string("truncated input while reading ") + what);
  return value;
}

ordered_json parse_json(const std::string& text, const std::string& where) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(Errc::FormatError, "invalid JSON in " + where);
  return j;
}

double get_number(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number()) {
    raise(Errc::FormatError, "missing numeric field '" + std::string(key) + "' in " + where);
  }
  return j[key].get<double>();
}

Eigen::Vector3d get_vec3(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3) {
    raise(Errc::FormatError, "field '" + std::string(key) + "' must be a 3-array in " + where);
  }
  return {j[key][0].get<double>(), j[key][1].get<double>(), j[key][2].get<double>()};
}

Eigen::Vector4d get_vec4(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 4) {
    raise(Errc::FormatError, "field '" + std::string(key) + "' must be a 4-array in " + where);
  }
  return {j[key][0].get<double>(), j[key][1].get<double>(), j[key][2].get<double>(),
          j[key][3].get<double>()};
}

}  // namespace

CalibrationSet read_calibration(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::in);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const ordered_json root = parse_json(buffer.str(), path.string());
  if (!root.is_object() || root.empty()) {
    raise(Errc::FormatError, "calibration file must map camera ids to entries");
  }

  CalibrationSet cameras;
  for (const auto& [camera_id, entry] : root.items()) {
    const std::string where = path.string() + ":" + camera_id;
    CameraCalibration cal;
    cal.intrinsics.fx = get_number(entry, "fx", where);
    cal.intrinsics.fy = get_number(entry, "fy", where);
    cal.intrinsics.cx = get_number(entry, "cx", where);
    cal.intrinsics.cy = get_number(entry, "cy", where);
    cal.intrinsics.width = static_cast<int>(get_number(entry, "width", where));
    cal.intrinsics.height = static_cast<int>(get_number(entry, "height", where));
    cal.intrinsics.validate();
    if (entry.contains("distortion")) {
      std::cerr << "warning: ignoring distortion coefficients for camera '" << camera_id
                << "'; inputs are assumed undistorted\n";
    }
    if (!entry.contains("extrinsic")) {
      raise(Errc::FormatError, "missing extrinsic in " + where);
    }
    const auto& ext = entry["extrinsic"];
    cal.vehicle_to_camera = RigidTransform::from_quaternion(get_vec4(ext, "q", where),
                                                            get_vec3(ext, "t", where));
    cameras.emplace(camera_id, std::move(cal));
  }
  return cameras;
}

void write_calibration(const std::filesystem::path& path, const CalibrationSet& cameras) {
  ordered_json root = ordered_json::object();
  for (const auto& [camera_id, cal] : cameras) {
    const Eigen::Vector4d q = cal.vehicle_to_camera.quaternion_wxyz();
    const Eigen::Vector3d& t = cal.vehicle_to_camera.translation;
    root[camera_id] = {
        {"fx", cal.intrinsics.fx},   {"fy", cal.intrinsics.fy},
        {"cx", cal.intrinsics.cx},   {"cy", cal.intrinsics.cy},
        {"width", cal.intrinsics.width}, {"height", cal.intrinsics.height},
        {"extrinsic",
         {{"q", {q[0], q[1], q[2], q[3]}}, {"t", {t.x(), t.y(), t.z()}}}},
    };
  }
  std::ofstream out = open_out(path, std::ios::out);
  out << root.dump(2) << '\n';
}

PoseFile read_poses(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::in);
  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    raise(Errc::FormatError, "empty pose file " + path.string());
  }
  const ordered_json header = parse_json(line, path.string() + " header");
  if (!header.contains("site_ref")) {
    raise(Errc::FormatError, "pose header must contain site_ref");
  }
  PoseFile poses;
  const auto& ref = header["site_ref"];
  poses.frame.origin.latitude_deg = get_number(ref, "lat", "site_ref");
  poses.frame.origin.longitude_deg =
      GeodeticPoint::normalize_longitude(get_number(ref, "lon", "site_ref"));
  poses.frame.origin.height_m = get_number(ref, "height", "site_ref");
  poses.frame.origin.validate();

  std::set<std::string> seen_ids;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const ordered_json j = parse_json(line, where);
    CameraView view;
    view.view_id = j.value("view_id", "");
    view.visit_id = j.value("visit_id", "");
    view.camera_id = j.value("camera_id", "");
    if (view.view_id.empty() || view.visit_id.empty() || view.camera_id.empty()) {
      raise(Errc::FormatError, "pose line missing view/visit/camera id at " + where);
    }
    if (!seen_ids.insert(view.view_id).second) {
      raise(Errc::FormatError, "duplicate view_id '" + view.view_id + "' at " + where);
    }
    view.t_unix = get_number(j, "t_unix", where);
    const Eigen::Vector3d p_ned = get_vec3(j, "p_ned", where);
    const Eigen::Vector4d q_l_v = get_vec4(j, "q_l_v", where);
    if (!p_ned.allFinite()) raise(Errc::FormatError, "non-finite pose at " + where);
    // The line stores the vehicle position and the local-to-vehicle attitude;
    // the transform's translation is therefore -R * position.
    const RigidTransform attitude = RigidTransform::from_quaternion(q_l_v, Eigen::Vector3d::Zero());
    view.pose_local.rotation = attitude.rotation;
    view.pose_local.translation = -(attitude.rotation * p_ned);
    if (j.contains("altitude") && j["altitude"].is_number()) {
      view.altitude = j["altitude"].get<double>();
    }
    poses.views.push_back(std::move(view));
  }
  return poses;
}

void write_poses(const std::filesystem::path& path, const PoseFile& poses) {
  std::ofstream out = open_out(path, std::ios::out);
  ordered_json header;
  header["site_ref"] = {{"lat", poses.frame.origin.latitude_deg},
                        {"lon", poses.frame.origin.longitude_deg},
                        {"height", poses.frame.origin.height_m}};
  out << header.dump() << '\n';
  for (const CameraView& view : poses.views) {
    const Eigen::Vector3d position = -(view.pose_local.rotation.transpose() * view.pose_local.translation);
    const Eigen::Vector4d q = view.pose_local.quaternion_wxyz();
    ordered_json j;
    j["view_id"] = view.view_id;
    j["visit_id"] = view.visit_id;
    j["camera_id"] = view.camera_id;
    j["t_unix"] = view.t_unix;
    j["p_ned"] = {position.x(), position.y(), position.z()};
    j["q_l_v"] = {q[0], q[1], q[2], q[3]};
    if (view.altitude) j["altitude"] = *view.altitude;
    out << j.dump() << '\n';
  }
}

RangeMap read_range_map(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "RMP1", 4) != 0) {
    raise(Errc::FormatError, "bad range map magic in " + path.string());
  }
  const auto width = read_raw<uint32_t>(in, "range map width");
  const auto height = read_raw<uint32_t>(in, "range map height");
  if (width == 0 || height == 0 || width > 1u << 20 || height > 1u << 20) {
    raise(Errc::FormatError, "implausible range map dimensions in " + path.string());
  }
  RangeMap map(static_cast<int>(width), static_cast<int>(height));
  in.read(reinterpret_cast<char*>(map.values.data()),
          static_cast<std::streamsize>(map.values.size() * sizeof(float)));
  if (!in) raise(Errc::FormatError, "truncated range map " + path.string());
  return map;
}

void write_range_map(const std::filesystem::path& path, const RangeMap& map) {
  std::ofstream out = open_out(path, std::ios::binary);
  out.write("RMP1", 4);
  write_raw(out, static_cast<uint32_t>(map.width));
  write_raw(out, static_cast<uint32_t>(map.height));
  out.write(reinterpret_cast<const char*>(map.values.data()),
            static_cast<std::streamsize>(map.values.size() * sizeof(float)));
  if (!out) raise(Errc::IoError, "failed writing " + path.string());
}

DescriptorSet read_descriptors(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "DSC1", 4) != 0) {
    raise(Errc::FormatError, "bad descriptor magic in " + path.string());
  }
  const auto count = read_raw<uint32_t>(in, "descriptor count");
  const auto dim = read_raw<uint32_t>(in, "descriptor dim");
  if (dim == 0 || dim > 1u << 20) {
    raise(Errc::FormatError, "implausible descriptor dimension in " + path.string());
  }
  std::vector<std::string> ids(count);
  for (uint32_t i = 0; i < count; ++i) {
    const auto len = read_raw<uint16_t>(in, "view id length");
    ids[i].resize(len);
    in.read(ids[i].data(), len);
    if (!in) raise(Errc::FormatError, "truncated view id in " + path.string());
  }
  std::vector<float> data(static_cast<size_t>(count) * dim);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(float)));
  if (!in) raise(Errc::FormatError, "truncated descriptor data in " + path.string());
  return DescriptorSet(std::move(ids), static_cast<int>(dim), std::move(data));
}

void write_descriptors(const std::filesystem::path& path, const DescriptorSet& set) {
  std::ofstream out = open_out(path, std::ios::binary);
  out.write("DSC1", 4);
  write_raw(out, static_cast<uint32_t>(set.size()));
  write_raw(out, static_cast<uint32_t>(set.dim()));
  for (size_t i = 0; i < set.size(); ++i) {
    const std::string& id = set.view_id(i);
    if (id.size() > 0xffff) raise(Errc::InvalidArgument, "view id longer than 65535 bytes");
    write_raw(out, static_cast<uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  out.write(reinterpret_cast<const char*>(set.data().data()),
            static_cast<std::streamsize>(set.data().size() * sizeof(float)));
  if (!out) raise(Errc::IoError, "failed writing " + path.string());
}

std::vector<Link> read_links(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::in);
  std::vector<Link> links;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const ordered_json j = parse_json(line, where);
    Link link;
    link.query_view_id = j.value("q", "");
    link.db_view_id = j.value("d", "");
    if (link.query_view_id.empty() || link.db_view_id.empty()) {
      raise(Errc::FormatError, "link line missing q/d at " + where);
    }
    link.iou = get_number(j, "iou", where);
    link.center_distance = get_number(j, "dist_m", where);
    links.push_back(std::move(link));
  }
  return links;
}

void write_links(const std::filesystem::path& path, std::span<const Link> links) {
  std::ofstream out = open_out(path, std::ios::out);
  for (const Link& link : links) {
    ordered_json j;
    j["q"] = link.query_view_id;
    j["d"] = link.db_view_id;
    j["iou"] = link.iou;
    j["dist_m"] = link.center_distance;
    out << j.dump() << '\n';
  }
}

void write_footprints_jsonl(const std::filesystem::path& path,
                            std::span<const Footprint3D> footprints) {
  std::ofstream out = open_out(path, std::ios::out);
  for (const Footprint3D& fp : footprints) {
    ordered_json corners = ordered_json::array();
    for (const GeodeticPoint& v : fp.vertices) {
      corners.push_back({{"lat", v.latitude_deg}, {"lon", v.longitude_deg}, {"height", v.height_m}});
    }
    ordered_json j;
    j["view_id"] = fp.view_id;
    j["corners"] = corners;
    out << j.dump() << '\n';
  }
}

std::vector<Footprint3D> read_footprints_jsonl(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::in);
  std::vector<Footprint3D> footprints;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const ordered_json j = parse_json(line, where);
    Footprint3D fp;
    fp.view_id = j.value("view_id", "");
    if (fp.view_id.empty() || !j.contains("corners") || j["corners"].size() != 4) {
      raise(Errc::FormatError, "footprint line needs view_id and 4 corners at " + where);
    }
    for (int i = 0; i < 4; ++i) {
      const auto& c = j["corners"][i];
      fp.vertices[i].latitude_deg = get_number(c, "lat", where);
      fp.vertices[i].longitude_deg = get_number(c, "lon", where);
      fp.vertices[i].height_m = get_number(c, "height", where);
    }
    footprints.push_back(std::move(fp));
  }
  return footprints;
}

void write_footprints_geojson(const std::filesystem::path& path,
                              std::span<const Footprint3D> footprints) {
  ordered_json features = ordered_json::array();
  for (const Footprint3D& fp : footprints) {
    ordered_json ring = ordered_json::array();
    for (const GeodeticPoint& v : fp.vertices) {
      ring.push_back({v.longitude_deg, v.latitude_deg});
    }
    ring.push_back({fp.vertices[0].longitude_deg, fp.vertices[0].latitude_deg});  // closed ring
    ordered_json feature;
    feature["type"] = "Feature";
    feature["geometry"] = {{"type", "Polygon"}, {"coordinates", ordered_json::array({ring})}};
    feature["properties"] = {{"view_id", fp.view_id}};
    features.push_back(std::move(feature));
  }
  ordered_json root;
  root["type"] = "FeatureCollection";
  root["features"] = features;
  std::ofstream out = open_out(path, std::ios::out);
  out << root.dump(2) << '\n';
}

void write_scale_offsets(const std::filesystem::path& path,
                         std::span<const ScaleOffsetRecord> records) {
  std::ofstream out = open_out(path, std::ios::out);
  for (const auto& rec : records) {
    ordered_json j;
    j["view_id"] = rec.view_id;
    j["a"] = rec.so.a;
    j["b"] = rec.so.b;
    j["inlier_rmse"] = rec.so.inlier_rmse;
    j["sample_count"] = rec.so.sample_count;
    out << j.dump() << '\n';
  }
}

std::vector<ScaleOffsetRecord> read_scale_offsets(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::in);
  std::vector<ScaleOffsetRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const ordered_json j = parse_json(line, where);
    ScaleOffsetRecord rec;
    rec.view_id = j.value("view_id", "");
    rec.so.a = get_number(j, "a", where);
    rec.so.b = get_number(j, "b", where);
    rec.so.inlier_rmse = get_number(j, "inlier_rmse", where);
    rec.so.sample_count = static_cast<size_t>(get_number(j, "sample_count", where));
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

const char* outcome_name(QueryOutcome outcome) {
  switch (outcome) {
    case QueryOutcome::Recognized: return "recognized";
    case QueryOutcome::Unrecognized: return "unrecognized";
    case QueryOutcome::Invalid: return "invalid";
  }
  return "invalid";
}

}  // namespace

void write_eval_report(const std::filesystem::path& path, const EvalReport& report) {
  ordered_json root;
  root["query_visit"] = report.pair.query_visit_id;
  root["database_visit"] = report.pair.database_visit_id;
  root["k_values"] = report.k_values;
  root["recall_at_k"] = report.recall_at_k;
  root["ir_recall_at_k"] = report.ir_recall_at_k;
  root["valid_query_count"] = report.valid_query_count;
  root["invalid_query_count"] = report.invalid_query_count;
  ordered_json queries = ordered_json::array();
  for (const auto& q : report.per_query) {
    ordered_json entry;
    entry["view_id"] = q.view_id;
    entry["valid"] = q.valid;
    entry["link_count"] = q.link_count;
    entry["hit_ranks"] = q.hit_ranks;
    ordered_json outcomes = ordered_json::object();
    for (int k : report.k_values) {
      outcomes[std::to_string(k)] = outcome_name(q.outcome_at(k));
    }
    entry["outcome_at_k"] = outcomes;
    queries.push_back(std::move(entry));
  }
  root["per_query"] = queries;
  std::ofstream out = open_out(path, std::ios::out);
  out << root.dump(2) << '\n';
}

EvalReport read_eval_report(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::in);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const ordered_json root = parse_json(buffer.str(), path.string());
  EvalReport report;
  report.pair.query_visit_id = root.value("query_visit", "");
  report.pair.database_visit_id = root.value("database_visit", "");
  report.k_values = root.value("k_values", std::vector<int>{});
  report.recall_at_k = root.value("recall_at_k", std::vector<double>{});
  report.ir_recall_at_k = root.value("ir_recall_at_k", std::vector<double>{});
  report.valid_query_count = root.value("valid_query_count", size_t{0});
  report.invalid_query_count = root.value("invalid_query_count", size_t{0});
  if (root.contains("per_query")) {
    for (const auto& entry : root["per_query"]) {
      PerQueryOutcome q;
      q.view_id = entry.value("view_id", "");
      q.valid = entry.value("valid", false);
      q.link_count = entry.value("link_count", size_t{0});
      q.hit_ranks = entry.value("hit_ranks", std::vector<int>{});
      report.per_query.push_back(std::move(q));
    }
  }
  return report;
}

void write_per_query_csv(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out = open_out(path, std::ios::out);
  out << "view_id,valid,link_count,first_hit_rank";
  for (int k : report.k_values) out << ",outcome_at_" << k;
  out << '\n';
  for (const auto& q : report.per_query) {
    out << q.view_id << ',' << (q.valid ? 1 : 0) << ',' << q.link_count << ',';
    if (!q.hit_ranks.empty()) out << q.hit_ranks.front();
    for (int k : report.k_values) out << ',' << outcome_name(q.outcome_at(k));
    out << '\n';
  }
}

void write_pixel_stats(const std::filesystem::path& path, const PixelStats& stats) {
  std::ofstream out = open_out(path, std::ios::binary);
  out.write("PST1", 4);
  write_raw(out, static_cast<uint32_t>(stats.width));
  write_raw(out, static_cast<uint32_t>(stats.height));
  write_raw(out, static_cast<uint32_t>(stats.channels));
  write_raw(out, static_cast<uint64_t>(stats.image_count));
  out.write(reinterpret_cast<const char*>(stats.mean.data()),
            static_cast<std::streamsize>(stats.mean.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(stats.stddev.data()),
            static_cast<std::streamsize>(stats.stddev.size() * sizeof(double)));
  if (!out) raise(Errc::IoError, "failed writing " + path.string());
}

PixelStats read_pixel_stats(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "PST1", 4) != 0) {
    raise(Errc::FormatError, "bad pixel stats magic in " + path.string());
  }
  PixelStats stats;
  stats.width = static_cast<int>(read_raw<uint32_t>(in, "stats width"));
  stats.height = static_cast<int>(read_raw<uint32_t>(in, "stats height"));
  stats.channels = static_cast<int>(read_raw<uint32_t>(in, "stats channels"));
  stats.image_count = read_raw<uint64_t>(in, "stats image count");
  const size_t cells = static_cast<size_t>(stats.width) * stats.height * stats.channels;
  stats.mean.resize(cells);
  stats.stddev.resize(cells);
  in.read(reinterpret_cast<char*>(stats.mean.data()),
          static_cast<std::streamsize>(cells * sizeof(double)));
  in.read(reinterpret_cast<char*>(stats.stddev.data()),
          static_cast<std::streamsize>(cells * sizeof(double)));
  if (!in) raise(Errc::FormatError, "truncated pixel stats " + path.string());
  return stats;
}

}  // namespace fathom::io
