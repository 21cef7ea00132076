#include "fathom/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "fathom/errors.hpp"
#include "fathom/rng.hpp"

namespace fathom {

namespace {

Eigen::Matrix3d yaw_rotation(double yaw) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  Eigen::Matrix3d r;
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;  // vehicle axes expressed in NED
}

}  // namespace

Terrain Terrain::flat(double depth, double extent) {
  Terrain t;
  t.kind_ = Flat{depth};
  t.extent_ = extent;
  return t;
}

Terrain Terrain::step(double shallow_depth, double deep_depth, double boundary_north,
                      double extent) {
  if (!(deep_depth > shallow_depth)) {
    raise(Errc::InvalidArgument, "step terrain needs deep_depth > shallow_depth");
  }
  Terrain t;
  t.kind_ = Step{shallow_depth, deep_depth, boundary_north};
  t.extent_ = extent;
  return t;
}

Terrain Terrain::boulders(double base_depth, double relief, int cells, uint64_t seed,
                          double extent) {
  if (cells < 1 || !(relief >= 0.0)) {
    raise(Errc::InvalidArgument, "boulder terrain needs cells >= 1 and relief >= 0");
  }
  Terrain t;
  t.kind_ = Boulders{base_depth, relief, cells, seed};
  t.extent_ = extent;
  Rng rng(seed);
  const size_t n = static_cast<size_t>(cells + 1);
  t.noise_.resize(n * n);
  for (double& v : t.noise_) v = rng.uniform();
  return t;
}

namespace {

// Bilinear sample of a (cells+1)^2 unit-noise grid spanning [-extent, extent]^2.
double bilinear_noise(const std::vector<double>& grid, int cells, double extent, double north,
                      double east) {
  const size_t n = static_cast<size_t>(cells);
  const double u = std::clamp((north + extent) / (2.0 * extent), 0.0, 1.0) * n;
  const double v = std::clamp((east + extent) / (2.0 * extent), 0.0, 1.0) * n;
  const size_t i0 = std::min(static_cast<size_t>(u), n - 1);
  const size_t j0 = std::min(static_cast<size_t>(v), n - 1);
  const double fu = u - static_cast<double>(i0);
  const double fv = v - static_cast<double>(j0);
  const size_t stride = n + 1;
  const double h00 = grid[i0 * stride + j0];
  const double h10 = grid[(i0 + 1) * stride + j0];
  const double h01 = grid[i0 * stride + j0 + 1];
  const double h11 = grid[(i0 + 1) * stride + j0 + 1];
  return (1.0 - fu) * ((1.0 - fv) * h00 + fv * h01) + fu * ((1.0 - fv) * h10 + fv * h11);
}

}  // namespace

Terrain Terrain::with_micro_relief(double amplitude, int cells, uint64_t seed) const {
  if (amplitude < 0.0 || cells < 1) {
    raise(Errc::InvalidArgument, "micro relief needs amplitude >= 0 and cells >= 1");
  }
  Terrain t = *this;
  t.micro_amplitude_ = amplitude;
  t.micro_cells_ = cells;
  Rng rng(seed);
  const size_t n = static_cast<size_t>(cells + 1);
  t.micro_noise_.resize(n * n);
  for (double& v : t.micro_noise_) v = rng.uniform();
  return t;
}

bool Terrain::needs_marching() const {
  return std::holds_alternative<Boulders>(kind_) || micro_amplitude_ > 0.0;
}

double Terrain::base_depth_at(double north, double east) const {
  if (const auto* f = std::get_if<Flat>(&kind_)) return f->depth;
  if (const auto* s = std::get_if<Step>(&kind_)) {
    return north < s->boundary_north ? s->shallow_depth : s->deep_depth;
  }
  const auto& b = std::get<Boulders>(kind_);
  // Value-noise heights rise above the base depth.
  return b.base_depth - b.relief * bilinear_noise(noise_, b.cells, extent_, north, east);
}

double Terrain::depth_at(double north, double east) const {
  double depth = base_depth_at(north, east);
  if (micro_amplitude_ > 0.0) {
    depth -= micro_amplitude_ * bilinear_noise(micro_noise_, micro_cells_, extent_, north, east);
  }
  return depth;
}

double Terrain::raycast(const RigidTransform& camera_to_local,
                        const Eigen::Vector3d& direction) const {
  const Eigen::Vector3d d = camera_to_local.rotation * direction;  // per unit optical depth
  const Eigen::Vector3d o = camera_to_local.translation;
  if (!(d.z() > 0.0)) raise(Errc::RayMiss, "ray does not descend toward the seafloor");

  const auto in_extent = [this](double n, double e) {
    return std::abs(n) <= extent_ && std::abs(e) <= extent_;
  };

  if (!needs_marching()) {
    if (const auto* f = std::get_if<Flat>(&kind_)) {
      const double z = (f->depth - o.z()) / d.z();
      if (!(z > 0.0)) raise(Errc::RayMiss, "camera below the seafloor plane");
      const Eigen::Vector3d hit = o + z * d;
      if (!in_extent(hit.x(), hit.y())) raise(Errc::RayMiss, "ray leaves the terrain extent");
      return z;
    }
    const auto& s = std::get<Step>(kind_);
    double best = std::numeric_limits<double>::infinity();
    // Shallow plane, valid on its own side of the boundary.
    {
      const double z = (s.shallow_depth - o.z()) / d.z();
      if (z > 0.0) {
        const Eigen::Vector3d hit = o + z * d;
        if (hit.x() < s.boundary_north) best = std::min(best, z);
      }
    }
    // Deep plane.
    {
      const double z = (s.deep_depth - o.z()) / d.z();
      if (z > 0.0) {
        const Eigen::Vector3d hit = o + z * d;
        if (hit.x() >= s.boundary_north) best = std::min(best, z);
      }
    }
    // Vertical wall joining the two floors.
    if (d.x() != 0.0) {
      const double z = (s.boundary_north - o.x()) / d.x();
      if (z > 0.0) {
        const double depth = o.z() + z * d.z();
        if (depth >= s.shallow_depth && depth <= s.deep_depth) best = std::min(best, z);
      }
    }
    if (!std::isfinite(best)) raise(Errc::RayMiss, "ray misses both floors and the wall");
    const Eigen::Vector3d hit = o + best * d;
    if (!in_extent(hit.x(), hit.y())) raise(Errc::RayMiss, "ray leaves the terrain extent");
    return best;
  }

  // Irregular surface: march until the ray passes below it, then bisect.
  // The step bound assumes surface slopes stay moderate relative to 0.02 m.
  const double step = 0.02;
  double lo = 0.0;
  const double f_lo = o.z() - depth_at(o.x(), o.y());
  if (f_lo >= 0.0) raise(Errc::RayMiss, "camera starts below the terrain");
  for (double z = step;; z += step) {
    const Eigen::Vector3d p = o + z * d;
    if (!in_extent(p.x(), p.y())) raise(Errc::RayMiss, "ray leaves the terrain extent");
    const double f = p.z() - depth_at(p.x(), p.y());
    if (f >= 0.0) {
      double hi = z;
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        const Eigen::Vector3d q = o + mid * d;
        if (q.z() - depth_at(q.x(), q.y()) >= 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    lo = z;
    if (z > 4.0 * extent_ + 100.0) raise(Errc::RayMiss, "no terrain hit within range");
  }
}

namespace {

std::string view_name(const std::string& visit_id, int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", index);
  return visit_id + "_" + buf;
}

}  // namespace

SyntheticScene generate_scene(const Terrain& terrain, std::span<const SurveyPlan> plans,
                              const SceneConfig& config) {
  config.intrinsics.validate();
  SyntheticScene scene;

  const Intrinsics& intr = config.intrinsics;
  const std::array<Eigen::Vector2d, 4> corners = corner_pixels(intr);

  std::vector<size_t> visit_begin;  // index of each plan's first view
  for (const SurveyPlan& plan : plans) {
    visit_begin.push_back(scene.views.size());
    Rng rng(plan.seed);
    const Eigen::Matrix3d vehicle_in_ned = yaw_rotation(plan.heading_rad);
    int index = 0;
    for (int line = 0; line < plan.lines; ++line) {
      for (int k = 0; k < plan.views_per_line; ++k, ++index) {
        Eigen::Vector3d offset(plan.start_north + k * plan.along_spacing,
                               plan.start_east + line * plan.line_spacing, 0.0);
        if (plan.jitter > 0.0) {
          offset.x() += rng.uniform(-plan.jitter, plan.jitter);
          offset.y() += rng.uniform(-plan.jitter, plan.jitter);
        }
        const Eigen::Vector2d ne = (vehicle_in_ned * offset).head<2>();
        const double floor_depth = terrain.depth_at(ne.x(), ne.y());
        const double cam_depth = plan.altitude_mode == SurveyPlan::AltitudeMode::ConstantDepth
                                     ? plan.altitude_value
                                     : floor_depth - plan.altitude_value;
        if (cam_depth >= floor_depth) {
          raise(Errc::InvalidArgument, "camera at or below the seafloor");
        }
        const Eigen::Vector3d position(ne.x(), ne.y(), cam_depth);

        CameraView view;
        view.view_id = view_name(plan.visit_id, index);
        view.visit_id = plan.visit_id;
        view.camera_id = config.camera_id;
        view.t_unix = plan.start_time + static_cast<double>(index);
        view.altitude = floor_depth - cam_depth;
        // T(local -> vehicle): vehicle attitude is yaw only (nadir camera).
        view.pose_local.rotation = vehicle_in_ned.transpose();
        view.pose_local.translation = -(vehicle_in_ned.transpose() * position);
        scene.views.push_back(view);

        const RigidTransform camera_to_local =
            (config.vehicle_to_camera * view.pose_local).inverse();
        scene.centers.push_back(camera_to_local.translation);

        Footprint3D fp;
        fp.view_id = view.view_id;
        for (int c = 0; c < 4; ++c) {
          const Eigen::Vector3d dir((corners[c].x() - intr.cx) / intr.fx,
                                    (corners[c].y() - intr.cy) / intr.fy, 1.0);
          const double z = terrain.raycast(camera_to_local, dir);
          fp.vertices[c] = local_to_global(config.frame, camera_to_local * (z * dir));
        }
        scene.analytic_footprints.push_back(fp);

        if (config.generate_range_maps) {
          RangeMap map(intr.width, intr.height);
          for (int y = 0; y < intr.height; ++y) {
            for (int x = 0; x < intr.width; ++x) {
              const Eigen::Vector3d dir((x + 0.5 - intr.cx) / intr.fx,
                                        (y + 0.5 - intr.cy) / intr.fy, 1.0);
              map.set(x, y, static_cast<float>(terrain.raycast(camera_to_local, dir)));
            }
          }
          scene.range_maps.push_back(std::move(map));
        }
      }
    }
  }

  if (plans.size() == 2) {
    scene.analytic_links.pair = {plans[1].visit_id, plans[0].visit_id};
    const auto flat_of = [&](size_t i) { return flatten(scene.analytic_footprints[i], config.frame); };
    for (size_t q = visit_begin[1]; q < scene.views.size(); ++q) {
      const Footprint2D qf = flat_of(q);
      for (size_t d = visit_begin[0]; d < visit_begin[1]; ++d) {
        const Footprint2D df = flat_of(d);
        const double overlap = iou(qf, df);
        if (overlap > config.tau_f) {
          scene.analytic_links.links.push_back(
              {scene.views[q].view_id, scene.views[d].view_id, overlap,
               (scene.centers[q] - scene.centers[d]).norm()});
        }
      }
    }
    std::sort(scene.analytic_links.links.begin(), scene.analytic_links.links.end(),
              [](const Link& l, const Link& r) {
                if (l.query_view_id != r.query_view_id) return l.query_view_id < r.query_view_id;
                return l.db_view_id < r.db_view_id;
              });
  }
  return scene;
}

std::pair<DescriptorSet, DescriptorSet> plant_descriptors(
    std::span<const std::string> query_ids, std::span<const std::string> db_ids,
    std::span<const PlantedRetrieval> plans, int dim, uint64_t seed) {
  const size_t n_db = db_ids.size();
  if (n_db == 0) raise(Errc::EmptyDatabase, "no database views to plant");
  if (dim < 2 || static_cast<size_t>(dim) < n_db) {
    raise(Errc::InvalidArgument, "exact rank planting needs dim >= database size (and >= 2)");
  }

  // Database descriptors sit on a scaled orthonormal basis, so all pairwise
  // distances are equal and a query's candidate order is dictated purely by
  // its coordinate on each basis axis.
  constexpr float kAnchor = 8.0f;
  constexpr double kGap = 0.25;

  std::map<std::string, size_t> db_index;
  for (size_t j = 0; j < n_db; ++j) {
    if (!db_index.emplace(db_ids[j], j).second) {
      raise(Errc::InvalidArgument, "duplicate database view id");
    }
  }
  std::map<std::string, const PlantedRetrieval*> plan_of;
  for (const auto& p : plans) plan_of[p.query_view_id] = &p;

  std::vector<float> db_data(n_db * static_cast<size_t>(dim), 0.0f);
  for (size_t j = 0; j < n_db; ++j) db_data[j * dim + j] = kAnchor;

  Rng rng(mix_seed(seed, 0x9d));
  std::vector<float> q_data(query_ids.size() * static_cast<size_t>(dim), 0.0f);
  for (size_t qi = 0; qi < query_ids.size(); ++qi) {
    // Full best-first order: the planted prefix, then the leftovers shuffled.
    std::vector<size_t> order;
    std::vector<bool> used(n_db, false);
    if (const auto it = plan_of.find(query_ids[qi]); it != plan_of.end()) {
      for (const std::string& id : it->second->ranking) {
        const auto found = db_index.find(id);
        if (found == db_index.end()) {
          raise(Errc::InvalidArgument, "planted ranking names unknown db view " + id);
        }
        if (used[found->second]) {
          raise(Errc::InvalidArgument, "planted ranking repeats db view " + id);
        }
        used[found->second] = true;
        order.push_back(found->second);
      }
    }
    std::vector<size_t> rest;
    for (size_t j = 0; j < n_db; ++j) {
      if (!used[j]) rest.push_back(j);
    }
    rng.shuffle(rest);
    order.insert(order.end(), rest.begin(), rest.end());

    for (size_t pos = 0; pos < order.size(); ++pos) {
      q_data[qi * dim + order[pos]] = static_cast<float>(kGap * static_cast<double>(n_db - pos));
    }
  }

  return {DescriptorSet(std::vector<std::string>(query_ids.begin(), query_ids.end()), dim,
                        std::move(q_data)),
          DescriptorSet(std::vector<std::string>(db_ids.begin(), db_ids.end()), dim,
                        std::move(db_data))};
}

std::pair<DescriptorSet, DescriptorSet> generate_descriptors(
    std::span<const std::string> query_ids, std::span<const std::string> db_ids,
    const LinkSet& links, const HitRateModel& model, int dim, uint64_t seed) {
  if (model.rank < 1) raise(Errc::InvalidArgument, "planted rank must be at least 1");
  if (model.hit_fraction < 0.0 || model.hit_fraction > 1.0) {
    raise(Errc::InvalidArgument, "hit fraction must be in [0, 1]");
  }

  std::map<std::string, std::set<std::string>> linked;
  for (const auto& l : links.links) linked[l.query_view_id].insert(l.db_view_id);

  std::vector<std::string> valid;
  for (const auto& id : query_ids) {
    if (linked.contains(id)) valid.push_back(id);
  }
  Rng rng(mix_seed(seed, 0x51));
  std::vector<std::string> shuffled = valid;
  rng.shuffle(shuffled);
  const size_t n_hit = static_cast<size_t>(
      std::llround(model.hit_fraction * static_cast<double>(valid.size())));
  std::set<std::string> hit_queries(shuffled.begin(),
                                    shuffled.begin() + static_cast<long>(n_hit));

  std::vector<PlantedRetrieval> plans;
  for (const auto& qid : query_ids) {
    const auto it = linked.find(qid);
    if (it == linked.end()) continue;  // invalid query; any descriptor placement works
    const std::set<std::string>& targets = it->second;

    std::vector<std::string> unlinked;
    for (const auto& did : db_ids) {
      if (!targets.contains(did)) unlinked.push_back(did);
    }

    PlantedRetrieval plan;
    plan.query_view_id = qid;
    if (hit_queries.contains(qid)) {
      if (unlinked.size() < static_cast<size_t>(model.rank - 1)) {
        raise(Errc::InvalidArgument, "not enough unlinked database views for planted rank");
      }
      plan.ranking.assign(unlinked.begin(), unlinked.begin() + (model.rank - 1));
      plan.ranking.push_back(*targets.begin());
    } else {
      plan.ranking = std::move(unlinked);  // every unlinked view outranks the links
    }
    plans.push_back(std::move(plan));
  }

  return plant_descriptors(query_ids, db_ids, plans, dim, seed);
}

std::vector<PlantedRetrieval> proximity_rankings(std::span<const std::string> query_ids,
                                                 std::span<const Eigen::Vector3d> query_centers,
                                                 std::span<const std::string> db_ids,
                                                 std::span<const Eigen::Vector3d> db_centers) {
  if (query_ids.size() != query_centers.size() || db_ids.size() != db_centers.size()) {
    raise(Errc::DimensionMismatch, "ids and centers differ in length");
  }
  std::vector<PlantedRetrieval> plans;
  plans.reserve(query_ids.size());
  for (size_t q = 0; q < query_ids.size(); ++q) {
    std::vector<std::pair<double, std::string>> scored;
    scored.reserve(db_ids.size());
    for (size_t d = 0; d < db_ids.size(); ++d) {
      scored.emplace_back((query_centers[q] - db_centers[d]).norm(), db_ids[d]);
    }
    std::sort(scored.begin(), scored.end());
    PlantedRetrieval plan;
    plan.query_view_id = query_ids[q];
    for (auto& [dist, id] : scored) plan.ranking.push_back(std::move(id));
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace fathom
