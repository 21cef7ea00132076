#include <doctest.h>

#include <cmath>

#include "fathom/errors.hpp"
#include "fathom/footprint.hpp"
#include "fathom/polygon.hpp"
#include "fathom/rng.hpp"
#include "test_helpers.hpp"

using namespace fathom;

namespace {

// Random convex quad: four angularly sorted points inscribed in an ellipse
// (inscribed polygons of a convex curve are convex).
QuadRing random_convex_quad(Rng& rng, double cx, double cy, double radius) {
  double angles[4];
  angles[0] = rng.uniform(0.1, M_PI / 2.0 - 0.1);
  angles[1] = rng.uniform(M_PI / 2.0 + 0.1, M_PI - 0.1);
  angles[2] = rng.uniform(M_PI + 0.1, 1.5 * M_PI - 0.1);
  angles[3] = rng.uniform(1.5 * M_PI + 0.1, 2.0 * M_PI - 0.1);
  const double ax = radius * rng.uniform(0.7, 1.3);
  const double by = radius * rng.uniform(0.7, 1.3);
  QuadRing q;
  for (int i = 0; i < 4; ++i) {
    q[i] = Eigen::Vector2d(cx + ax * std::cos(angles[i]), cy + by * std::sin(angles[i]));
  }
  return q;
}

}  // namespace

TEST_CASE("identical unit squares intersect with area exactly 1") {
  const Footprint2D a = test::unit_square("a", 0.0, 0.0);
  const Footprint2D b = test::unit_square("b", 0.0, 0.0);
  CHECK(intersection_area(a, b) == 1.0);
  CHECK(iou(a, b) == 1.0);
}

TEST_CASE("offset unit squares have the analytic overlap") {
  const Footprint2D a = test::unit_square("a", 0.0, 0.0);
  const Footprint2D b = test::unit_square("b", 0.5, 0.0);
  CHECK(intersection_area(a, b) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("disjoint footprints have zero intersection and IoU") {
  const Footprint2D a = test::unit_square("a", 0.0, 0.0);
  const Footprint2D b = test::unit_square("b", 5.0, 5.0);
  CHECK(intersection_area(a, b) == 0.0);
  CHECK(iou(a, b) == 0.0);
}

TEST_CASE("intersection matches the Monte-Carlo oracle on random convex quads") {
  Rng rng(9001);
  for (int trial = 0; trial < 25; ++trial) {
    const QuadRing qa = random_convex_quad(rng, 0.0, 0.0, 1.2);
    const QuadRing qb =
        random_convex_quad(rng, rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), 1.2);
    const Footprint2D a("a", qa);
    const Footprint2D b("b", qb);
    const double exact = intersection_area(a, b);
    const double sampled = test::mc_intersection_area(a.ring(), b.ring(), 200000, 9100 + trial);
    CHECK(exact == doctest::Approx(sampled).epsilon(0.02));
  }
}

TEST_CASE("non-convex simple quads clip correctly") {
  // Dart: reflex vertex at (0.5, 0.5).
  const QuadRing dart = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(2.0, 0.0),
                         Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(0.0, 2.0)};
  const Footprint2D a("dart", dart);
  CHECK(area(a) == doctest::Approx(std::abs(signed_area(dart))).epsilon(1e-12));

  const Footprint2D box = test::unit_square("box", 0.0, 0.0);
  const double exact = intersection_area(a, box);
  const double sampled = test::mc_intersection_area(a.ring(), box.ring(), 400000, 77);
  CHECK(exact == doctest::Approx(sampled).epsilon(0.02));
  CHECK(iou(a, a) == 1.0);
}

TEST_CASE("iou is symmetric, bounded, and translation invariant") {
  Rng rng(9002);
  for (int trial = 0; trial < 50; ++trial) {
    const Footprint2D a("a", random_convex_quad(rng, 0.0, 0.0, 1.0));
    const Footprint2D b("b", random_convex_quad(rng, rng.uniform(-1.0, 1.0),
                                                rng.uniform(-1.0, 1.0), 1.0));
    const double ab = iou(a, b);
    CHECK(ab == iou(b, a));  // bit-exact by canonical clip order
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    const double inter = intersection_area(a, b);
    CHECK(inter <= std::min(area(a), area(b)) + 1e-9);
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(b, b) == 1.0);

    const Eigen::Vector2d shift(rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0));
    QuadRing ra = a.ring(), rb = b.ring();
    for (auto& v : ra) v += shift;
    for (auto& v : rb) v += shift;
    const double moved = intersection_area(Footprint2D("a", ra), Footprint2D("b", rb));
    if (inter > 0.0) {
      CHECK(moved == doctest::Approx(inter).epsilon(1e-9));
    } else {
      CHECK(moved == 0.0);
    }
  }
}

TEST_CASE("degenerate rings are rejected") {
  // Collinear vertices.
  const QuadRing flat = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0),
                         Eigen::Vector2d(2.0, 0.0), Eigen::Vector2d(3.0, 0.0)};
  try {
    Footprint2D fp("flat", flat);
    FAIL("expected DegenerateRing");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateRing);
  }

  // Bow-tie.
  const QuadRing bowtie = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 1.0),
                           Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)};
  CHECK_FALSE(quad_is_simple(bowtie));
  CHECK_THROWS_AS(Footprint2D("bow", bowtie), Error);
}

TEST_CASE("ring orientation is normalized counter-clockwise, first vertex kept") {
  const QuadRing clockwise = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.0, 1.0),
                              Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(1.0, 0.0)};
  REQUIRE(signed_area(clockwise) < 0.0);
  const Footprint2D fp("cw", clockwise);
  CHECK(signed_area(fp.ring()) > 0.0);
  CHECK(fp.ring()[0] == Eigen::Vector2d(0.0, 0.0));
  // Normalizing an already-CCW ring changes nothing (idempotence).
  const Footprint2D again(fp.view_id(), fp.ring());
  CHECK(again.ring() == fp.ring());
}
