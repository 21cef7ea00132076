#include "fathom/polygon.hpp"

#include <algorithm>
#include <cmath>

namespace fathom {

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Proper (interior-crossing) segment intersection test.
bool segments_cross(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                    const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
  const double d1 = cross2(q1, q2, p1);
  const double d2 = cross2(q1, q2, p2);
  const double d3 = cross2(p1, p2, q1);
  const double d4 = cross2(p1, p2, q2);
  return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
         ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

bool lexicographic_less(const QuadRing& a, const QuadRing& b) {
  for (int i = 0; i < 4; ++i) {
    if (a[i].x() != b[i].x()) return a[i].x() < b[i].x();
    if (a[i].y() != b[i].y()) return a[i].y() < b[i].y();
  }
  return false;
}

}  // namespace

double signed_area(std::span<const Eigen::Vector2d> ring) {
  const size_t n = ring.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const auto& p = ring[i];
    const auto& q = ring[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

bool quad_is_simple(const QuadRing& q) {
  if (segments_cross(q[0], q[1], q[2], q[3])) return false;
  if (segments_cross(q[1], q[2], q[3], q[0])) return false;
  return true;
}

Ring clip_convex(std::span<const Eigen::Vector2d> subject,
                 std::span<const Eigen::Vector2d> clip) {
  Ring output(subject.begin(), subject.end());
  const size_t m = clip.size();
  for (size_t i = 0; i < m && !output.empty(); ++i) {
    const Eigen::Vector2d& a = clip[i];
    const Eigen::Vector2d& b = clip[(i + 1) % m];
    Ring input;
    input.swap(output);
    const size_t n = input.size();
    for (size_t j = 0; j < n; ++j) {
      const Eigen::Vector2d& cur = input[j];
      const Eigen::Vector2d& nxt = input[(j + 1) % n];
      const double side_cur = cross2(a, b, cur);
      const double side_nxt = cross2(a, b, nxt);
      const bool in_cur = side_cur >= 0.0;  // points on the edge are kept
      const bool in_nxt = side_nxt >= 0.0;
      if (in_cur) output.push_back(cur);
      if (in_cur != in_nxt) {
        const double t = side_cur / (side_cur - side_nxt);
        output.push_back(cur + t * (nxt - cur));
      }
    }
  }
  return output;
}

bool triangulate_quad(const QuadRing& quad,
                      std::array<std::array<Eigen::Vector2d, 3>, 2>& out) {
  for (int apex = 0; apex < 4; ++apex) {
    const Eigen::Vector2d& v0 = quad[apex];
    const Eigen::Vector2d& v1 = quad[(apex + 1) % 4];
    const Eigen::Vector2d& v2 = quad[(apex + 2) % 4];
    const Eigen::Vector2d& v3 = quad[(apex + 3) % 4];
    if (cross2(v0, v1, v2) >= 0.0 && cross2(v0, v2, v3) >= 0.0) {
      out[0] = {v0, v1, v2};
      out[1] = {v0, v2, v3};
      return true;
    }
  }
  return false;
}

double quad_intersection_area(const QuadRing& a, const QuadRing& b) {
  // Canonical argument order makes the result bit-identical under swap.
  if (lexicographic_less(b, a)) return quad_intersection_area(b, a);

  std::array<std::array<Eigen::Vector2d, 3>, 2> tris_a;
  std::array<std::array<Eigen::Vector2d, 3>, 2> tris_b;
  if (!triangulate_quad(a, tris_a) || !triangulate_quad(b, tris_b)) return 0.0;

  double total = 0.0;
  for (const auto& ta : tris_a) {
    for (const auto& tb : tris_b) {
      const Ring piece = clip_convex(ta, tb);
      if (piece.size() >= 3) {
        const double area = signed_area(piece);
        if (area > 0.0) total += area;
      }
    }
  }
  return total;
}

}  // namespace fathom
