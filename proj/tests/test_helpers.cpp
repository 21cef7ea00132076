#include "test_helpers.hpp"

#include <algorithm>

namespace fathom::test {

namespace {

// Edges preprocessed for a division-free even-odd crossing test; valid for
// any simple polygon, convex or not. Boundary behavior is measure-zero for
// the Monte-Carlo estimate.
struct Edges {
  // Each edge stored with y0 < y1 (horizontal edges dropped; they never
  // produce a crossing with the half-open rule).
  double x0[4], y0[4], dx[4], dy[4];
  int count = 0;

  explicit Edges(const QuadRing& q) {
    for (int i = 0, j = 3; i < 4; j = i++) {
      Eigen::Vector2d a = q[j];
      Eigen::Vector2d b = q[i];
      if (a.y() == b.y()) continue;
      if (a.y() > b.y()) std::swap(a, b);
      x0[count] = a.x();
      y0[count] = a.y();
      dx[count] = b.x() - a.x();
      dy[count] = b.y() - a.y();
      ++count;
    }
  }

  bool inside(double x, double y) const {
    bool in = false;
    for (int i = 0; i < count; ++i) {
      const double ry = y - y0[i];
      if (ry >= 0.0 && ry < dy[i] && (x - x0[i]) * dy[i] < ry * dx[i]) in = !in;
    }
    return in;
  }
};

}  // namespace

double mc_intersection_area(const QuadRing& a, const QuadRing& b, size_t samples, uint64_t seed) {
  double min_x = a[0].x(), max_x = a[0].x(), min_y = a[0].y(), max_y = a[0].y();
  for (const auto& v : a) {
    min_x = std::min(min_x, v.x());
    max_x = std::max(max_x, v.x());
    min_y = std::min(min_y, v.y());
    max_y = std::max(max_y, v.y());
  }
  double bmin_x = b[0].x(), bmax_x = b[0].x(), bmin_y = b[0].y(), bmax_y = b[0].y();
  for (const auto& v : b) {
    bmin_x = std::min(bmin_x, v.x());
    bmax_x = std::max(bmax_x, v.x());
    bmin_y = std::min(bmin_y, v.y());
    bmax_y = std::max(bmax_y, v.y());
  }
  const double lo_x = std::max(min_x, bmin_x);
  const double hi_x = std::min(max_x, bmax_x);
  const double lo_y = std::max(min_y, bmin_y);
  const double hi_y = std::min(max_y, bmax_y);
  if (lo_x >= hi_x || lo_y >= hi_y) return 0.0;

  // splitmix64 keeps the 2e9-draw acceptance run inside its time budget;
  // Rng (mt19937_64) is unnecessarily heavy for area integration.
  uint64_t state = seed * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
  const auto next_unit = [&state]() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
  };

  const Edges edges_a(a);
  const Edges edges_b(b);
  size_t hits = 0;
  for (size_t i = 0; i < samples; ++i) {
    const double x = lo_x + (hi_x - lo_x) * next_unit();
    const double y = lo_y + (hi_y - lo_y) * next_unit();
    if (edges_a.inside(x, y) && edges_b.inside(x, y)) ++hits;
  }
  const double box_area = (hi_x - lo_x) * (hi_y - lo_y);
  return box_area * static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace fathom::test
