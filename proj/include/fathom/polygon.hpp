#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fathom {

using Ring = std::vector<Eigen::Vector2d>;
using QuadRing = std::array<Eigen::Vector2d, 4>;

// Shoelace signed area; positive for counter-clockwise rings.
double signed_area(std::span<const Eigen::Vector2d> ring);

// True if no pair of non-adjacent edges properly intersects (bow-tie test).
bool quad_is_simple(const QuadRing& quad);

// Sutherland-Hodgman clip of `subject` against convex CCW `clip`.
Ring clip_convex(std::span<const Eigen::Vector2d> subject,
                 std::span<const Eigen::Vector2d> clip);

// Splits a simple CCW quad into two positively oriented triangles by fanning
// from a vertex that sees the whole quad (for a non-convex quad, its reflex
// vertex). Returns false for rings where no such apex exists.
bool triangulate_quad(const QuadRing& quad, std::array<std::array<Eigen::Vector2d, 3>, 2>& out);

// Intersection area of two simple CCW quads: pairwise convex clips of the
// fan triangles, summed. Symmetric in its arguments by canonical ordering.
double quad_intersection_area(const QuadRing& a, const QuadRing& b);

}  // namespace fathom
