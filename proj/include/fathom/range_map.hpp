#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace fathom {

// Dense per-pixel range grid, meters along the optical axis, row-major.
// Invalid cells are NaN; valid cells are finite and positive.
struct RangeMap {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  RangeMap() = default;
  RangeMap(int w, int h, float fill = invalid_value());

  static constexpr float invalid_value() { return std::numeric_limits<float>::quiet_NaN(); }

  size_t index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
  float at(int x, int y) const { return values[index(x, y)]; }
  void set(int x, int y, float v) { values[index(x, y)] = v; }
  bool is_valid(int x, int y) const { return std::isfinite(at(x, y)); }
  size_t cell_count() const { return values.size(); }
  size_t valid_count() const;

  bool same_shape(const RangeMap& other) const {
    return width == other.width && height == other.height;
  }

  // Checks the value invariant (finite cells strictly positive).
  void validate() const;
};

}  // namespace fathom
