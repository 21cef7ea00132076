#include "fathom/range_map.hpp"

#include "fathom/errors.hpp"

namespace fathom {

RangeMap::RangeMap(int w, int h, float fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) raise(Errc::InvalidArgument, "range map dimensions must be positive");
  values.assign(static_cast<size_t>(w) * static_cast<size_t>(h), fill);
}

size_t RangeMap::valid_count() const {
  size_t n = 0;
  for (float v : values) {
    if (std::isfinite(v)) ++n;
  }
  return n;
}

void RangeMap::validate() const {
  if (values.size() != static_cast<size_t>(width) * static_cast<size_t>(height)) {
    raise(Errc::InvalidArgument, "range map buffer does not match dimensions");
  }
  for (float v : values) {
    if (std::isfinite(v) && !(v > 0.0f)) {
      raise(Errc::InvalidArgument, "valid range cells must be positive");
    }
  }
}

}  // namespace fathom
