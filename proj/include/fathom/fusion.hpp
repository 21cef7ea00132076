#pragma once

#include <cstdint>
#include <vector>

#include "fathom/range_map.hpp"

namespace fathom {

// Parameters for fusing a scale-ambiguous relative range map with a metric
// stereo range map by robust global scale/offset regression.
struct FusionParams {
  double min_range = 0.2;        // meters; stereo values below are masked out
  double max_range = 6.0;        // meters; stereo values above are masked out
  double sample_fraction = 0.10; // fraction of jointly valid pixels sampled
  double huber_delta = 0.1;      // meters; Huber loss corner
  uint64_t seed = 0;             // drives the pixel sampling
  size_t min_samples = 10;       // minimum sampled pair count

  void validate() const;
};

struct ScaleOffset {
  double a = 1.0;           // dimensionless scale
  double b = 0.0;           // meters offset
  double inlier_rmse = 0.0; // RMS residual over samples with |r| <= huber_delta
  size_t sample_count = 0;
};

// Invalidates cells outside [min_range, max_range]; other cells unchanged.
RangeMap mask_ranges(const RangeMap& map, const FusionParams& params);

// Per-cell validity of `map` (1 = valid), for transferring a mask onto a
// companion map of the same shape.
std::vector<uint8_t> validity_mask(const RangeMap& map);

// Invalidates every cell of `map` whose mask entry is 0.
RangeMap apply_validity_mask(const RangeMap& map, const std::vector<uint8_t>& mask);

// Fits z_stereo ~ a * z_rel + b with a Huber loss via iteratively reweighted
// least squares, over a seeded random sample of the jointly valid pixels
// after range masking. Deterministic for a given seed.
ScaleOffset fit_scale_offset(const RangeMap& stereo, const RangeMap& relative,
                             const FusionParams& params);

// Applies z_fused = a * z_rel + b per pixel. Invalid stays invalid and
// non-positive results become invalid.
RangeMap apply_scale_offset(const RangeMap& relative, const ScaleOffset& so);

}  // namespace fathom
