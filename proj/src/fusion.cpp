#include "fathom/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "fathom/errors.hpp"
#include "fathom/rng.hpp"

namespace fathom {

void FusionParams::validate() const {
  if (!(min_range > 0.0) || !(max_range > min_range)) {
    raise(Errc::InvalidArgument, "valid range must satisfy 0 < min < max");
  }
  if (!(sample_fraction > 0.0) || sample_fraction > 1.0) {
    raise(Errc::InvalidArgument, "sample fraction must be in (0, 1]");
  }
  if (!(huber_delta > 0.0)) {
    raise(Errc::InvalidArgument, "huber delta must be positive");
  }
  if (min_samples < 2) {
    raise(Errc::InvalidArgument, "min_samples must be at least 2");
  }
}

RangeMap mask_ranges(const RangeMap& map, const FusionParams& params) {
  params.validate();
  RangeMap out = map;
  for (float& v : out.values) {
    if (std::isfinite(v) && (v < params.min_range || v > params.max_range)) {
      v = RangeMap::invalid_value();
    }
  }
  return out;
}

std::vector<uint8_t> validity_mask(const RangeMap& map) {
  std::vector<uint8_t> mask(map.cell_count());
  for (size_t i = 0; i < map.cell_count(); ++i) {
    mask[i] = std::isfinite(map.values[i]) ? 1 : 0;
  }
  return mask;
}

RangeMap apply_validity_mask(const RangeMap& map, const std::vector<uint8_t>& mask) {
  if (mask.size() != map.cell_count()) {
    raise(Errc::DimensionMismatch, "mask size does not match range map");
  }
  RangeMap out = map;
  for (size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) out.values[i] = RangeMap::invalid_value();
  }
  return out;
}

namespace {

struct WeightedFit {
  double a = 0.0;
  double b = 0.0;
};

// Weighted least squares of y ~ a*x + b in centered form.
WeightedFit solve_weighted(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<double>& w) {
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double xm = swx / sw;
  const double ym = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - xm;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * (y[i] - ym);
  }
  WeightedFit fit;
  fit.a = sxy / sxx;
  fit.b = ym - fit.a * xm;
  return fit;
}

}  // namespace

ScaleOffset fit_scale_offset(const RangeMap& stereo, const RangeMap& relative,
                             const FusionParams& params) {
  params.validate();
  if (!stereo.same_shape(relative)) {
    raise(Errc::DimensionMismatch, "stereo and relative maps differ in shape");
  }

  // Range-mask the stereo map, then intersect validity with the relative map.
  const RangeMap masked = mask_ranges(stereo, params);
  std::vector<size_t> joint;
  joint.reserve(masked.cell_count());
  for (size_t i = 0; i < masked.cell_count(); ++i) {
    if (std::isfinite(masked.values[i]) && std::isfinite(relative.values[i])) {
      joint.push_back(i);
    }
  }

  const size_t want = static_cast<size_t>(
      std::floor(params.sample_fraction * static_cast<double>(joint.size())));
  if (want < params.min_samples) {
    raise(Errc::TooFewSamples, "sampled pair count below min_samples");
  }

  Rng rng(params.seed);
  const std::vector<size_t> picks = rng.sample_indices(joint.size(), want);

  std::vector<double> x(want), y(want);
  for (size_t i = 0; i < want; ++i) {
    const size_t cell = joint[picks[i]];
    x[i] = relative.values[cell];
    y[i] = masked.values[cell];
  }

  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  if (*xmax - *xmin < 1e-12) {
    raise(Errc::DegenerateRelativeMap, "sampled relative ranges have zero variance");
  }

  // IRLS with Huber weights w = min(1, delta/|r|).
  std::vector<double> w(want, 1.0);
  WeightedFit fit = solve_weighted(x, y, w);
  for (int iter = 0; iter < 50; ++iter) {
    for (size_t i = 0; i < want; ++i) {
      const double r = std::abs(fit.a * x[i] + fit.b - y[i]);
      w[i] = (r <= params.huber_delta) ? 1.0 : params.huber_delta / r;
    }
    const WeightedFit next = solve_weighted(x, y, w);
    const double step = std::abs(next.a - fit.a) + std::abs(next.b - fit.b);
    fit = next;
    if (step < 1e-10) break;
  }

  ScaleOffset so;
  so.a = fit.a;
  so.b = fit.b;
  so.sample_count = want;
  double sq = 0.0;
  size_t inliers = 0;
  for (size_t i = 0; i < want; ++i) {
    const double r = fit.a * x[i] + fit.b - y[i];
    if (std::abs(r) <= params.huber_delta) {
      sq += r * r;
      ++inliers;
    }
  }
  if (inliers == 0) {  // pathological; report over all samples instead
    for (size_t i = 0; i < want; ++i) {
      const double r = fit.a * x[i] + fit.b - y[i];
      sq += r * r;
    }
    inliers = want;
  }
  so.inlier_rmse = std::sqrt(sq / static_cast<double>(inliers));
  return so;
}

RangeMap apply_scale_offset(const RangeMap& relative, const ScaleOffset& so) {
  RangeMap out = relative;
  for (float& v : out.values) {
    if (!std::isfinite(v)) continue;
    const double fused = so.a * static_cast<double>(v) + so.b;
    v = (fused > 0.0) ? static_cast<float>(fused) : RangeMap::invalid_value();
  }
  return out;
}

}  // namespace fathom
