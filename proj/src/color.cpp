#include "fathom/color.hpp"

#include <algorithm>
#include <cmath>

#include "fathom/errors.hpp"

namespace fathom {

namespace {
constexpr double kStdFloor = 1e-6;  // constant cells map to the target mean
}

Image::Image(int w, int h, int c, float fill) : width(w), height(h), channels(c) {
  if (w <= 0 || h <= 0 || c <= 0) {
    raise(Errc::InvalidArgument, "image dimensions must be positive");
  }
  data.assign(static_cast<size_t>(w) * h * c, fill);
}

void StatsAccumulator::add(const Image& image) {
  if (count_ == 0 && mean_.empty()) {
    width_ = image.width;
    height_ = image.height;
    channels_ = image.channels;
    mean_.assign(image.cell_count(), 0.0);
    m2_.assign(image.cell_count(), 0.0);
  }
  if (image.width != width_ || image.height != height_ || image.channels != channels_) {
    raise(Errc::DimensionMismatch, "image shape does not match accumulated stats");
  }
  ++count_;
  const double inv_n = 1.0 / static_cast<double>(count_);
  for (size_t i = 0; i < mean_.size(); ++i) {
    const double x = image.data[i];
    const double delta = x - mean_[i];
    mean_[i] += delta * inv_n;
    m2_[i] += delta * (x - mean_[i]);
  }
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  if (other.width_ != width_ || other.height_ != height_ || other.channels_ != channels_) {
    raise(Errc::DimensionMismatch, "accumulators cover different image shapes");
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  for (size_t i = 0; i < mean_.size(); ++i) {
    const double delta = other.mean_[i] - mean_[i];
    mean_[i] += delta * (nb / n);
    m2_[i] += other.m2_[i] + delta * delta * (na * nb / n);
  }
  count_ += other.count_;
}

PixelStats StatsAccumulator::finalize() const {
  if (count_ == 0) raise(Errc::EmptyStream, "no images accumulated");
  PixelStats stats;
  stats.width = width_;
  stats.height = height_;
  stats.channels = channels_;
  stats.image_count = count_;
  stats.mean = mean_;
  stats.stddev.resize(m2_.size());
  const double inv_n = 1.0 / static_cast<double>(count_);
  for (size_t i = 0; i < m2_.size(); ++i) {
    stats.stddev[i] = std::sqrt(std::max(0.0, m2_[i] * inv_n));
  }
  return stats;
}

PixelStats accumulate_stats(std::span<const Image> images) {
  StatsAccumulator acc;
  for (const Image& image : images) acc.add(image);
  return acc.finalize();
}

Image correct_image(const Image& image, const PixelStats& stats,
                    const CorrectionTargets& targets) {
  if (image.width != stats.width || image.height != stats.height ||
      image.channels != stats.channels) {
    raise(Errc::DimensionMismatch, "image shape does not match stats");
  }
  if (!(targets.mean > 0.0) || !(targets.mean < 1.0) || !(targets.stddev > 0.0)) {
    raise(Errc::InvalidArgument, "correction targets out of range");
  }
  Image out = image;
  for (size_t i = 0; i < out.data.size(); ++i) {
    const double gain = targets.stddev / std::max(stats.stddev[i], kStdFloor);
    double v = targets.mean + (static_cast<double>(image.data[i]) - stats.mean[i]) * gain;
    if (targets.clip) v = std::clamp(v, 0.0, 1.0);
    out.data[i] = static_cast<float>(v);
  }
  return out;
}

}  // namespace fathom
