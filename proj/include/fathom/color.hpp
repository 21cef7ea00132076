#pragma once

#include <span>
#include <vector>

namespace fathom {

// Channel-interleaved row-major image, intensities normalized to [0, 1].
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int w, int h, int c, float fill = 0.0f);

  size_t index(int x, int y, int c) const {
    return (static_cast<size_t>(y) * width + x) * channels + c;
  }
  float at(int x, int y, int c) const { return data[index(x, y, c)]; }
  void set(int x, int y, int c, float v) { data[index(x, y, c)] = v; }
  size_t cell_count() const { return data.size(); }

  bool same_shape(const Image& other) const {
    return width == other.width && height == other.height && channels == other.channels;
  }
};

// Per-cell mean and population standard deviation over an image set.
struct PixelStats {
  int width = 0;
  int height = 0;
  int channels = 0;
  size_t image_count = 0;
  std::vector<double> mean;
  std::vector<double> stddev;
};

// Streaming per-cell mean/variance (Welford). Partial accumulators built in
// parallel can be merged associatively.
class StatsAccumulator {
 public:
  void add(const Image& image);
  void merge(const StatsAccumulator& other);
  size_t image_count() const { return count_; }

  // Throws EmptyStream when no image was added.
  PixelStats finalize() const;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

PixelStats accumulate_stats(std::span<const Image> images);

struct CorrectionTargets {
  double mean = 0.35;
  double stddev = 0.12;
  bool clip = true;  // clamp corrected intensities to [0, 1]
};

// Per-cell affine map out = target_mean + (in - mean) * target_std / std,
// with a floor on std for constant cells.
Image correct_image(const Image& image, const PixelStats& stats, const CorrectionTargets& targets);

}  // namespace fathom
