#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fathom {

// Percentile by linear interpolation between order statistics (inclusive):
// rank = p/100 * (n-1), interpolated between the bracketing sorted values.
// `sorted` must be ascending and non-empty; p in [0, 100].
double percentile_sorted(std::span<const double> sorted, double p);

// Convenience over unsorted data (copies and sorts).
double percentile(std::span<const double> values, double p);

struct Histogram {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<size_t> counts;  // equal-width bins over [lower, upper]
};

Histogram make_histogram(std::span<const double> values, size_t bins);

}  // namespace fathom
