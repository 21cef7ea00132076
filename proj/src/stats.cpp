#include "fathom/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fathom/errors.hpp"

namespace fathom {

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) raise(Errc::EmptyInput, "percentile of empty set");
  if (p < 0.0 || p > 100.0) raise(Errc::InvalidArgument, "percentile outside [0, 100]");
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(rank));
  const size_t hi = static_cast<size_t>(std::ceil(rank));
  if (lo == hi) return sorted[lo];
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double percentile(std::span<const double> values, double p) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return percentile_sorted(sorted, p);
}

Histogram make_histogram(std::span<const double> values, size_t bins) {
  if (values.empty()) raise(Errc::EmptyInput, "histogram of empty set");
  if (bins == 0) raise(Errc::InvalidArgument, "histogram needs at least one bin");
  Histogram h;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  h.lower = *lo_it;
  h.upper = *hi_it;
  h.counts.assign(bins, 0);
  const double width = h.upper - h.lower;
  for (double v : values) {
    size_t bin = 0;
    if (width > 0.0) {
      bin = static_cast<size_t>((v - h.lower) / width * static_cast<double>(bins));
      if (bin >= bins) bin = bins - 1;  // top edge lands in the last bin
    }
    ++h.counts[bin];
  }
  return h;
}

}  // namespace fathom
