#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "vidtone/core.hpp"

namespace vidtone::roi {

// Population mean / stddev per channel of the pixels inside a box.
struct RoiStats {
  std::array<double, 3> mean{};
  std::array<double, 3> stddev{};
  std::uint64_t pixel_count = 0;
  std::string label;

  double mean_of(Channel c) const { return mean[index(c)]; }
  double sigma_of(Channel c) const { return stddev[index(c)]; }

  // Rec.601-weighted mean, used to order ROIs.
  double luminance_mean() const { return 0.299 * mean[0] + 0.587 * mean[1] + 0.114 * mean[2]; }
};

struct ChannelSeparability {
  double n_a = 0.0;
  double n_b = 0.0;
  double overlap = 0.0;
};

struct SeparabilityReport {
  std::array<ChannelSeparability, 3> channel{};
  const ChannelSeparability& operator[](Channel c) const { return channel[index(c)]; }
};

// Stand-in for an unbounded ratio when a zero-spread ROI overlaps the other.
inline constexpr double kSeparabilitySentinel = 1e9;

inline RoiStats roi_stats(const Frame& frame, const RoiBox& box) {
  frame.require_contains(box);
  RoiStats s;
  s.label = box.label;
  s.pixel_count = static_cast<std::uint64_t>(box.w) * box.h;
  const double n = static_cast<double>(s.pixel_count);
  for (Channel c : kChannels) {
    std::uint64_t total = 0;
    for (int y = box.y0; y < box.y0 + box.h; ++y)
      for (int x = box.x0; x < box.x0 + box.w; ++x) total += frame.at(x, y, c);
    const double mean = static_cast<double>(total) / n;
    double ss = 0.0;
    for (int y = box.y0; y < box.y0 + box.h; ++y)
      for (int x = box.x0; x < box.x0 + box.w; ++x) {
        const double d = frame.at(x, y, c) - mean;
        ss += d * d;
      }
    s.mean[index(c)] = mean;
    s.stddev[index(c)] = std::sqrt(ss / n);
  }
  return s;
}

inline double interval_overlap(double lo_a, double hi_a, double lo_b, double hi_b) {
  return std::max(0.0, std::min(hi_a, hi_b) - std::max(lo_a, lo_b));
}

inline SeparabilityReport separability(const RoiStats& a, const RoiStats& b, double alpha) {
  SeparabilityReport r;
  for (Channel c : kChannels) {
    const double ma = a.mean_of(c), sa = a.sigma_of(c);
    const double mb = b.mean_of(c), sb = b.sigma_of(c);
    const double overlap =
        interval_overlap(ma - alpha * sa, ma + alpha * sa, mb - alpha * sb, mb + alpha * sb);
    auto ratio = [overlap](double sigma) {
      if (sigma > 0.0) return overlap / sigma;
      return overlap > 0.0 ? kSeparabilitySentinel : 0.0;
    };
    r.channel[index(c)] = {ratio(sa), ratio(sb), overlap};
  }
  return r;
}

// Exact moments of the union of two disjoint pixel sets.
inline RoiStats pool_stats(const RoiStats& a, const RoiStats& b) {
  if (a.pixel_count == 0 || b.pixel_count == 0)
    throw Error(ErrorKind::input, "cannot pool ROI statistics with zero pixels");
  RoiStats p;
  p.pixel_count = a.pixel_count + b.pixel_count;
  p.label = a.label + "+" + b.label;
  const double na = static_cast<double>(a.pixel_count);
  const double nb = static_cast<double>(b.pixel_count);
  const double n = na + nb;
  for (int c = 0; c < 3; ++c) {
    const double m = (na * a.mean[c] + nb * b.mean[c]) / n;
    const double da = a.mean[c] - m, db = b.mean[c] - m;
    const double var =
        (na * (a.stddev[c] * a.stddev[c] + da * da) + nb * (b.stddev[c] * b.stddev[c] + db * db)) / n;
    p.mean[c] = m;
    p.stddev[c] = std::sqrt(std::max(0.0, var));
  }
  return p;
}

// Total order used before iterative fusion: luminance mean first, then the
// remaining fields so that equal-luminance ROIs still sort deterministically.
inline bool fusion_order_less(const RoiStats& a, const RoiStats& b) {
  const double la = a.luminance_mean(), lb = b.luminance_mean();
  return std::tie(la, a.mean, a.stddev, a.pixel_count, a.label) <
         std::tie(lb, b.mean, b.stddev, b.pixel_count, b.label);
}

}  // namespace vidtone::roi
