#pragma once

// Objective sequence metrics, all computed on Rec.601 luminance:
//   H            mean per-frame entropy of the luminance histogram
//   TAMBE(mu)    mean |mean luma(t) - mean luma(t-1)|
//   TAMBE(sigma) mean population stddev of the signed luma difference image
//   HIBTE        mean (1 - histogram intersection) of consecutive frames

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vidtone/core.hpp"
#include "vidtone/ecb.hpp"

namespace vidtone::metrics {

struct SequenceReport {
  double H = 0.0;
  double TAMBE_mu = 0.0;
  double TAMBE_sigma = 0.0;
  double HIBTE = 0.0;
  std::size_t frame_count = 0;

  friend bool operator==(const SequenceReport&, const SequenceReport&) = default;
};

struct Tambe {
  double mu = 0.0;
  double sigma = 0.0;
};

namespace detail {

inline void require_frames(std::span<const Frame> frames, std::size_t min, const char* what) {
  if (frames.size() < min)
    throw Error(ErrorKind::input, std::string(what) + " needs at least " + std::to_string(min) +
                                      " frame(s), got " + std::to_string(frames.size()));
}

inline void require_same_size(const Frame& a, const Frame& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error(ErrorKind::input, "frame dimensions differ: " + std::to_string(a.width()) + "x" +
                                      std::to_string(a.height()) + " vs " +
                                      std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

inline double mean_of(const std::vector<std::uint8_t>& v) {
  std::uint64_t total = 0;
  for (auto x : v) total += x;
  return static_cast<double>(total) / static_cast<double>(v.size());
}

}  // namespace detail

inline double metric_H(std::span<const Frame> frames, double base = 2.0) {
  detail::require_frames(frames, 1, "H");
  double acc = 0.0;
  for (const auto& f : frames) acc += ecb::entropy(luminance_histogram(f), base);
  return acc / static_cast<double>(frames.size());
}

inline Tambe metric_TAMBE(std::span<const Frame> frames) {
  detail::require_frames(frames, 2, "TAMBE");
  Tambe t;
  std::vector<std::uint8_t> prev = luminance_plane(frames[0]);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    detail::require_same_size(frames[i - 1], frames[i]);
    std::vector<std::uint8_t> cur = luminance_plane(frames[i]);
    t.mu += std::abs(detail::mean_of(cur) - detail::mean_of(prev));

    std::int64_t sum = 0;
    for (std::size_t p = 0; p < cur.size(); ++p) sum += int(cur[p]) - int(prev[p]);
    const double mean = static_cast<double>(sum) / static_cast<double>(cur.size());
    double ss = 0.0;
    for (std::size_t p = 0; p < cur.size(); ++p) {
      const double d = (int(cur[p]) - int(prev[p])) - mean;
      ss += d * d;
    }
    t.sigma += std::sqrt(ss / static_cast<double>(cur.size()));
    prev = std::move(cur);
  }
  const double pairs = static_cast<double>(frames.size() - 1);
  t.mu /= pairs;
  t.sigma /= pairs;
  return t;
}

inline double histogram_intersection(const Histogram& a, const Histogram& b) {
  double s = 0.0;
  for (int k = 0; k < kLevels; ++k) s += std::min(a.bins[k], b.bins[k]);
  return s;
}

inline double metric_HIBTE(std::span<const Frame> frames) {
  detail::require_frames(frames, 2, "HIBTE");
  // Integer counts keep identical histograms at exactly zero error.
  auto counts = [](const Frame& f) {
    std::array<std::uint64_t, kLevels> c{};
    for (auto y : luminance_plane(f)) ++c[y];
    return c;
  };
  double acc = 0.0;
  auto prev = counts(frames[0]);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const auto cur = counts(frames[i]);
    const double n_cur = static_cast<double>(frames[i].pixel_count());
    const double n_prev = static_cast<double>(frames[i - 1].pixel_count());
    double inter = 0.0;
    std::uint64_t shared = 0;
    for (int k = 0; k < kLevels; ++k) {
      inter += std::min(cur[k] / n_cur, prev[k] / n_prev);
      shared += std::min(cur[k], prev[k]);
    }
    if (n_cur == n_prev)
      acc += static_cast<double>(frames[i].pixel_count() - shared) / n_cur;
    else
      acc += std::max(0.0, 1.0 - inter);
    prev = cur;
  }
  return acc / static_cast<double>(frames.size() - 1);
}

// Single-frame sequences report zero for the temporal metrics.
inline SequenceReport report(std::span<const Frame> frames, double base = 2.0) {
  SequenceReport r;
  r.frame_count = frames.size();
  r.H = metric_H(frames, base);
  if (frames.size() >= 2) {
    const Tambe t = metric_TAMBE(frames);
    r.TAMBE_mu = t.mu;
    r.TAMBE_sigma = t.sigma;
    r.HIBTE = metric_HIBTE(frames);
  }
  return r;
}

inline nlohmann::json to_json(const SequenceReport& r) {
  return nlohmann::json{{"H", r.H},
                        {"TAMBE_mu", r.TAMBE_mu},
                        {"TAMBE_sigma", r.TAMBE_sigma},
                        {"HIBTE", r.HIBTE},
                        {"frame_count", r.frame_count}};
}

inline std::string to_key_value(const SequenceReport& r, const std::string& prefix = "") {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  os << prefix << "H=" << r.H << '\n'
     << prefix << "TAMBE_mu=" << r.TAMBE_mu << '\n'
     << prefix << "TAMBE_sigma=" << r.TAMBE_sigma << '\n'
     << prefix << "HIBTE=" << r.HIBTE << '\n'
     << prefix << "frame_count=" << r.frame_count << '\n';
  return os.str();
}

}  // namespace vidtone::metrics
