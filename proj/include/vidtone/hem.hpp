#pragma once

// Histogram-equalization modification: the input histogram is pulled toward
// uniform (and optionally toward the previous frame's target) before the
// tone curve is read off the cumulative distribution.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "vidtone/core.hpp"

namespace vidtone::hem {

struct HemTarget {
  Histogram h;
  double lambda = 0.0;
  double gamma = 0.0;
};

namespace detail {

inline void require_weight(double w, const char* name) {
  if (!(w >= 0.0) || !std::isfinite(w))
    throw Error(ErrorKind::input, std::string(name) + " must be a finite value >= 0");
}

}  // namespace detail

// Minimizer of |h-e|^2 + lambda|h-u|^2 + gamma|h-h_prev|^2, which is the
// weighted mean of the three anchors.
inline HemTarget temporal_modified_histogram(const Histogram& e, const Histogram& h_prev,
                                             double lambda, double gamma) {
  require_normalized(e, "input");
  require_normalized(h_prev, "previous target");
  detail::require_weight(lambda, "lambda");
  detail::require_weight(gamma, "gamma");

  const double denom = 1.0 + lambda + gamma;
  const double we = 1.0 / denom;
  const double wu = (lambda / denom) / kLevels;
  const double wp = gamma / denom;
  HemTarget t{{}, lambda, gamma};
  for (int k = 0; k < kLevels; ++k) t.h.bins[k] = we * e.bins[k] + wu + wp * h_prev.bins[k];
  t.h.normalized = true;
  return t;
}

inline HemTarget modified_histogram(const Histogram& e, double lambda) {
  // With gamma = 0 the previous-frame term contributes an exact +0.0.
  return temporal_modified_histogram(e, Histogram::uniform(), lambda, 0.0);
}

inline ToneCurve tone_curve_from_histogram(const Histogram& h, Channel channel = Channel::R) {
  require_normalized(h, "target");
  ToneCurve curve;
  curve.channel = channel;
  double cdf = 0.0;
  for (int x = 0; x < kLevels; ++x) {
    cdf += h.bins[x];
    curve.lut[x] = std::min(kMaxLevel, kMaxLevel * cdf);
  }
  return curve;
}

// Per-channel HEM curves for one frame. Same curve as
// tone_curve_from_histogram(modified_histogram(e, lambda)), evaluated from
// integer cumulative counts so lambda = 0 reproduces classic equalization
// exactly for any frame size.
inline CurveSet hem_curves(const Frame& frame, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::input, "lambda must be finite and >= 0");
  const double n = static_cast<double>(frame.pixel_count());
  CurveSet curves;
  for (Channel c : kChannels) {
    std::array<std::uint64_t, kLevels> counts{};
    for (int y = 0; y < frame.height(); ++y)
      for (int x = 0; x < frame.width(); ++x) ++counts[frame.at(x, y, c)];
    ToneCurve& curve = curves[index(c)];
    curve.channel = c;
    std::uint64_t cum = 0;
    for (int x = 0; x < kLevels; ++x) {
      cum += counts[x];
      const double mass = static_cast<double>(cum) + lambda * n * (x + 1) / kLevels;
      curve.lut[x] = std::min(kMaxLevel, kMaxLevel * mass / (n * (1.0 + lambda)));
    }
  }
  return curves;
}

}  // namespace vidtone::hem
