#pragma once

// Intra-frame curve fusion. Each ROI gets a local tone curve from its
// statistics; pairs of ROIs are then merged into one global curve per
// channel, either as two spline pieces meeting at a conjunctive point (ROIs
// with well separated levels) or as a least-squares blend of the two local
// curves (overlapping ROIs).

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vidtone/core.hpp"
#include "vidtone/params.hpp"
#include "vidtone/roi.hpp"
#include "vidtone/spline.hpp"

namespace vidtone::fusion {

using roi::RoiStats;

struct LocalCurve {
  ToneCurve curve;
  RoiStats source;
  std::vector<std::pair<double, double>> anchors;
};

enum class Strategy { piecewise, factor };

inline const char* to_string(Strategy s) { return s == Strategy::piecewise ? "piecewise" : "factor"; }

struct FusionDecision {
  Strategy strategy = Strategy::factor;
  double statistic = 0.0;
  std::optional<double> conjunctive_point;
  std::optional<double> factor;
  std::optional<std::string> fallback_reason;

  friend bool operator==(const FusionDecision&, const FusionDecision&) = default;
};

using DecisionSet = std::array<FusionDecision, 3>;

namespace detail {

// Interior knots and anchors live in [1, 254] so that no spline segment
// collapses onto an endpoint.
inline double clamp_knot(double x) { return std::clamp(x, 1.0, 254.0); }
inline double clamp_level(double y) { return std::clamp(y, 0.0, kMaxLevel); }

inline ToneCurve sample(const auto& fn, Channel channel) {
  ToneCurve c;
  c.channel = channel;
  double running = 0.0;
  for (int x = 0; x < kLevels; ++x) {
    running = std::max(running, clamp_level(fn(static_cast<double>(x))));
    c.lut[x] = running;
  }
  return c;
}

struct Ordered {
  const ToneCurve* fa;
  const ToneCurve* fb;
  const RoiStats* a;
  const RoiStats* b;
};

// A is the ROI with the lower mean in this channel.
inline Ordered order_pair(const ToneCurve& f1, const ToneCurve& f2, const RoiStats& s1,
                          const RoiStats& s2, Channel c) {
  if (s2.mean_of(c) < s1.mean_of(c)) return {&f2, &f1, &s2, &s1};
  return {&f1, &f2, &s1, &s2};
}

}  // namespace detail

// Stand-in for a learned per-ROI curve: a monotone cubic that moves the
// ROI's mean to target_mean and its alpha-sigma span onto
// target_mean +/- alpha * target_sigma.
inline LocalCurve local_curve(const RoiStats& stats, Channel channel, const Params& params) {
  const double m = stats.mean_of(channel);
  const double s = stats.sigma_of(channel);
  const double a = params.alpha;
  const std::array<std::pair<double, double>, 5> candidates{{
      {0.0, 0.0},
      {detail::clamp_knot(m - a * s), detail::clamp_level(params.target_mean - a * params.target_sigma)},
      {detail::clamp_knot(m), params.target_mean},
      {detail::clamp_knot(m + a * s), detail::clamp_level(params.target_mean + a * params.target_sigma)},
      {kMaxLevel, kMaxLevel},
  }};

  LocalCurve out;
  out.source = stats;
  for (const auto& p : candidates)
    if (out.anchors.empty() || p.first > out.anchors.back().first) out.anchors.push_back(p);

  const auto chain = spline::monotone_cubic(out.anchors);
  out.curve = detail::sample(chain, channel);
  out.curve.lut[0] = 0.0;
  out.curve.lut[kLevels - 1] = kMaxLevel;
  return out;
}

inline double routing_statistic(const RoiStats& a, const RoiStats& b, Channel c, const Params& p) {
  return (a.mean_of(c) + p.rho * a.sigma_of(c)) - (b.mean_of(c) - p.rho * b.sigma_of(c));
}

inline double conjunctive_point(const RoiStats& a_in, const RoiStats& b_in,
                                const roi::SeparabilityReport& sep, Channel c,
                                const Params& params) {
  const bool swap = b_in.mean_of(c) < a_in.mean_of(c);
  const RoiStats& a = swap ? b_in : a_in;
  const RoiStats& b = swap ? a_in : b_in;
  const double na = swap ? sep[c].n_b : sep[c].n_a;
  const double nb = swap ? sep[c].n_a : sep[c].n_b;

  const double al = params.alpha;
  const double ma = a.mean_of(c), sa = a.sigma_of(c);
  const double mb = b.mean_of(c), sb = b.sigma_of(c);
  const double pc = na >= nb ? ((ma + al * sa) + (mb - al * sb + (na - nb) * sa)) / 2
                             : ((ma + al * sa - (nb - na) * sb) + (mb - al * sb)) / 2;

  const double lo = std::max(ma - al * sa, 1.0);
  const double hi = std::min(mb + al * sb, 254.0);
  if (hi - lo > 1.0) return std::clamp(pc, lo + 0.5, hi - 0.5);
  return 0.5 * (lo + hi);
}

// Routing between the two strategies. Piecewise additionally requires that
// neither ROI's mean falls inside the other's alpha-sigma span and that the
// knots 0 < x1 < P_c < x2 < 255 are strictly ordered; otherwise the factor
// strategy is used and fallback_reason says why.
inline FusionDecision select_strategy(const RoiStats& a_in, const RoiStats& b_in, Channel c,
                                      const Params& params) {
  const bool swap = b_in.mean_of(c) < a_in.mean_of(c);
  const RoiStats& a = swap ? b_in : a_in;
  const RoiStats& b = swap ? a_in : b_in;

  FusionDecision d;
  d.statistic = routing_statistic(a, b, c, params);
  if (d.statistic >= params.th) {
    d.strategy = Strategy::factor;
    return d;
  }

  const double al = params.alpha;
  const double ma = a.mean_of(c), sa = a.sigma_of(c);
  const double mb = b.mean_of(c), sb = b.sigma_of(c);
  const auto sep = roi::separability(a, b, al);
  const auto fallback = [&d](std::string why) {
    d.strategy = Strategy::factor;
    d.fallback_reason = std::move(why);
    return d;
  };

  if (sep[c].n_a >= roi::kSeparabilitySentinel || sep[c].n_b >= roi::kSeparabilitySentinel)
    return fallback("zero-spread ROI overlaps the other ROI");
  if (mb <= ma + al * sa || ma >= mb - al * sb)
    return fallback("alpha-sigma spans not separable: a mean lies inside the other ROI's span");

  const double x1 = detail::clamp_knot(ma - al * sa);
  const double x2 = detail::clamp_knot(mb + al * sb);
  const double pc = conjunctive_point(a, b, sep, c, params);
  if (!(0.0 < x1 && x1 < pc && pc < x2 && x2 < kMaxLevel))
    return fallback("knots not strictly increasing: x1=" + std::to_string(x1) +
                    " P_c=" + std::to_string(pc) + " x2=" + std::to_string(x2));

  d.strategy = Strategy::piecewise;
  d.conjunctive_point = pc;
  return d;
}

// Continuous two-piece curve before sampling: lower piece on [0, P_c],
// upper piece on [P_c, 255], sharing the value at P_c.
struct PiecewiseShape {
  spline::HermiteChain lower;
  spline::HermiteChain upper;
  double pc = 0.0;

  double operator()(double x) const { return x <= pc ? lower(x) : upper(x); }
};

inline PiecewiseShape piecewise_shape(const ToneCurve& f1, const ToneCurve& f2, const RoiStats& s1,
                                      const RoiStats& s2, double pc, Channel c,
                                      const Params& params) {
  const auto [fa, fb, a, b] = detail::order_pair(f1, f2, s1, s2, c);
  const double al = params.alpha;
  const double x1 = detail::clamp_knot(a->mean_of(c) - al * a->sigma_of(c));
  const double x2 = detail::clamp_knot(b->mean_of(c) + al * b->sigma_of(c));
  if (!(0.0 < x1 && x1 < pc && pc < x2 && x2 < kMaxLevel))
    throw Error(ErrorKind::invariant, "piecewise knots not strictly increasing (x1=" +
                                          std::to_string(x1) + ", P_c=" + std::to_string(pc) +
                                          ", x2=" + std::to_string(x2) + "); use the factor strategy");

  const double k1 = params.k1, k2 = params.k2;
  // Both pieces flatten into P_c when the dark curve sits above the bright
  // one there, and steepen otherwise.
  const double k3 = fa->eval(pc) > fb->eval(pc) ? params.k3_low : params.k3_high;

  const double y1 = k1 * fa->eval(x1) + (1 - k1) * fb->eval(x1);
  const double yc = k2 * fa->eval(pc) + (1 - k2) * fb->eval(pc);
  const double y2 = k1 * fb->eval(x2) + (1 - k1) * fa->eval(x2);

  // The prescribed slopes can make a segment overshoot its end value; they
  // are limited so the pieces stay monotone and still meet every anchor.
  std::vector<spline::Knot> lower_knots{
      {0.0, 0.0, 0.5 * y1 / x1},
      {x1, y1, k1 * fa->slope(x1) + (1 - k1) * fb->slope(x1)},
      {pc, yc, k3 * (yc - y1) / (pc - x1)},
  };
  std::vector<spline::Knot> upper_knots{
      {pc, yc, k3 * (y2 - yc) / (x2 - pc)},
      {x2, y2, k1 * fb->slope(x2) + (1 - k1) * fa->slope(x2)},
      {kMaxLevel, kMaxLevel, 0.5 * (kMaxLevel - y2) / (kMaxLevel - x2)},
  };
  spline::limit_slopes(lower_knots);
  spline::limit_slopes(upper_knots);
  return {spline::HermiteChain(std::move(lower_knots)), spline::HermiteChain(std::move(upper_knots)), pc};
}

inline ToneCurve piecewise_curve(const ToneCurve& f1, const ToneCurve& f2, const RoiStats& s1,
                                 const RoiStats& s2, double pc, Channel c, const Params& params) {
  return detail::sample(piecewise_shape(f1, f2, s1, s2, pc, c, params), c);
}

// Least-squares weight of the blend lambda*fA + (1-lambda)*fB against each
// curve over its own ROI's alpha-sigma span (integer levels, squared L2).
inline double factor_lambda(const ToneCurve& f1, const ToneCurve& f2, const RoiStats& s1,
                            const RoiStats& s2, Channel c, const Params& params) {
  const auto [fa, fb, a, b] = detail::order_pair(f1, f2, s1, s2, c);
  const auto span_error = [&](const RoiStats& s) {
    const double lo = std::ceil(std::max(0.0, s.mean_of(c) - params.alpha * s.sigma_of(c)));
    const double hi = std::floor(std::min(kMaxLevel, s.mean_of(c) + params.alpha * s.sigma_of(c)));
    double acc = 0.0;
    for (int x = static_cast<int>(lo); x <= static_cast<int>(hi); ++x) {
      const double d = (*fa)[x] - (*fb)[x];
      acc += d * d;
    }
    return acc;
  };
  const double sa = span_error(*a);
  const double sb = span_error(*b);
  if (sa + sb == 0.0) return 0.5;
  return std::clamp(sa / (sa + sb), 0.0, 1.0);
}

inline ToneCurve factor_curve(const ToneCurve& fa, const ToneCurve& fb, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error(ErrorKind::input, "factor weight must be in [0,1], got " + std::to_string(lambda));
  ToneCurve out;
  out.channel = fa.channel;
  for (int x = 0; x < kLevels; ++x) {
    const double v = lambda * fa.lut[x] + (1 - lambda) * fb.lut[x];
    out.lut[x] = std::clamp(v, std::min(fa.lut[x], fb.lut[x]), std::max(fa.lut[x], fb.lut[x]));
  }
  return out;
}

// One pairwise fusion step in one channel.
inline std::pair<ToneCurve, FusionDecision> fuse_pair(const ToneCurve& f1, const RoiStats& s1,
                                                      const ToneCurve& f2, const RoiStats& s2,
                                                      Channel c, const Params& params) {
  FusionDecision d = select_strategy(s1, s2, c, params);
  if (d.strategy == Strategy::piecewise)
    return {piecewise_curve(f1, f2, s1, s2, *d.conjunctive_point, c, params), d};
  const auto o = detail::order_pair(f1, f2, s1, s2, c);
  d.factor = factor_lambda(f1, f2, s1, s2, c, params);
  ToneCurve out = factor_curve(*o.fa, *o.fb, *d.factor);
  out.channel = c;
  return {out, d};
}

struct FusionResult {
  CurveSet curves;
  std::vector<DecisionSet> steps;     // one entry per pairwise fusion
  std::vector<RoiStats> ordered;      // ROI stats in fusion order
};

// ROIs are sorted by luminance mean and folded left to right; after each
// step the fused curve stands in for the local curve of the pooled ROI.
inline FusionResult fuse_stats(std::vector<RoiStats> stats, const Params& params) {
  if (stats.empty()) throw Error(ErrorKind::input, "fusion needs at least one ROI");
  std::sort(stats.begin(), stats.end(), roi::fusion_order_less);

  FusionResult result;
  result.ordered = stats;
  RoiStats pooled = stats.front();
  for (Channel c : kChannels) result.curves[index(c)] = local_curve(pooled, c, params).curve;

  for (std::size_t i = 1; i < stats.size(); ++i) {
    const RoiStats& next = stats[i];
    DecisionSet decisions;
    for (Channel c : kChannels) {
      const ToneCurve local = local_curve(next, c, params).curve;
      auto [curve, decision] = fuse_pair(result.curves[index(c)], pooled, local, next, c, params);
      result.curves[index(c)] = curve;
      decisions[index(c)] = std::move(decision);
    }
    result.steps.push_back(std::move(decisions));
    pooled = roi::pool_stats(pooled, next);
  }
  return result;
}

inline FusionResult fuse_global(const Frame& frame, const std::vector<RoiBox>& rois,
                                const Params& params) {
  std::vector<RoiStats> stats;
  if (rois.empty()) stats.push_back(roi::roi_stats(frame, frame.full_box()));
  for (const auto& box : rois) stats.push_back(roi::roi_stats(frame, box));
  return fuse_stats(std::move(stats), params);
}

}  // namespace vidtone::fusion
