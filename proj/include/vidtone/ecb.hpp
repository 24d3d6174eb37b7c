#pragma once

// Inter-frame step. Either blends the current frame's curves with the
// previous output curves, with the blend weight chosen so the enhanced
// frame's entropy tracks the previous one (curve mode), or derives the
// curves from a histogram target tied to the previous frame's target
// (histogram mode).

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>
#include <cmath>
#include <optional>

#include "vidtone/core.hpp"
#include "vidtone/hem.hpp"
#include "vidtone/params.hpp"

namespace vidtone::ecb {

using HistogramSet = std::array<Histogram, 3>;

struct EnhancerState {
  std::optional<CurveSet> prev_curves;
  std::optional<double> prev_entropy;
  std::optional<HistogramSet> prev_modified_histograms;
  std::size_t frame_index = 0;
};

struct StepResult {
  CurveSet curves;
  EnhancerState state;
  double lambda_ea = 0.0;
};

// Sum of -p log p; empty bins contribute nothing.
inline double entropy(const Histogram& h, double base = 2.0) {
  require_normalized(h, "entropy input");
  if (!(base > 1.0)) throw Error(ErrorKind::input, "entropy base must be > 1");
  double e = 0.0;
  for (double p : h.bins)
    if (p > 0.0) e -= p * std::log(p);
  return std::max(0.0, e / std::log(base));
}

inline ToneCurve blend_curve(const ToneCurve& current, const ToneCurve& previous, double lambda) {
  if (lambda == 0.0) return current;
  if (lambda == 1.0) return previous;
  ToneCurve out;
  out.channel = current.channel;
  for (int x = 0; x < kLevels; ++x)
    out.lut[x] = current.lut[x] + lambda * (previous.lut[x] - current.lut[x]);
  return out;
}

inline CurveSet blend_curves(const CurveSet& current, const CurveSet& previous, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error(ErrorKind::input, "blend weight must be in [0,1], got " + std::to_string(lambda));
  CurveSet out;
  for (int c = 0; c < 3; ++c) {
    require_monotone(current[c]);
    require_monotone(previous[c]);
    out[c] = blend_curve(current[c], previous[c], lambda);
  }
  return out;
}

// Distinct RGB colours of a frame with their pixel fractions. Rendering
// this table through a curve set yields the exact luminance histogram of
// the rendered frame at a cost bounded by the number of distinct colours.
struct ColorTable {
  std::vector<std::array<std::uint8_t, 3>> colors;
  std::vector<double> weights;
};

inline ColorTable color_table(const Frame& frame) {
  std::vector<std::uint32_t> keys;
  keys.reserve(frame.pixel_count());
  for (int y = 0; y < frame.height(); ++y)
    for (int x = 0; x < frame.width(); ++x)
      keys.push_back(std::uint32_t(frame.at(x, y, Channel::R)) << 16 |
                     std::uint32_t(frame.at(x, y, Channel::G)) << 8 | frame.at(x, y, Channel::B));
  std::sort(keys.begin(), keys.end());
  ColorTable t;
  const double unit = 1.0 / static_cast<double>(keys.size());
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    t.colors.push_back({std::uint8_t(keys[i] >> 16), std::uint8_t(keys[i] >> 8), std::uint8_t(keys[i])});
    t.weights.push_back(static_cast<double>(j - i) * unit);
    i = j;
  }
  return t;
}

inline Histogram rendered_luminance_histogram(const ColorTable& table, const CurveSet& curves) {
  Histogram out;
  for (std::size_t i = 0; i < table.colors.size(); ++i) {
    const auto& c = table.colors[i];
    out.bins[luma(quantize(curves[0].lut[c[0]]), quantize(curves[1].lut[c[1]]),
                  quantize(curves[2].lut[c[2]]))] += table.weights[i];
  }
  out.normalized = true;
  return out;
}

inline double enhanced_entropy(const ColorTable& table, const CurveSet& curves, double base) {
  return entropy(rendered_luminance_histogram(table, curves), base);
}

// Reference path: render the whole frame, then measure.
inline double rendered_entropy(const Frame& frame, const CurveSet& curves, double base) {
  return entropy(luminance_histogram(apply_lut(frame, curves)), base);
}

inline constexpr int kLambdaSteps = 100;

struct LambdaSearch {
  double lambda = 0.0;      // argmin on the grid, before the lower bound
  double gap = 0.0;         // |E(t; lambda) - E(t-1)| at the argmin
  double selected = 0.0;    // max(lambda, LB)
};

inline LambdaSearch search_lambda_ea(const Frame& frame, const CurveSet& current,
                                     const EnhancerState& state, const Params& params) {
  if (state.frame_index == 0 || !state.prev_curves || !state.prev_entropy)
    throw Error(ErrorKind::contract, "temporal blend weight needs a previous frame");
  const ColorTable table = color_table(frame);
  LambdaSearch best{0.0, INFINITY, 0.0};
  for (int i = 0; i <= kLambdaSteps; ++i) {
    const double lambda = static_cast<double>(i) / kLambdaSteps;
    const double e = enhanced_entropy(table, blend_curves(current, *state.prev_curves, lambda),
                                      params.entropy_base);
    const double gap = std::abs(e - *state.prev_entropy);
    // Ties go to the smaller weight.
    if (gap < best.gap - 1e-12) best = {lambda, gap, 0.0};
  }
  best.selected = std::max(best.lambda, params.lb);
  return best;
}

inline double select_lambda_ea(const Frame& frame, const CurveSet& current,
                               const EnhancerState& state, const Params& params) {
  return search_lambda_ea(frame, current, state, params).selected;
}

inline HistogramSet channel_histograms(const Frame& frame) {
  return {compute_histogram(frame, Channel::R), compute_histogram(frame, Channel::G),
          compute_histogram(frame, Channel::B)};
}

// Histogram of channel levels after the curve is applied.
inline Histogram pushed_histogram(const Histogram& h, const ToneCurve& curve) {
  Histogram out;
  for (int x = 0; x < kLevels; ++x) out.bins[quantize(curve.lut[x])] += h.bins[x];
  out.normalized = true;
  return out;
}

// Frame 0 passes `curves` through. In histogram mode `curves` is ignored
// from frame 1 on; the caller should pass the frame's HEM curves so that
// frame 0 matches the lambda-only target stored in the state.
inline StepResult ecb_step(const Frame& frame, const CurveSet& curves, const EnhancerState& state,
                           const Params& params) {
  for (const auto& c : curves) require_monotone(c);
  const HistogramSet input = channel_histograms(frame);

  StepResult r;
  HistogramSet targets;
  if (state.frame_index == 0) {
    if (state.prev_curves || state.prev_entropy || state.prev_modified_histograms)
      throw Error(ErrorKind::contract, "state at frame 0 must not carry previous-frame data");
    r.curves = curves;
    for (int c = 0; c < 3; ++c)
      targets[c] = params.ecb_mode == EcbMode::histogram
                       ? hem::modified_histogram(input[c], params.lambda).h
                       : pushed_histogram(input[c], r.curves[c]);
  } else if (params.ecb_mode == EcbMode::curve) {
    if (!state.prev_curves || !state.prev_entropy)
      throw Error(ErrorKind::contract, "curve-mode state is missing previous curves or entropy");
    r.lambda_ea = select_lambda_ea(frame, curves, state, params);
    r.curves = blend_curves(curves, *state.prev_curves, r.lambda_ea);
    for (int c = 0; c < 3; ++c) targets[c] = pushed_histogram(input[c], r.curves[c]);
  } else {
    if (!state.prev_modified_histograms)
      throw Error(ErrorKind::contract, "histogram-mode state is missing previous targets");
    for (Channel ch : kChannels) {
      const int c = index(ch);
      targets[c] = hem::temporal_modified_histogram(input[c], (*state.prev_modified_histograms)[c],
                                                    params.lambda, params.gamma)
                       .h;
      r.curves[c] = hem::tone_curve_from_histogram(targets[c], ch);
    }
  }

  r.state.prev_curves = r.curves;
  r.state.prev_entropy = enhanced_entropy(color_table(frame), r.curves, params.entropy_base);
  r.state.prev_modified_histograms = targets;
  r.state.frame_index = state.frame_index + 1;
  return r;
}

}  // namespace vidtone::ecb
