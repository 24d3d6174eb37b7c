#pragma once

// Value types shared by every stage of the enhancer: 8-bit RGB frames,
// 256-bin histograms, real-valued tone curves and ROI boxes, plus the
// pixel-level primitives that connect them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vidtone/error.hpp"

namespace vidtone {

inline constexpr int kLevels = 256;
inline constexpr double kMaxLevel = 255.0;

enum class Channel : int { R = 0, G = 1, B = 2 };
inline constexpr std::array<Channel, 3> kChannels{Channel::R, Channel::G, Channel::B};

inline constexpr int index(Channel c) { return static_cast<int>(c); }

inline const char* to_string(Channel c) {
  switch (c) {
    case Channel::R: return "R";
    case Channel::G: return "G";
    case Channel::B: return "B";
  }
  return "?";
}

struct RoiBox {
  int x0 = 0;
  int y0 = 0;
  int w = 1;
  int h = 1;
  std::string label;

  friend bool operator==(const RoiBox&, const RoiBox&) = default;
};

inline std::string describe(const RoiBox& box);

// Interleaved RGB, row-major. Immutable in practice: every operation
// returns a new frame.
class Frame {
 public:
  Frame() = default;

  Frame(int width, int height, std::uint8_t fill = 0) : width_(width), height_(height) {
    if (width < 1 || height < 1)
      throw Error(ErrorKind::input, "frame dimensions must be >= 1, got " +
                                        std::to_string(width) + "x" + std::to_string(height));
    data_.assign(static_cast<std::size_t>(width) * height * 3, fill);
  }

  Frame(int width, int height, std::vector<std::uint8_t> data) : Frame(width, height) {
    if (data.size() != data_.size())
      throw Error(ErrorKind::input, "frame data length " + std::to_string(data.size()) +
                                        " does not match " + std::to_string(width) + "x" +
                                        std::to_string(height) + "x3");
    data_ = std::move(data);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return data_.empty(); }

  std::uint8_t at(int x, int y, Channel c) const {
    return data_[offset(x, y) + static_cast<std::size_t>(index(c))];
  }
  std::uint8_t& at(int x, int y, Channel c) {
    return data_[offset(x, y) + static_cast<std::size_t>(index(c))];
  }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  RoiBox full_box() const { return RoiBox{0, 0, width_, height_, "frame"}; }

  bool contains(const RoiBox& box) const {
    return box.w >= 1 && box.h >= 1 && box.x0 >= 0 && box.y0 >= 0 &&
           static_cast<long>(box.x0) + box.w <= width_ &&
           static_cast<long>(box.y0) + box.h <= height_;
  }

  void require_contains(const RoiBox& box) const {
    if (!contains(box))
      throw Error(ErrorKind::bounds, "box " + describe(box) + " is outside frame " +
                                         std::to_string(width_) + "x" + std::to_string(height_));
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

inline std::string describe(const RoiBox& box) {
  std::string s = "{x0=" + std::to_string(box.x0) + ", y0=" + std::to_string(box.y0) +
                  ", w=" + std::to_string(box.w) + ", h=" + std::to_string(box.h);
  if (!box.label.empty()) s += ", label=" + box.label;
  return s + "}";
}

struct Histogram {
  std::array<double, kLevels> bins{};
  bool normalized = false;

  double sum() const { return std::accumulate(bins.begin(), bins.end(), 0.0); }

  bool is_normalized(double tol = 1e-9) const {
    for (double b : bins)
      if (!(b >= 0.0)) return false;
    return std::abs(sum() - 1.0) <= tol;
  }

  static Histogram uniform() {
    Histogram h;
    h.bins.fill(1.0 / kLevels);
    h.normalized = true;
    return h;
  }

  static Histogram delta(int level) {
    Histogram h;
    h.bins.at(static_cast<std::size_t>(level)) = 1.0;
    h.normalized = true;
    return h;
  }

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

inline void require_normalized(const Histogram& h, const char* what) {
  if (!h.is_normalized())
    throw Error(ErrorKind::input, std::string(what) + " histogram is not normalized (sum=" +
                                      std::to_string(h.sum()) + ")");
}

// Real-valued lookup table; quantized only when applied to a frame.
struct ToneCurve {
  std::array<double, kLevels> lut{};
  Channel channel = Channel::R;

  double operator[](int x) const { return lut[static_cast<std::size_t>(x)]; }

  // Linear interpolation between samples; x is clamped to [0, 255].
  double eval(double x) const {
    x = std::clamp(x, 0.0, kMaxLevel);
    const int i = std::min(static_cast<int>(x), kLevels - 2);
    const double t = x - i;
    return lut[i] + t * (lut[i + 1] - lut[i]);
  }

  // Central differences on the samples (one-sided at the ends), linearly
  // interpolated to real x.
  double slope(double x) const {
    x = std::clamp(x, 0.0, kMaxLevel);
    const int i = std::min(static_cast<int>(x), kLevels - 2);
    const double t = x - i;
    return sample_slope(i) + t * (sample_slope(i + 1) - sample_slope(i));
  }

  double sample_slope(int i) const {
    if (i <= 0) return lut[1] - lut[0];
    if (i >= kLevels - 1) return lut[kLevels - 1] - lut[kLevels - 2];
    return 0.5 * (lut[i + 1] - lut[i - 1]);
  }

  bool is_monotone() const {
    for (int x = 0; x + 1 < kLevels; ++x)
      if (!(lut[x + 1] >= lut[x])) return false;
    return true;
  }

  bool in_range() const {
    return std::all_of(lut.begin(), lut.end(), [](double v) { return v >= 0.0 && v <= kMaxLevel; });
  }

  static ToneCurve identity(Channel c = Channel::R) {
    ToneCurve t;
    t.channel = c;
    for (int x = 0; x < kLevels; ++x) t.lut[x] = x;
    return t;
  }

  friend bool operator==(const ToneCurve&, const ToneCurve&) = default;
};

using CurveSet = std::array<ToneCurve, 3>;

inline CurveSet identity_curves() {
  return {ToneCurve::identity(Channel::R), ToneCurve::identity(Channel::G),
          ToneCurve::identity(Channel::B)};
}

inline void require_monotone(const ToneCurve& c) {
  if (!c.is_monotone())
    throw Error(ErrorKind::invariant,
                std::string("tone curve for channel ") + to_string(c.channel) + " is not monotone");
}

inline Histogram compute_histogram(const Frame& frame, Channel channel,
                                   const std::optional<RoiBox>& region = std::nullopt) {
  const RoiBox box = region.value_or(frame.full_box());
  frame.require_contains(box);
  std::array<std::uint64_t, kLevels> counts{};
  for (int y = box.y0; y < box.y0 + box.h; ++y)
    for (int x = box.x0; x < box.x0 + box.w; ++x) ++counts[frame.at(x, y, channel)];
  const double n = static_cast<double>(box.w) * box.h;
  Histogram h;
  for (int k = 0; k < kLevels; ++k) h.bins[k] = static_cast<double>(counts[k]) / n;
  h.normalized = true;
  return h;
}

inline std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, kMaxLevel));
}

// Per-channel table lookup with no shape check; any LUT is accepted.
inline Frame apply_lut(const Frame& frame, const CurveSet& curves) {
  std::array<std::array<std::uint8_t, kLevels>, 3> table{};
  for (int c = 0; c < 3; ++c)
    for (int x = 0; x < kLevels; ++x) table[c][x] = quantize(curves[c].lut[x]);
  Frame out = frame;
  auto px = out.data();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = table[i % 3][px[i]];
  return out;
}

inline Frame apply_curve(const Frame& frame, const CurveSet& curves) {
  for (const auto& c : curves) require_monotone(c);
  return apply_lut(frame, curves);
}

// Rec.601 luma in exact integer arithmetic, rounded half up.
inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

inline std::vector<std::uint8_t> luminance_plane(const Frame& frame) {
  std::vector<std::uint8_t> y(frame.pixel_count());
  auto px = frame.data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = luma(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
  return y;
}

inline Histogram histogram_of(std::span<const std::uint8_t> levels) {
  std::array<std::uint64_t, kLevels> counts{};
  for (auto v : levels) ++counts[v];
  Histogram h;
  const double n = static_cast<double>(levels.size());
  for (int k = 0; k < kLevels; ++k) h.bins[k] = static_cast<double>(counts[k]) / n;
  h.normalized = true;
  return h;
}

inline Histogram luminance_histogram(const Frame& frame) {
  return histogram_of(luminance_plane(frame));
}

}  // namespace vidtone
