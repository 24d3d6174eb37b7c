#pragma once

// Deterministic synthetic sequences: a static base scene (gradient
// background with a dark and a bright ROI, all with Gaussian pixel noise)
// modulated by a per-frame brightness gain.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vidtone/core.hpp"

namespace vidtone::synth {

enum class Kind { flicker, two_roi_scene, ramp };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::flicker: return "flicker";
    case Kind::two_roi_scene: return "two_roi_scene";
    case Kind::ramp: return "ramp";
  }
  return "?";
}

inline Kind parse_kind(const std::string& s) {
  if (s == "flicker") return Kind::flicker;
  if (s == "two_roi_scene" || s == "two_roi") return Kind::two_roi_scene;
  if (s == "ramp") return Kind::ramp;
  throw Error(ErrorKind::input, "unknown synth kind '" + s + "'");
}

struct RoiLayout {
  RoiBox box;
  std::array<double, 3> color{};
  double noise_sigma = 10.0;
};

struct SynthSpec {
  Kind kind = Kind::flicker;
  int frames = 32;
  int width = 128;
  int height = 96;
  double amplitude = 0.3;   // flicker: sinusoid amplitude; ramp: gain spans 1 +/- amplitude
  double period = 8.0;      // flicker period in frames
  std::uint64_t seed = 1;
  double dark_mean = 50.0;
  double bright_mean = 180.0;
  double roi_sigma = 10.0;
  double background_noise = 6.0;
  std::optional<std::vector<RoiLayout>> rois;  // overrides the default dark/bright layout
};

struct Sequence {
  std::vector<Frame> frames;
  std::vector<RoiBox> rois;
};

inline std::vector<RoiLayout> default_layout(const SynthSpec& s) {
  const int w = std::max(1, s.width / 3);
  const int h = std::max(1, s.height / 2);
  const int y0 = s.height / 4;
  const double dm = s.dark_mean, bm = s.bright_mean;
  return {
      {RoiBox{s.width / 8, y0, w, h, "dark"}, {dm, dm, dm}, s.roi_sigma},
      {RoiBox{s.width - s.width / 8 - w, y0, w, h, "bright"}, {bm, bm, bm}, s.roi_sigma},
  };
}

inline double gain_at(const SynthSpec& s, int t) {
  switch (s.kind) {
    case Kind::flicker:
      return 1.0 + s.amplitude * std::sin(2.0 * std::numbers::pi * t / s.period);
    case Kind::ramp:
      return s.frames > 1 ? 1.0 - s.amplitude + 2.0 * s.amplitude * t / (s.frames - 1) : 1.0;
    case Kind::two_roi_scene:
      return 1.0;
  }
  return 1.0;
}

inline Frame base_scene(const SynthSpec& s, const std::vector<RoiLayout>& layout) {
  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  Frame f(s.width, s.height);
  // Warm-tinted horizontal gradient around mid gray.
  const std::array<double, 3> tint{8.0, 0.0, -8.0};
  for (int y = 0; y < s.height; ++y)
    for (int x = 0; x < s.width; ++x) {
      const double ramp = s.width > 1 ? 80.0 + 60.0 * x / (s.width - 1) : 110.0;
      for (Channel c : kChannels)
        f.at(x, y, c) = quantize(ramp + tint[index(c)] + s.background_noise * unit(rng));
    }
  for (const auto& roi : layout) {
    f.require_contains(roi.box);
    for (int y = roi.box.y0; y < roi.box.y0 + roi.box.h; ++y)
      for (int x = roi.box.x0; x < roi.box.x0 + roi.box.w; ++x)
        for (Channel c : kChannels)
          f.at(x, y, c) = quantize(roi.color[index(c)] + roi.noise_sigma * unit(rng));
  }
  return f;
}

inline Frame scale(const Frame& base, double gain) {
  Frame out = base;
  for (auto& v : out.data()) v = quantize(v * gain);
  return out;
}

inline Sequence generate(const SynthSpec& s) {
  if (s.frames < 1) throw Error(ErrorKind::input, "synth needs at least one frame");
  if (s.width < 1 || s.height < 1) throw Error(ErrorKind::input, "synth frame size must be >= 1");
  const auto layout = s.rois.value_or(default_layout(s));
  for (int t = 0; t < s.frames; ++t)
    if (!(gain_at(s, t) > 0.0))
      throw Error(ErrorKind::input, "gain must stay positive; amplitude too large");

  Sequence seq;
  for (const auto& r : layout) seq.rois.push_back(r.box);
  const Frame base = base_scene(s, layout);
  seq.frames.reserve(static_cast<std::size_t>(s.frames));
  for (int t = 0; t < s.frames; ++t) seq.frames.push_back(scale(base, gain_at(s, t)));
  return seq;
}

}  // namespace vidtone::synth
