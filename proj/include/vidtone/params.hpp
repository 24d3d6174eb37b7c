#pragma once

#include <cmath>
#include <string>

#include "vidtone/error.hpp"

namespace vidtone {

enum class EcbMode { curve, histogram };

inline const char* to_string(EcbMode m) { return m == EcbMode::curve ? "curve" : "histogram"; }

// Tuning constants for every stage. Defaults are the values used in the
// reference experiments.
struct Params {
  double lambda = 2.0;        // weight of the uniform-histogram term
  double gamma = 3.0;         // weight of the previous-frame histogram term
  double th = 50.0;           // piecewise/factor routing threshold
  double rho = 1.0;           // sigma multiplier in the routing statistic
  double alpha = 3.0;         // sigma multiplier for knots and overlap intervals
  double k1 = 0.9;            // pull toward the own-ROI curve at the outer knot
  double k2 = 0.5;            // blend at the conjunctive point
  double k3_low = 0.5;        // slope factor at P_c when own curve is above the other
  double k3_high = 1.5;
  double lb = 0.5;            // lower bound on the temporal blending weight
  double entropy_base = 2.0;
  EcbMode ecb_mode = EcbMode::curve;
  double target_mean = 128.0;   // stand-in local curve: where the ROI mean lands
  double target_sigma = 40.0;   // stand-in local curve: spread of the ROI's alpha-sigma span

  void validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::config, msg); };
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(lambda) || lambda < 0) fail("lambda must be >= 0");
    if (!finite(gamma) || gamma < 0) fail("gamma must be >= 0");
    if (!finite(th) || th < 0) fail("TH must be >= 0");
    if (!finite(rho) || rho <= 0) fail("rho must be > 0");
    if (!finite(alpha) || alpha <= 0) fail("alpha must be > 0");
    if (!(k1 >= 0 && k1 <= 1)) fail("k1 must be in [0,1]");
    if (!(k2 >= 0 && k2 <= 1)) fail("k2 must be in [0,1]");
    if (!finite(k3_low) || k3_low <= 0) fail("k3_low must be > 0");
    if (!finite(k3_high) || k3_high <= 0) fail("k3_high must be > 0");
    if (!(lb > 0 && lb <= 1)) fail("LB must be in (0,1]");
    if (!finite(entropy_base) || entropy_base <= 1) fail("entropy_base must be > 1");
    if (!(target_mean > 0 && target_mean < 255)) fail("target_mean must be in (0,255)");
    if (!finite(target_sigma) || target_sigma <= 0) fail("target_sigma must be > 0");
  }
};

}  // namespace vidtone
