#pragma once

// Cubic Hermite building blocks: a single segment with prescribed end values
// and slopes, and a monotone interpolant through a set of anchors using
// Fritsch-Carlson slope limiting.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "vidtone/error.hpp"

namespace vidtone::spline {

struct Knot {
  double x;
  double y;
  double slope;
};

inline double hermite(const Knot& a, const Knot& b, double x) {
  const double h = b.x - a.x;
  const double t = (x - a.x) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * a.y + h10 * h * a.slope + h01 * b.y + h11 * h * b.slope;
}

// Piecewise Hermite curve over strictly increasing knots.
class HermiteChain {
 public:
  HermiteChain() = default;

  explicit HermiteChain(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2) throw Error(ErrorKind::invariant, "spline needs at least two knots");
    for (std::size_t i = 1; i < knots_.size(); ++i)
      if (!(knots_[i].x > knots_[i - 1].x))
        throw Error(ErrorKind::invariant, "spline knots must be strictly increasing");
  }

  double operator()(double x) const {
    if (x <= knots_.front().x) return knots_.front().y;
    if (x >= knots_.back().x) return knots_.back().y;
    std::size_t i = 1;
    while (knots_[i].x < x) ++i;
    return hermite(knots_[i - 1], knots_[i], x);
  }

  const std::vector<Knot>& knots() const { return knots_; }

 private:
  std::vector<Knot> knots_;
};

// Fritsch-Carlson limiting: shrinks knot slopes just enough that every
// segment between non-decreasing values is itself non-decreasing. Values
// are untouched, so the chain still passes through every knot.
inline void limit_slopes(std::vector<Knot>& knots) {
  for (auto& k : knots) k.slope = std::max(0.0, k.slope);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double secant = (knots[i + 1].y - knots[i].y) / (knots[i + 1].x - knots[i].x);
    if (secant <= 0) {
      knots[i].slope = 0;
      knots[i + 1].slope = 0;
      continue;
    }
    const double a = knots[i].slope / secant;
    const double b = knots[i + 1].slope / secant;
    const double r = a * a + b * b;
    if (r > 9) {
      const double tau = 3 / std::sqrt(r);
      knots[i].slope = tau * a * secant;
      knots[i + 1].slope = tau * b * secant;
    }
  }
}

// Monotone cubic through (x_i, y_i); x strictly increasing, y non-decreasing.
inline HermiteChain monotone_cubic(const std::vector<std::pair<double, double>>& pts) {
  const std::size_t n = pts.size();
  if (n < 2) throw Error(ErrorKind::invariant, "monotone cubic needs at least two points");
  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dx = pts[i + 1].first - pts[i].first;
    if (!(dx > 0)) throw Error(ErrorKind::invariant, "monotone cubic x values must increase");
    secant[i] = (pts[i + 1].second - pts[i].second) / dx;
  }

  std::vector<Knot> knots(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m;
    if (i == 0)
      m = secant[0];
    else if (i == n - 1)
      m = secant[n - 2];
    else
      m = secant[i - 1] * secant[i] <= 0 ? 0.0 : 0.5 * (secant[i - 1] + secant[i]);
    knots[i] = {pts[i].first, pts[i].second, m};
  }
  limit_slopes(knots);
  return HermiteChain(std::move(knots));
}

}  // namespace vidtone::spline
