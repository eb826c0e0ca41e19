#pragma once

#include <cmath>
#include <functional>

namespace bmac {

struct Bracket {
  double lo;
  double hi;
};

/// Solves h(x) = target for strictly increasing h.
///
/// The hint is widened geometrically until it brackets the target; the root is then polished
/// with Brent's method until the bracket is a few ulps of x wide. Throws OutOfRangeError
/// (carrying the closest endpoint) when widening runs out of range first.
double invert_monotone(const std::function<double(double)>& h, double target, Bracket hint);

/// Same, with h(hint.lo) and h(hint.hi) already known.
double invert_monotone(const std::function<double(double)>& h, double target, Bracket hint,
                       double h_lo, double h_hi);

struct ScalarMinimum {
  double argmin;
  double min_value;
};

/// Coarse scan over `grid_points` equally spaced points of [lo, hi], then golden-section search
/// inside the cells adjacent to the best grid point. Ties keep the smallest argument, and the
/// refined point replaces the grid point only if it is strictly better.
ScalarMinimum minimize_scalar(const std::function<double(double)>& g, double lo, double hi,
                              int grid_points);

}  // namespace bmac
