#include "bmac/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "bmac/errors.hpp"

namespace bmac {

namespace {

constexpr double kMaxArgument = 1e15;
constexpr int kMaxWidenings = 200;
constexpr int kMaxBrentIterations = 300;

// Brent's method on F(x) = h(x) - target with F(a) <= 0 <= F(b).
double brent(const std::function<double(double)>& h, double target, double a, double b,
             double fa, double fb) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = b, fc = fb;
  double d = b - a, e = d;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double best = b, best_residual = std::abs(fb);

  for (int iter = 0; iter < kMaxBrentIterations; ++iter) {
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + std::numeric_limits<double>::min();
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol || fb == 0.0) return b;

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (xm > 0.0 ? tol : -tol);
    fb = h(b) - target;
    if (std::abs(fb) < best_residual) {
      best_residual = std::abs(fb);
      best = b;
    }
  }
  return best;
}

}  // namespace

double invert_monotone(const std::function<double(double)>& h, double target, Bracket hint) {
  if (hint.lo > hint.hi) std::swap(hint.lo, hint.hi);
  if (hint.lo == hint.hi) {
    hint.lo -= 0.5;
    hint.hi += 0.5;
  }
  return invert_monotone(h, target, hint, h(hint.lo), h(hint.hi));
}

double invert_monotone(const std::function<double(double)>& h, double target, Bracket hint,
                       double h_lo, double h_hi) {
  if (!std::isfinite(target)) throw PreconditionError("inversion target must be finite");
  double lo = hint.lo, hi = hint.hi;
  double f_lo = h_lo - target, f_hi = h_hi - target;
  double width = std::max(hi - lo, 1e-3);

  for (int i = 0; f_lo > 0.0; ++i) {
    const double next = lo - width;
    const double f_next = h(next) - target;
    if (i >= kMaxWidenings || std::abs(next) > kMaxArgument || f_next == f_lo)
      throw OutOfRangeError(target, next, f_next + target);
    hi = lo;
    f_hi = f_lo;
    lo = next;
    f_lo = f_next;
    width *= 2.0;
  }
  for (int i = 0; f_hi < 0.0; ++i) {
    const double next = hi + width;
    const double f_next = h(next) - target;
    if (i >= kMaxWidenings || std::abs(next) > kMaxArgument || f_next == f_hi)
      throw OutOfRangeError(target, next, f_next + target);
    lo = hi;
    f_lo = f_hi;
    hi = next;
    f_hi = f_next;
    width *= 2.0;
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  return brent(h, target, lo, hi, f_lo, f_hi);
}

ScalarMinimum minimize_scalar(const std::function<double(double)>& g, double lo, double hi,
                              int grid_points) {
  if (!(lo < hi)) throw PreconditionError("minimize_scalar requires lo < hi");
  if (grid_points < 8) throw PreconditionError("minimize_scalar requires at least 8 grid points");

  const double spacing = (hi - lo) / (grid_points - 1);
  auto grid_x = [&](int k) { return k == grid_points - 1 ? hi : lo + k * spacing; };

  int best_k = 0;
  double best_value = g(lo);
  for (int k = 1; k < grid_points; ++k) {
    const double value = g(grid_x(k));
    if (value < best_value) {
      best_value = value;
      best_k = k;
    }
  }

  double a = grid_x(std::max(best_k - 1, 0));
  double b = grid_x(std::min(best_k + 1, grid_points - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double g1 = g(x1), g2 = g(x2);
  const double tol = 1e-10 * (hi - lo);
  while (b - a > tol) {
    if (g1 <= g2) {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - inv_phi * (b - a);
      g1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + inv_phi * (b - a);
      g2 = g(x2);
    }
  }
  const double refined = g1 <= g2 ? x1 : x2;
  const double refined_value = std::min(g1, g2);
  if (refined_value < best_value) return {refined, refined_value};
  return {grid_x(best_k), best_value};
}

}  // namespace bmac
