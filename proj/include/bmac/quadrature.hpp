#pragma once

#include <functional>
#include <span>
#include <string>

#include "bmac/noise_model.hpp"

namespace bmac {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Probability mass left outside the truncated domain of `expect`.
  double tail_mass = 1e-12;
  int max_subdivisions = 2000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

using RealFunction = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod integration of f over [a, b].
///
/// `breakpoints` inside (a, b) seed the initial partition, so discontinuities of f never sit
/// inside a panel. Throws NonConvergenceError when `max_subdivisions` bisections do not reach
/// max(abs_tol, rel_tol * |I|).
QuadratureResult integrate(const RealFunction& f, double a, double b, const QuadratureSpec& spec,
                           std::span<const double> breakpoints = {},
                           const std::string& label = "integral");

/// E[g(n)] = integral of g(n) p(n) dn for n drawn from `model`.
///
/// The line is truncated to [-T, T] with T = model.tail_truncation(spec.tail_mass). The initial
/// partition also includes the noise quantiles at several tail masses, which keeps heavy-tailed
/// domains (T ~ 1e11 for a unit Cauchy) resolvable.
double expect(const NoiseModel& model, const RealFunction& g, const QuadratureSpec& spec = {},
              std::span<const double> breakpoints = {}, const std::string& label = "expectation");

QuadratureResult expect_detailed(const NoiseModel& model, const RealFunction& g,
                                 const QuadratureSpec& spec = {},
                                 std::span<const double> breakpoints = {},
                                 const std::string& label = "expectation");

}  // namespace bmac
