#pragma once

#include <vector>

#include "bmac/noise_model.hpp"
#include "bmac/quadrature.hpp"
#include "bmac/transmit_function.hpp"

namespace bmac {

// Expectations of f(shift + sigma n) over the sensing noise n. Every integral passes the points
// where the argument crosses a kink of f, and the point where it crosses zero, as breakpoints.

std::vector<double> noise_breakpoints(const TransmitFunction& f, double shift, double sigma);

/// E[f(shift + sigma n)].
double transmit_mean(const TransmitFunction& f, const NoiseModel& noise, double sigma,
                     double shift, const QuadratureSpec& spec);

/// E[f(shift + sigma n)^2].
double transmit_second_moment(const TransmitFunction& f, const NoiseModel& noise, double sigma,
                              double shift, const QuadratureSpec& spec);

/// E[f'(shift + sigma n)].
double transmit_mean_slope(const TransmitFunction& f, const NoiseModel& noise, double sigma,
                           double shift, const QuadratureSpec& spec);

/// E[f(theta + sigma n) - f(sigma n)] as a single integral; exactly zero at theta = 0.
double transmit_mean_increment(const TransmitFunction& f, const NoiseModel& noise, double sigma,
                               double theta, const QuadratureSpec& spec);

}  // namespace bmac
