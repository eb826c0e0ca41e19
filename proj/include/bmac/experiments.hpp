#pragma once

#include "bmac/config.hpp"
#include "bmac/harness.hpp"

namespace bmac {

/// Runs every (noise, transmit, sensor count, sweep value) point of the experiment in that
/// nesting order. Point k of the enumeration draws its trials from stream ids k * 2^32 + t.
///
/// Leading columns are noise and transmit, then L unless L is swept, then the swept
/// parameter, then the experiment's metrics.
Table run_experiment(const ExperimentConfig& config, unsigned workers = 1);

/// Max |p_matched - p_reference| on an evenly spaced grid over [-half_width, half_width].
struct DualityResult {
  std::string label;
  double max_abs_error;
  int points;
};
/// Matched density of a tanh transmit against its closed form
/// cosh(w x)^(-1/w) / ((1/w) B(1/(2w), 1/2)), which is (1/pi) sech(x) at w = 1.
DualityResult tanh_duality(const TransmitFunction& f, double half_width, int points,
                           const QuadratureSpec& spec = {});
/// Matched density of the noise score against the noise density itself.
DualityResult score_round_trip(const NoiseModel& model, double half_width, int points,
                               const QuadratureSpec& spec = {});

}  // namespace bmac
