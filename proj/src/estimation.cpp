#include "bmac/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "bmac/errors.hpp"
#include "bmac/solvers.hpp"
#include "bmac/transmit_moments.hpp"

namespace bmac {

void EstimationSetup::validate() const {
  if (!std::isfinite(theta)) throw PreconditionError("theta must be finite");
  field.validate();
  channel.validate();
}

MeanResponse::MeanResponse(const SensorField& field, TransmitFunction transmit,
                           QuadratureSpec spec)
    : transmit_(transmit), noise_(field.noise), spec_(spec) {
  field.validate();
  const double total = static_cast<double>(field.sensors);
  for (const auto& level : field.sigmas.levels(field.sensors))
    levels_.push_back({level.sigma, static_cast<double>(level.count) / total});
}

double MeanResponse::operator()(double theta) const {
  double sum = 0.0;
  for (const auto& level : levels_)
    sum += level.weight * transmit_mean(transmit_, noise_, level.sigma, theta, spec_);
  return sum;
}

std::optional<Bracket> MeanResponse::range() const {
  const auto c = transmit_.bound();
  if (!c) return std::nullopt;
  return Bracket{-*c, *c};
}

double mean_response(const EstimationSetup& setup, double theta, const QuadratureSpec& spec) {
  return MeanResponse(setup.field, setup.transmit, spec)(theta);
}

namespace {

void require_invertible(const TransmitFunction& f) {
  if (!f.strictly_increasing())
    throw UnsupportedKindError("estimation needs a strictly increasing transmit function, got " +
                               describe(f));
}

double clamp_target(const MeanResponse& h, double target, double margin, bool& clamped) {
  clamped = false;
  const auto range = h.range();
  if (!range) return target;
  const double lo = range->lo + margin * (range->hi - range->lo) / 2.0;
  const double hi = range->hi - margin * (range->hi - range->lo) / 2.0;
  if (target < lo) {
    clamped = true;
    return lo;
  }
  if (target > hi) {
    clamped = true;
    return hi;
  }
  return target;
}

}  // namespace

InversionEstimator::InversionEstimator(const EstimationSetup& setup, EstimatorOptions options)
    : response_(setup.field, setup.transmit, options.quadrature),
      sqrt_power_(std::sqrt(setup.channel.total_power)),
      options_(options) {
  setup.validate();
  require_invertible(setup.transmit);
  if (options_.table_points >= 2) {
    const int n = options_.table_points;
    const double u_max = std::asinh(1000.0);
    grid_theta_.resize(n);
    grid_h_.resize(n);
    for (int k = 0; k < n; ++k) {
      grid_theta_[k] = std::sinh(-u_max + 2.0 * u_max * k / (n - 1));
      grid_h_[k] = response_(grid_theta_[k]);
    }
  }
}

Estimate InversionEstimator::estimate(double received_z) const {
  Estimate out;
  const double target =
      clamp_target(response_, received_z / sqrt_power_, options_.clamp_margin, out.clamped);
  const auto h = [this](double theta) { return response_(theta); };

  if (grid_theta_.empty()) {
    out.value = invert_monotone(h, target, {-1.0, 1.0});
    return out;
  }
  const auto it = std::upper_bound(grid_h_.begin(), grid_h_.end(), target);
  if (it == grid_h_.begin()) {
    out.value = invert_monotone(h, target, {grid_theta_[0] - 1.0, grid_theta_[0]});
  } else if (it == grid_h_.end()) {
    out.value = invert_monotone(h, target, {grid_theta_.back(), grid_theta_.back() + 1.0});
  } else {
    const auto k = static_cast<std::size_t>(it - grid_h_.begin());
    out.value = invert_monotone(h, target, {grid_theta_[k - 1], grid_theta_[k]}, grid_h_[k - 1],
                                grid_h_[k]);
  }
  return out;
}

Estimate estimate(const EstimationSetup& setup, double received_z, const QuadratureSpec& spec) {
  EstimatorOptions options;
  options.quadrature = spec;
  options.table_points = 0;
  return InversionEstimator(setup, options).estimate(received_z);
}

double asymptotic_variance(const EstimationSetup& setup, const QuadratureSpec& spec) {
  setup.validate();
  if (!setup.field.sigmas.all_unit(setup.field.sensors))
    throw PreconditionError("asymptotic variance requires sigma_i = 1 for every sensor");
  const auto& f = setup.transmit;
  const auto& noise = setup.field.noise;
  const double mean = transmit_mean(f, noise, 1.0, setup.theta, spec);
  const double second = transmit_second_moment(f, noise, 1.0, setup.theta, spec);
  const double slope = transmit_mean_slope(f, noise, 1.0, setup.theta, spec);
  const double numerator =
      second - mean * mean + setup.channel.noise_var / setup.channel.total_power;
  return numerator / (slope * slope);
}

AfGain af_gain(const EstimationSetup& setup) {
  setup.validate();
  AfGain gain;
  double noise_var = 1.0;
  if (const auto v = setup.field.noise.variance())
    noise_var = *v;
  else
    gain.nominal_noise_variance = true;

  double power = 0.0;
  for (const auto& level : setup.field.sigmas.levels(setup.field.sensors))
    power += level.count * (setup.theta * setup.theta + level.sigma * level.sigma * noise_var);
  gain.alpha = std::sqrt(setup.channel.total_power / power);
  return gain;
}

double af_estimate(const EstimationSetup& setup, std::span<const double> sensing_noise,
                   double channel_noise) {
  return af_estimate(setup, af_gain(setup), sensing_noise, channel_noise);
}

double af_estimate(const EstimationSetup& setup, const AfGain& gain,
                   std::span<const double> sensing_noise, double channel_noise) {
  const std::size_t sensors = setup.field.sensors;
  if (sensing_noise.size() != sensors)
    throw PreconditionError("af_estimate needs one noise draw per sensor");
  double sum = 0.0;
  for (std::size_t i = 0; i < sensors; ++i) sum += setup.field.sigmas.at(i + 1) * sensing_noise[i];
  const double count = static_cast<double>(sensors);
  return setup.theta + sum / count + channel_noise / (count * gain.alpha);
}

}  // namespace bmac
