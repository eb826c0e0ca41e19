#include "bmac/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bmac/errors.hpp"
#include "bmac/parallel.hpp"
#include "bmac/solvers.hpp"
#include "bmac/transmit_moments.hpp"

namespace bmac {

void DetectionSetup::validate() const {
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw PreconditionError("detection signal theta must be non-negative and finite");
  field.validate();
  channel.validate();
  if (!(prior_h0 >= 0.0 && prior_h1 >= 0.0) || std::abs(prior_h0 + prior_h1 - 1.0) > 1e-12)
    throw PreconditionError("priors must be non-negative and sum to one");
}

namespace {

struct Level {
  double sigma;
  double count;
};

std::vector<Level> weighted_levels(const SensorField& field) {
  std::vector<Level> out;
  for (const auto& level : field.sigmas.levels(field.sensors))
    out.push_back({level.sigma, static_cast<double>(level.count)});
  return out;
}

}  // namespace

double deflection_numerator_root(const DetectionSetup& setup, const QuadratureSpec& spec) {
  setup.validate();
  const double total = static_cast<double>(setup.field.sensors);
  double sum = 0.0;
  for (const auto& level : weighted_levels(setup.field))
    sum += (level.count / total) * transmit_mean_increment(setup.transmit, setup.field.noise,
                                                           level.sigma, setup.theta, spec);
  return sum;
}

double deflection(const DetectionSetup& setup, const QuadratureSpec& spec) {
  const double root = deflection_numerator_root(setup, spec);
  if (root == 0.0) return 0.0;
  const double total = static_cast<double>(setup.field.sensors);
  double spread = 0.0;
  for (const auto& level : weighted_levels(setup.field)) {
    const double m = transmit_mean(setup.transmit, setup.field.noise, level.sigma, 0.0, spec);
    const double s = transmit_second_moment(setup.transmit, setup.field.noise, level.sigma, 0.0,
                                            spec);
    spread += (level.count / total) * (s - m * m);
  }
  return root * root / (spread + setup.channel.noise_var / setup.channel.total_power);
}

OmegaOptimum optimal_omega(const DetectionSetup& setup, double lo, double hi, int grid_points,
                           const QuadratureSpec& spec) {
  auto negative_deflection = [&](double omega) {
    DetectionSetup trial = setup;
    trial.transmit = setup.transmit.with_omega(omega);
    return -deflection(trial, spec);
  };
  const auto best = minimize_scalar(negative_deflection, lo, hi, grid_points);
  return {best.argmin, -best.min_value};
}

double GaussianApproxDetector::log_likelihood_ratio(double y) const {
  const double d0 = y - mean0;
  const double d1 = y - mean1;
  return -0.5 * std::log(var1 / var0) - d1 * d1 / (2.0 * var1) + d0 * d0 / (2.0 * var0);
}

GaussianApproxDetector build_detector(const DetectionSetup& setup, const QuadratureSpec& spec) {
  setup.validate();
  const auto& f = setup.transmit;
  const auto& noise = setup.field.noise;
  const double rho = setup.channel.per_sensor_power(setup.field.sensors);

  double sum_mean0 = 0.0, sum_mean1 = 0.0, sum_var0 = 0.0, sum_var1 = 0.0;
  for (const auto& level : weighted_levels(setup.field)) {
    const double m0 = transmit_mean(f, noise, level.sigma, 0.0, spec);
    const double m1 = transmit_mean(f, noise, level.sigma, setup.theta, spec);
    const double s0 = transmit_second_moment(f, noise, level.sigma, 0.0, spec);
    const double s1 = transmit_second_moment(f, noise, level.sigma, setup.theta, spec);
    sum_mean0 += level.count * m0;
    sum_mean1 += level.count * m1;
    sum_var0 += level.count * (s0 - m0 * m0);
    sum_var1 += level.count * (s1 - m1 * m1);
  }

  GaussianApproxDetector detector;
  detector.mean0 = std::sqrt(rho) * sum_mean0;
  detector.mean1 = std::sqrt(rho) * sum_mean1;
  detector.var0 = rho * sum_var0 + setup.channel.noise_var;
  detector.var1 = rho * sum_var1 + setup.channel.noise_var;
  detector.log_prior_ratio = std::log(setup.prior_h1) - std::log(setup.prior_h0);
  return detector;
}

Hypothesis decide(const GaussianApproxDetector& detector, double y) {
  return detector.log_likelihood_ratio(y) >= -detector.log_prior_ratio ? Hypothesis::h1
                                                                        : Hypothesis::h0;
}

DetectionTrial run_detection_trial(const DetectionSetup& setup,
                                   const GaussianApproxDetector& detector, RngStream& stream,
                                   const Hypothesis* forced) {
  DetectionTrial trial{};
  if (forced)
    trial.truth = *forced;
  else
    trial.truth = stream.uniform() < setup.prior_h1 ? Hypothesis::h1 : Hypothesis::h0;

  const double signal = trial.truth == Hypothesis::h1 ? setup.theta : 0.0;
  const auto& sigmas = setup.field.sigmas;
  double sum = 0.0;
  for (std::size_t i = 1; i <= setup.field.sensors; ++i)
    sum += setup.transmit.eval(signal + sigmas.at(i) * setup.field.noise.draw(stream));
  const double v = std::sqrt(setup.channel.noise_var) * NoiseModel::gaussian(1.0).draw(stream);
  trial.y = std::sqrt(setup.channel.per_sensor_power(setup.field.sensors)) * sum + v;
  trial.decision = decide(detector, trial.y);
  return trial;
}

ErrorProbability error_probability(const DetectionSetup& setup, std::uint64_t trials,
                                   const RngStream& stream,
                                   const ErrorProbabilityOptions& options,
                                   const QuadratureSpec& spec) {
  if (trials == 0) throw PreconditionError("error_probability needs at least one trial");
  const auto detector = build_detector(setup, spec);

  std::uint64_t h1_trials = 0;
  if (options.stratified)
    h1_trials = static_cast<std::uint64_t>(std::llround(setup.prior_h1 * trials));
  const std::uint64_t h0_trials = trials - h1_trials;

  // error flag per trial, plus the hypothesis that was in force
  std::vector<std::uint8_t> wrong(trials), under_h1(trials);
  parallel_for(trials, options.workers, [&](std::size_t t) {
    RngStream trial_stream = split_stream(stream, stream.stream_id() + t);
    Hypothesis forced = t < h0_trials ? Hypothesis::h0 : Hypothesis::h1;
    const auto outcome = run_detection_trial(setup, detector, trial_stream,
                                             options.stratified ? &forced : nullptr);
    wrong[t] = outcome.decision != outcome.truth;
    under_h1[t] = outcome.truth == Hypothesis::h1;
  });

  ErrorProbability out;
  out.trials = trials;
  std::uint64_t errors0 = 0, errors1 = 0;
  for (std::uint64_t t = 0; t < trials; ++t) (under_h1[t] ? errors1 : errors0) += wrong[t];
  out.errors = errors0 + errors1;

  if (!options.stratified) {
    out.pe = static_cast<double>(out.errors) / trials;
    out.standard_error = std::sqrt(out.pe * (1.0 - out.pe) / trials);
    return out;
  }
  double pe = 0.0, var = 0.0;
  auto add_stratum = [&](double prior, std::uint64_t errors, std::uint64_t n) {
    if (n == 0) return;
    const double p = static_cast<double>(errors) / n;
    pe += prior * p;
    var += prior * prior * p * (1.0 - p) / n;
  };
  add_stratum(setup.prior_h0, errors0, h0_trials);
  add_stratum(setup.prior_h1, errors1, h1_trials);
  out.pe = pe;
  out.standard_error = std::sqrt(var);
  return out;
}

std::function<double(double)> locally_optimal_nonlinearity(const NoiseModel& model) {
  return [model](double x) { return model.score(x); };
}

namespace {

constexpr double kLogUnderflow = 745.0;
constexpr double kMaxExtent = 4096.0;

}  // namespace

MatchedDensity::MatchedDensity(std::function<double(double)> f, QuadratureSpec spec,
                               std::vector<double> breakpoints)
    : f_(std::move(f)), spec_(spec), breakpoints_(std::move(breakpoints)) {
  spec_.validate();
  // Tabulate F on cells of width cell_ outward from 0 until exp(-F) underflows.
  auto extend = [&](std::vector<double>& prefix, double direction) {
    prefix = {0.0};
    double x = 0.0;
    while (prefix.back() < kLogUnderflow && std::abs(x) < kMaxExtent) {
      const double next = x + direction * cell_;
      prefix.push_back(prefix.back() + integrate_f(x, next));
      x = next;
    }
    const double extent = std::abs(x);
    if (prefix.back() >= kLogUnderflow) return std::pair{extent, 0.0};
    // Power-law tail p ~ |x|^-a: a must exceed one for the density to be integrable.
    const std::size_t half = prefix.size() / 2;
    const double exponent = (prefix.back() - prefix[half]) / std::log(extent / (half * cell_));
    if (!(exponent > 1.0))
      throw NonNormalizableError("exp(-integral of f) is not integrable (tail exponent " +
                                 std::to_string(exponent) + ")");
    return std::pair{extent, std::exp(-prefix.back()) * extent / (exponent - 1.0)};
  };
  const auto [upper, upper_tail] = extend(prefix_pos_, 1.0);
  const auto [lower, lower_tail] = extend(prefix_neg_, -1.0);
  upper_ = upper;
  lower_ = lower;

  std::vector<double> points = breakpoints_;
  points.push_back(0.0);
  QuadratureSpec outer = spec_;
  outer.max_subdivisions = std::max(outer.max_subdivisions, 4000);
  const auto mass = integrate([&](double x) { return std::exp(-antiderivative(x)); }, -lower_,
                              upper_, outer, points, "matched density normalization");
  const double total = mass.value + upper_tail + lower_tail;
  if (!(total > 0.0) || !std::isfinite(total))
    throw NonNormalizableError("matched density normalization is not finite");
  normalizer_ = 1.0 / total;
}

double MatchedDensity::integrate_f(double a, double b) const {
  if (a == b) return 0.0;
  QuadratureSpec inner = spec_;
  inner.rel_tol = std::min(inner.rel_tol, 1e-12);
  inner.abs_tol = std::min(inner.abs_tol, 1e-15);
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  return sign * integrate(f_, lo, hi, inner, breakpoints_, "antiderivative of f").value;
}

double MatchedDensity::antiderivative(double x) const {
  const auto& prefix = x >= 0.0 ? prefix_pos_ : prefix_neg_;
  const double direction = x >= 0.0 ? 1.0 : -1.0;
  const double steps = std::floor(std::abs(x) / cell_);
  const auto k = std::min(static_cast<std::size_t>(steps), prefix.size() - 1);
  const double start = direction * static_cast<double>(k) * cell_;
  return prefix[k] + integrate_f(start, x);
}

double MatchedDensity::operator()(double x) const {
  return normalizer_ * std::exp(-antiderivative(x));
}

MatchedDensity matched_density(const TransmitFunction& f, const QuadratureSpec& spec) {
  return MatchedDensity([f](double x) { return f.eval(x); }, spec, f.kinks());
}

MatchedDensity matched_density(std::function<double(double)> f, const QuadratureSpec& spec) {
  return MatchedDensity(std::move(f), spec);
}

}  // namespace bmac
